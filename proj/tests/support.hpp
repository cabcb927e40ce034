#pragma once

#include <random>
#include <string>
#include <vector>

#include "ordercert/group.hpp"
#include "ordercert/text.hpp"

namespace test_support {

inline ordercert::Element el(ordercert::Group g, std::string const& text) { return ordercert::parse_element(text, g); }

inline std::vector<ordercert::Element> els(ordercert::Group g, std::vector<std::string> const& texts) {
  std::vector<ordercert::Element> out;
  for (auto const& t : texts) out.push_back(el(g, t));
  return out;
}

inline ordercert::Element lp(std::string const& poly, long z = 0) {
  return el(ordercert::Group::laurent_semidirect(), "poly:" + poly + ";z:" + std::to_string(z));
}

/// k distinct draws from ball(g, radius), fixed seed per call site.
inline std::vector<ordercert::Element> sample(ordercert::Group g, int radius, std::size_t k, std::mt19937_64& rng,
                                              bool allow_identity = true) {
  auto pool = ordercert::ball(g, radius).members;
  if (!allow_identity) std::erase_if(pool, [](auto const& e) { return e.is_identity(); });
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > k) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end());
  return pool;
}

}  // namespace test_support
