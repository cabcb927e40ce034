#include "ordercert/laurent.hpp"

namespace ordercert {

LaurentPoly::LaurentPoly(Terms terms) {
  for (auto const& [e, c] : terms) add_term(e, c);
}

LaurentPoly LaurentPoly::monomial(std::int64_t coefficient, std::int64_t exponent) {
  LaurentPoly p;
  p.add_term(exponent, coefficient);
  return p;
}

std::optional<std::pair<std::int64_t, std::int64_t>> LaurentPoly::leading_term() const {
  if (terms_.empty()) return std::nullopt;
  auto const& [e, c] = *terms_.rbegin();
  return std::pair{e, c};
}

LaurentPoly LaurentPoly::shifted(std::int64_t k) const {
  LaurentPoly out;
  for (auto const& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e + k, c);
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

LaurentPoly& LaurentPoly::operator+=(LaurentPoly const& other) {
  for (auto const& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

void LaurentPoly::add_term(std::int64_t exponent, std::int64_t coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto const& [e, c] : terms_) {
    if (!out.empty()) out += '+';
    out += std::to_string(c) + "*t^" + std::to_string(e);
  }
  return out;
}

}  // namespace ordercert
