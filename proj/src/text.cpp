#include "ordercert/text.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "ordercert/errors.hpp"

namespace ordercert {

namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\n\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

Element parse_tokens(std::string_view text, Group g) {
  auto labels = g.generator_labels();
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "id") continue;
    std::string_view t = tok;
    std::int64_t exp = 1;
    if (auto caret = t.find('^'); caret != std::string_view::npos) {
      exp = parse_int(t.substr(caret + 1), "exponent");
      t = t.substr(0, caret);
    }
    auto it = std::find(labels.begin(), labels.end(), t);
    if (it == labels.end())
      throw ParseError("unknown generator '" + std::string(t) + "' for " + g.spec());
    w.push_back({static_cast<std::size_t>(it - labels.begin()), exp});
  }
  return evaluate(g, w);
}

Element parse_poly(std::string_view text, Group g) {
  if (g.kind() != GroupKind::laurent_semidirect)
    throw ParseError("poly syntax is only valid for laurent-z, not " + g.spec());
  auto parts = split_top_level(text, ';');
  if (parts.size() != 2 || !starts_with(parts[0], "poly:") || !starts_with(parts[1], "z:"))
    throw ParseError("expected poly:...;z:int, got '" + std::string(text) + "'");
  LaurentPoly p;
  auto body = trim(std::string_view(parts[0]).substr(5));
  if (body != "0" && !body.empty()) {
    for (auto const& mono : split_top_level(body, '+')) {
      std::string_view m = mono;
      auto star = m.find("*t^");
      if (star == std::string_view::npos) throw ParseError("monomial must be coeff*t^exp: '" + mono + "'");
      p += LaurentPoly::monomial(parse_int(m.substr(0, star), "coefficient"),
                                 parse_int(m.substr(star + 3), "exponent"));
    }
  }
  return laurent_element(g, p, parse_int(std::string_view(parts[1]).substr(2), "z exponent"));
}

std::string power_token(std::string const& label, std::int64_t exp) {
  return exp == 1 ? label : label + "^" + std::to_string(exp);
}

}  // namespace

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> out;
  int nest = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[') ++nest;
    if (c == ')' || c == ']') --nest;
    if (c == sep && nest == 0) {
      out.emplace_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.emplace_back(trim(text.substr(start)));
  return out;
}

Group parse_group(std::string_view spec) {
  spec = trim(spec);
  auto param = [&](std::string_view prefix) {
    auto v = parse_int(spec.substr(prefix.size()), "group parameter");
    if (v < 1) throw ParseError("group parameter must be positive in '" + std::string(spec) + "'");
    return static_cast<int>(v);
  };
  if (starts_with(spec, "free:")) return Group::free(param("free:"));
  if (starts_with(spec, "abelian:")) return Group::free_abelian(param("abelian:"));
  if (starts_with(spec, "cyclic:")) return Group::finite_cyclic(param("cyclic:"));
  if (spec == "klein") return Group::klein_bottle();
  if (spec == "heisenberg") return Group::heisenberg();
  if (spec == "laurent-z") return Group::laurent_semidirect();
  if (starts_with(spec, "product(") && spec.back() == ')') {
    std::vector<Group> factors;
    for (auto const& f : split_top_level(spec.substr(8, spec.size() - 9), ','))
      factors.push_back(parse_group(f));
    if (factors.size() < 2) throw ParseError("product needs at least two factors");
    return Group::direct_product(std::move(factors));
  }
  throw ParseError("unknown group spec '" + std::string(spec) + "'");
}

Element parse_element(std::string_view text, Group g) {
  text = trim(text);
  if (starts_with(text, "poly:")) return parse_poly(text, g);
  if (!text.empty() && text.front() == '[') {
    if (g.kind() != GroupKind::direct_product || text.back() != ']')
      throw ParseError("bracket syntax is only valid for products, got '" + std::string(text) + "'");
    auto parts = split_top_level(text.substr(1, text.size() - 2), '|');
    if (parts.size() != g.factors().size()) throw ParseError("wrong number of product components");
    std::vector<Element> comps;
    for (std::size_t i = 0; i < parts.size(); ++i) comps.push_back(parse_element(parts[i], g.factors()[i]));
    return product_element(g, comps);
  }
  return parse_tokens(text, g);
}

std::string render(Element const& e) {
  auto g = e.group();
  auto labels = g.generator_labels();
  switch (g.kind()) {
    case GroupKind::laurent_semidirect: {
      auto [p, z] = laurent_parts(e);
      return "poly:" + p.to_string() + ";z:" + std::to_string(z);
    }
    case GroupKind::direct_product: {
      std::string out = "[";
      auto parts = product_components(e);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '|';
        out += render(parts[i]);
      }
      return out + "]";
    }
    default:
      break;
  }
  std::string out;
  for (auto const& s : as_word(e)) {
    if (!out.empty()) out += ' ';
    out += power_token(labels[s.generator], s.exponent);
  }
  return out.empty() ? "id" : out;
}

}  // namespace ordercert
