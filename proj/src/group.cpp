#include "ordercert/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_set>

#include "ordercert/errors.hpp"

namespace ordercert {

struct Group::Data {
  GroupKind kind = GroupKind::free;
  int parameter = 0;
  std::vector<Group> factors;
  std::vector<std::string> labels;
  // generator offset of each factor, for direct products
  std::vector<std::size_t> factor_offsets;
  std::string spec;
};

namespace {

std::string letter_label(int i, int n) {
  if (n <= 26) return std::string(1, static_cast<char>('a' + i));
  return "g" + std::to_string(i + 1);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  auto r = a % n;
  return r < 0 ? r + n : r;
}

std::int64_t klein_sign(std::int64_t n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace

Group Group::intern(Data data) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<Data const>> registry;
  std::scoped_lock lock(mutex);
  auto it = registry.find(data.spec);
  if (it == registry.end()) {
    auto key = data.spec;
    it = registry.emplace(std::move(key), std::make_unique<Data const>(std::move(data))).first;
  }
  return Group(it->second.get());
}

Group Group::free(int rank) {
  if (rank < 1) throw PreconditionFailed("free group rank must be >= 1");
  Data d;
  d.kind = GroupKind::free;
  d.parameter = rank;
  for (int i = 0; i < rank; ++i) d.labels.push_back(letter_label(i, rank));
  d.spec = "free:" + std::to_string(rank);
  return intern(std::move(d));
}

Group Group::free_abelian(int rank) {
  if (rank < 1) throw PreconditionFailed("free abelian rank must be >= 1");
  Data d;
  d.kind = GroupKind::free_abelian;
  d.parameter = rank;
  for (int i = 0; i < rank; ++i) d.labels.push_back(letter_label(i, rank));
  d.spec = "abelian:" + std::to_string(rank);
  return intern(std::move(d));
}

Group Group::finite_cyclic(int order) {
  if (order < 1) throw PreconditionFailed("cyclic order must be >= 1");
  Data d;
  d.kind = GroupKind::finite_cyclic;
  d.parameter = order;
  d.labels = {"a"};
  d.spec = "cyclic:" + std::to_string(order);
  return intern(std::move(d));
}

Group Group::klein_bottle() {
  Data d;
  d.kind = GroupKind::klein_bottle;
  d.labels = {"a", "b"};
  d.spec = "klein";
  return intern(std::move(d));
}

Group Group::heisenberg() {
  Data d;
  d.kind = GroupKind::heisenberg;
  d.labels = {"x", "y", "z"};
  d.spec = "heisenberg";
  return intern(std::move(d));
}

Group Group::laurent_semidirect() {
  Data d;
  d.kind = GroupKind::laurent_semidirect;
  d.labels = {"t", "z"};
  d.spec = "laurent-z";
  return intern(std::move(d));
}

Group Group::direct_product(std::vector<Group> factors) {
  if (factors.size() < 2) throw PreconditionFailed("direct product needs at least two factors");
  Data d;
  d.kind = GroupKind::direct_product;
  d.spec = "product(";
  std::size_t offset = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) d.spec += ',';
    d.spec += factors[i].spec();
    d.factor_offsets.push_back(offset);
    for (auto const& label : factors[i].generator_labels())
      d.labels.push_back(label + "_" + std::to_string(i + 1));
    offset += factors[i].generator_count();
  }
  d.spec += ')';
  d.factors = std::move(factors);
  return intern(std::move(d));
}

GroupKind Group::kind() const noexcept { return data_->kind; }
int Group::parameter() const noexcept { return data_->parameter; }
std::span<Group const> Group::factors() const noexcept { return data_->factors; }
std::size_t Group::generator_count() const noexcept { return data_->labels.size(); }
std::span<std::string const> Group::generator_labels() const noexcept { return data_->labels; }
std::string const& Group::spec() const noexcept { return data_->spec; }

bool Group::is_abelian() const noexcept {
  switch (kind()) {
    case GroupKind::free:
      return parameter() == 1;
    case GroupKind::free_abelian:
    case GroupKind::finite_cyclic:
      return true;
    case GroupKind::direct_product:
      return std::all_of(factors().begin(), factors().end(),
                         [](Group f) { return f.is_abelian(); });
    default:
      return false;
  }
}

bool Group::is_finite() const noexcept {
  switch (kind()) {
    case GroupKind::finite_cyclic:
      return true;
    case GroupKind::direct_product:
      return std::all_of(factors().begin(), factors().end(),
                         [](Group f) { return f.is_finite(); });
    default:
      return false;
  }
}

Element Group::identity() const {
  switch (kind()) {
    case GroupKind::free:
      return Element(*this, {});
    case GroupKind::free_abelian:
      return Element(*this, std::vector<std::int64_t>(static_cast<std::size_t>(parameter()), 0));
    case GroupKind::finite_cyclic:
      return Element(*this, {0});
    case GroupKind::klein_bottle:
      return Element(*this, {0, 0});
    case GroupKind::heisenberg:
      return Element(*this, {0, 0, 0});
    case GroupKind::laurent_semidirect:
      return Element(*this, {0});
    case GroupKind::direct_product: {
      std::vector<Element> parts;
      for (auto f : factors()) parts.push_back(f.identity());
      return product_element(*this, parts);
    }
  }
  throw PreconditionFailed("unknown group kind");
}

Element Group::generator(std::size_t index) const {
  if (index >= generator_count()) throw PreconditionFailed("generator index out of range");
  switch (kind()) {
    case GroupKind::free:
      return Element(*this, {static_cast<std::int64_t>(index) + 1});
    case GroupKind::free_abelian: {
      auto nf = identity().normal_form();
      nf[index] = 1;
      return Element(*this, std::move(nf));
    }
    case GroupKind::finite_cyclic:
      return element({1});
    case GroupKind::klein_bottle:
      return index == 0 ? Element(*this, {1, 0}) : Element(*this, {0, 1});
    case GroupKind::heisenberg: {
      std::vector<std::int64_t> nf{0, 0, 0};
      nf[index] = 1;
      return Element(*this, std::move(nf));
    }
    case GroupKind::laurent_semidirect:
      return index == 0 ? Element(*this, {0, 0, 1}) : Element(*this, {1});
    case GroupKind::direct_product: {
      auto const& offsets = data_->factor_offsets;
      auto it = std::upper_bound(offsets.begin(), offsets.end(), index);
      auto f = static_cast<std::size_t>(std::distance(offsets.begin(), it)) - 1;
      std::vector<Element> parts;
      for (auto g : factors()) parts.push_back(g.identity());
      parts[f] = factors()[f].generator(index - offsets[f]);
      return product_element(*this, parts);
    }
  }
  throw PreconditionFailed("unknown group kind");
}

namespace {

std::vector<std::int64_t> reduce_free(std::vector<std::int64_t> const& letters, int rank) {
  std::vector<std::int64_t> out;
  out.reserve(letters.size());
  for (auto l : letters) {
    if (l == 0 || l > rank || l < -rank) throw PreconditionFailed("free letter out of range");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

std::vector<std::int64_t> laurent_nf(LaurentPoly const& p, std::int64_t z) {
  std::vector<std::int64_t> nf{z};
  nf.reserve(1 + 2 * p.terms().size());
  for (auto const& [e, c] : p.terms()) {
    nf.push_back(e);
    nf.push_back(c);
  }
  return nf;
}

}  // namespace

Element Group::element(std::vector<std::int64_t> coords) const {
  switch (kind()) {
    case GroupKind::free:
      return Element(*this, reduce_free(coords, parameter()));
    case GroupKind::free_abelian:
      if (coords.size() != static_cast<std::size_t>(parameter()))
        throw PreconditionFailed("wrong coordinate count for " + spec());
      return Element(*this, std::move(coords));
    case GroupKind::finite_cyclic:
      if (coords.size() != 1) throw PreconditionFailed("cyclic element needs one coordinate");
      return Element(*this, {floor_mod(coords[0], parameter())});
    case GroupKind::klein_bottle:
      if (coords.size() != 2) throw PreconditionFailed("klein element needs two coordinates");
      return Element(*this, std::move(coords));
    case GroupKind::heisenberg:
      if (coords.size() != 3) throw PreconditionFailed("heisenberg element needs three coordinates");
      return Element(*this, std::move(coords));
    case GroupKind::laurent_semidirect: {
      if (coords.empty() || coords.size() % 2 != 1)
        throw PreconditionFailed("laurent element needs (z, e1, c1, ...)");
      LaurentPoly::Terms terms;
      LaurentPoly p;
      for (std::size_t i = 1; i < coords.size(); i += 2)
        p += LaurentPoly::monomial(coords[i + 1], coords[i]);
      return Element(*this, laurent_nf(p, coords[0]));
    }
    case GroupKind::direct_product: {
      std::vector<Element> parts;
      std::size_t pos = 0;
      for (auto f : factors()) {
        if (pos >= coords.size()) throw PreconditionFailed("truncated product coordinates");
        auto len = static_cast<std::size_t>(coords[pos++]);
        if (pos + len > coords.size()) throw PreconditionFailed("truncated product coordinates");
        parts.push_back(f.element({coords.begin() + static_cast<std::ptrdiff_t>(pos),
                                   coords.begin() + static_cast<std::ptrdiff_t>(pos + len)}));
        pos += len;
      }
      if (pos != coords.size()) throw PreconditionFailed("trailing product coordinates");
      return product_element(*this, parts);
    }
  }
  throw PreconditionFailed("unknown group kind");
}

bool Element::is_identity() const { return *this == group_.identity(); }

std::size_t ElementHash::operator()(Element const& e) const noexcept {
  std::size_t h = std::hash<std::string const*>{}(&e.group().spec());
  for (auto v : e.normal_form()) h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

void require_same_owner(Element const& g, Element const& h) {
  if (!(g.group() == h.group()))
    throw OwnerMismatch("elements of " + g.group().spec() + " and " + h.group().spec());
}

std::pair<LaurentPoly, std::int64_t> laurent_parts(Element const& e) {
  if (e.group().kind() != GroupKind::laurent_semidirect)
    throw PreconditionFailed("not a laurent_semidirect element");
  auto const& nf = e.normal_form();
  LaurentPoly::Terms terms;
  for (std::size_t i = 1; i + 1 < nf.size(); i += 2) terms.emplace(nf[i], nf[i + 1]);
  return {LaurentPoly(std::move(terms)), nf[0]};
}

Element laurent_element(Group g, LaurentPoly const& poly, std::int64_t z_exponent) {
  if (g.kind() != GroupKind::laurent_semidirect) throw PreconditionFailed("not laurent_semidirect");
  return Element(g, laurent_nf(poly, z_exponent));
}

std::vector<Element> product_components(Element const& e) {
  auto g = e.group();
  if (g.kind() != GroupKind::direct_product) throw PreconditionFailed("not a direct product element");
  auto const& nf = e.normal_form();
  std::vector<Element> parts;
  std::size_t pos = 0;
  for (auto f : g.factors()) {
    auto len = static_cast<std::size_t>(nf[pos++]);
    parts.emplace_back(f, std::vector<std::int64_t>(nf.begin() + static_cast<std::ptrdiff_t>(pos),
                                                    nf.begin() + static_cast<std::ptrdiff_t>(pos + len)));
    pos += len;
  }
  return parts;
}

Element product_element(Group g, std::vector<Element> const& components) {
  if (g.kind() != GroupKind::direct_product) throw PreconditionFailed("not a direct product");
  if (components.size() != g.factors().size()) throw PreconditionFailed("wrong component count");
  std::vector<std::int64_t> nf;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (!(components[i].group() == g.factors()[i]))
      throw OwnerMismatch("component " + std::to_string(i) + " not in " + g.factors()[i].spec());
    auto const& c = components[i].normal_form();
    nf.push_back(static_cast<std::int64_t>(c.size()));
    nf.insert(nf.end(), c.begin(), c.end());
  }
  return Element(g, std::move(nf));
}

Element multiply(Element const& g, Element const& h) {
  require_same_owner(g, h);
  auto G = g.group();
  auto const& a = g.normal_form();
  auto const& b = h.normal_form();
  switch (G.kind()) {
    case GroupKind::free: {
      std::vector<std::int64_t> out = a;
      std::size_t i = 0;
      while (i < b.size() && !out.empty() && out.back() == -b[i]) {
        out.pop_back();
        ++i;
      }
      out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(i), b.end());
      return Element(G, std::move(out));
    }
    case GroupKind::free_abelian: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
      return Element(G, std::move(out));
    }
    case GroupKind::finite_cyclic:
      return Element(G, {floor_mod(a[0] + b[0], G.parameter())});
    case GroupKind::klein_bottle:
      return Element(G, {a[0] + klein_sign(a[1]) * b[0], a[1] + b[1]});
    case GroupKind::heisenberg:
      return Element(G, {a[0] + b[0], a[1] + b[1], a[2] + b[2] - a[1] * b[0]});
    case GroupKind::laurent_semidirect: {
      auto [p, k] = laurent_parts(g);
      auto [q, m] = laurent_parts(h);
      return laurent_element(G, p + q.shifted(k), k + m);
    }
    case GroupKind::direct_product: {
      auto x = product_components(g);
      auto y = product_components(h);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = multiply(x[i], y[i]);
      return product_element(G, x);
    }
  }
  throw PreconditionFailed("unknown group kind");
}

Element invert(Element const& g) {
  auto G = g.group();
  auto const& a = g.normal_form();
  switch (G.kind()) {
    case GroupKind::free: {
      std::vector<std::int64_t> out(a.rbegin(), a.rend());
      for (auto& l : out) l = -l;
      return Element(G, std::move(out));
    }
    case GroupKind::free_abelian: {
      std::vector<std::int64_t> out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
      return Element(G, std::move(out));
    }
    case GroupKind::finite_cyclic:
      return Element(G, {floor_mod(-a[0], G.parameter())});
    case GroupKind::klein_bottle:
      return Element(G, {-klein_sign(a[1]) * a[0], -a[1]});
    case GroupKind::heisenberg:
      return Element(G, {-a[0], -a[1], -a[2] - a[0] * a[1]});
    case GroupKind::laurent_semidirect: {
      auto [p, k] = laurent_parts(g);
      return laurent_element(G, -p.shifted(-k), -k);
    }
    case GroupKind::direct_product: {
      auto x = product_components(g);
      for (auto& c : x) c = invert(c);
      return product_element(G, x);
    }
  }
  throw PreconditionFailed("unknown group kind");
}

Element power(Element const& g, std::int64_t k) {
  Element base = k < 0 ? invert(g) : g;
  auto n = k < 0 ? -static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
  Element result = g.group().identity();
  while (n) {
    if (n & 1U) result = multiply(result, base);
    n >>= 1U;
    if (n) base = multiply(base, base);
  }
  return result;
}

Element conjugate(Element const& g, Element const& h) { return multiply(multiply(g, h), invert(g)); }

Element evaluate(Group g, Word const& word) {
  Element out = g.identity();
  for (auto const& s : word) out = multiply(out, power(g.generator(s.generator), s.exponent));
  return out;
}

Word as_word(Element const& e) {
  auto G = e.group();
  auto const& nf = e.normal_form();
  Word w;
  auto push = [&w](std::size_t gen, std::int64_t exp) {
    if (exp == 0) return;
    if (!w.empty() && w.back().generator == gen) {
      w.back().exponent += exp;
      if (w.back().exponent == 0) w.pop_back();
    } else {
      w.push_back({gen, exp});
    }
  };
  switch (G.kind()) {
    case GroupKind::free:
      for (auto l : nf) push(static_cast<std::size_t>(l > 0 ? l - 1 : -l - 1), l > 0 ? 1 : -1);
      break;
    case GroupKind::free_abelian:
    case GroupKind::klein_bottle:
    case GroupKind::heisenberg:
    case GroupKind::finite_cyclic:
      for (std::size_t i = 0; i < nf.size(); ++i) push(i, nf[i]);
      break;
    case GroupKind::laurent_semidirect:
      // (c t^e, 1) = z^e t^c z^-e
      for (std::size_t i = 1; i + 1 < nf.size(); i += 2) {
        push(1, nf[i]);
        push(0, nf[i + 1]);
        push(1, -nf[i]);
      }
      push(1, nf[0]);
      break;
    case GroupKind::direct_product: {
      auto parts = product_components(e);
      std::size_t offset = 0;
      for (std::size_t f = 0; f < parts.size(); ++f) {
        for (auto s : as_word(parts[f])) push(offset + s.generator, s.exponent);
        offset += G.factors()[f].generator_count();
      }
      break;
    }
  }
  return w;
}

namespace {

Word commutator(std::size_t i, std::size_t j) { return {{i, -1}, {j, -1}, {i, 1}, {j, 1}}; }

}  // namespace

std::vector<Word> relators(Group g) {
  std::vector<Word> out;
  switch (g.kind()) {
    case GroupKind::free:
      break;
    case GroupKind::free_abelian:
      for (std::size_t i = 0; i < g.generator_count(); ++i)
        for (std::size_t j = i + 1; j < g.generator_count(); ++j) out.push_back(commutator(i, j));
      break;
    case GroupKind::finite_cyclic:
      out.push_back({{0, g.parameter()}});
      break;
    case GroupKind::klein_bottle:
      out.push_back({{1, 1}, {0, 1}, {1, -1}, {0, 1}});  // b a b^-1 a
      break;
    case GroupKind::heisenberg:
      out.push_back({{0, -1}, {1, -1}, {0, 1}, {1, 1}, {2, -1}});  // [x,y] z^-1
      out.push_back(commutator(0, 2));
      out.push_back(commutator(1, 2));
      break;
    case GroupKind::laurent_semidirect:
      // The kernel is abelian: t commutes with its conjugates z^k t z^-k.
      // Infinitely many relators; the first few are checked.
      for (std::int64_t k = 1; k <= 3; ++k)
        out.push_back({{0, -1}, {1, k}, {0, -1}, {1, -k}, {0, 1}, {1, k}, {0, 1}, {1, -k}});
      break;
    case GroupKind::direct_product: {
      std::size_t offset = 0;
      std::vector<std::size_t> offsets;
      for (auto f : g.factors()) {
        offsets.push_back(offset);
        for (auto w : relators(f)) {
          for (auto& s : w) s.generator += offset;
          out.push_back(std::move(w));
        }
        offset += f.generator_count();
      }
      for (std::size_t a = 0; a < g.factors().size(); ++a)
        for (std::size_t b = a + 1; b < g.factors().size(); ++b)
          for (std::size_t i = 0; i < g.factors()[a].generator_count(); ++i)
            for (std::size_t j = 0; j < g.factors()[b].generator_count(); ++j)
              out.push_back(commutator(offsets[a] + i, offsets[b] + j));
      break;
    }
  }
  return out;
}

bool Ball::contains(Element const& e) const {
  return std::binary_search(members.begin(), members.end(), e);
}

Ball ball(Group g, int radius, std::size_t budget) {
  if (radius < 0) throw PreconditionFailed("ball radius must be >= 0");
  std::vector<Element> steps;
  for (std::size_t i = 0; i < g.generator_count(); ++i) {
    steps.push_back(g.generator(i));
    steps.push_back(invert(g.generator(i)));
  }
  std::unordered_set<Element, ElementHash> seen{g.identity()};
  std::vector<Element> frontier{g.identity()};
  for (int r = 0; r < radius && !frontier.empty(); ++r) {
    std::vector<Element> next;
    for (auto const& f : frontier) {
      for (auto const& s : steps) {
        auto e = multiply(f, s);
        if (seen.insert(e).second) {
          if (seen.size() > budget)
            throw BudgetExceeded("ball of " + g.spec() + " radius " + std::to_string(radius) +
                                 " exceeds " + std::to_string(budget) + " elements");
          next.push_back(std::move(e));
        }
      }
    }
    frontier = std::move(next);
  }
  Ball out{g, radius, {seen.begin(), seen.end()}};
  std::sort(out.members.begin(), out.members.end());
  return out;
}

}  // namespace ordercert
