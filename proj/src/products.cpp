#include "ordercert/products.hpp"

#include <algorithm>
#include <bit>

#include "ordercert/errors.hpp"
#include "ordercert/text.hpp"
#include "parallel.hpp"

namespace ordercert {

FiniteSubset::FiniteSubset(Group owner, std::vector<Element> members) : owner_(owner), members_(std::move(members)) {
  for (auto const& m : members_)
    if (!(m.group() == owner_)) throw OwnerMismatch("subset member " + render(m) + " outside " + owner_.spec());
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

FiniteSubset FiniteSubset::of(std::vector<Element> members) {
  if (members.empty()) throw PreconditionFailed("finite subset must be nonempty");
  auto owner = members.front().group();
  return FiniteSubset(owner, std::move(members));
}

bool FiniteSubset::contains(Element const& g) const {
  return std::binary_search(members_.begin(), members_.end(), g);
}

FiniteSubset left_translate(Element const& g, FiniteSubset const& S) {
  std::vector<Element> out;
  for (auto const& s : S.members()) out.push_back(multiply(g, s));
  return FiniteSubset(S.owner(), std::move(out));
}

FiniteSubset right_translate(FiniteSubset const& S, Element const& g) {
  std::vector<Element> out;
  for (auto const& s : S.members()) out.push_back(multiply(s, g));
  return FiniteSubset(S.owner(), std::move(out));
}

FiniteSubset image(Homomorphism const& q, FiniteSubset const& S) {
  if (!(q.source() == S.owner())) throw OwnerMismatch("map starts at " + q.source().spec() + ", set lives in " +
                                                      S.owner().spec());
  std::vector<Element> out;
  for (auto const& s : S.members()) out.push_back(q(s));
  return FiniteSubset(q.target(), std::move(out));
}

namespace {

void require_pair(FiniteSubset const& A, FiniteSubset const& B) {
  if (A.empty() || B.empty()) throw PreconditionFailed("unique products need nonempty sets");
  if (!(A.owner() == B.owner())) throw OwnerMismatch(A.owner().spec() + " vs " + B.owner().spec());
}

struct Cell {
  Element product;
  std::size_t i;
  std::size_t j;
};

}  // namespace

UniqueProductReport unique_products(FiniteSubset const& A, FiniteSubset const& B, Exec exec) {
  require_pair(A, B);
  auto const& a = A.members();
  auto const& b = B.members();
  std::vector<std::vector<Cell>> rows(a.size());
  detail::for_each_index(a.size(), exec, [&](std::size_t i) {
    rows[i].reserve(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) rows[i].push_back({multiply(a[i], b[j]), i, j});
  });
  std::vector<Cell> table;
  table.reserve(a.size() * b.size());
  for (auto& r : rows) std::move(r.begin(), r.end(), std::back_inserter(table));
  std::sort(table.begin(), table.end(), [](Cell const& x, Cell const& y) { return x.product < y.product; });

  UniqueProductReport report;
  for (std::size_t k = 0; k < table.size();) {
    auto end = k + 1;
    while (end < table.size() && table[end].product == table[k].product) ++end;
    if (end == k + 1) report.products.push_back({table[k].product, a[table[k].i], b[table[k].j]});
    k = end;
  }
  return report;
}

bool is_unique_product(FiniteSubset const& A, FiniteSubset const& B, Element const& a, Element const& b) {
  if (!A.contains(a) || !B.contains(b)) return false;
  auto target = multiply(a, b);
  std::size_t hits = 0;
  for (auto const& x : A.members())
    for (auto const& y : B.members())
      if (multiply(x, y) == target && ++hits > 1) return false;
  return hits == 1;
}

NormalizedPair upp_normalize(FiniteSubset const& X, FiniteSubset const& Y) {
  require_pair(X, Y);
  auto x = X.members().front();
  auto y = Y.members().front();
  return {left_translate(invert(x), X), right_translate(Y, invert(y)), x, y};
}

UniqueProduct upp_pullback(NormalizedPair const& n, UniqueProduct const& normalized) {
  auto g = multiply(n.x, normalized.a);
  auto h = multiply(normalized.b, n.y);
  return {multiply(g, h), g, h};
}

namespace {

bool has_unique_product(std::vector<Element> const& X, std::vector<Element> const& Y) {
  std::vector<Element> table;
  table.reserve(X.size() * Y.size());
  for (auto const& x : X)
    for (auto const& y : Y) table.push_back(multiply(x, y));
  std::sort(table.begin(), table.end());
  for (std::size_t k = 0; k < table.size();) {
    auto end = k + 1;
    while (end < table.size() && table[end] == table[k]) ++end;
    if (end == k + 1) return true;
    k = end;
  }
  return false;
}

constexpr std::size_t max_subset_condition_size = 12;

}  // namespace

SubsetConditionReport upp_subset_condition(FiniteSubset const& A, Exec exec) {
  if (A.empty() || !A.contains(A.owner().identity()))
    throw PreconditionFailed("subset condition needs id in A");
  if (A.size() > max_subset_condition_size)
    throw PreconditionFailed("subset condition is exhaustive; |A| must be at most " +
                             std::to_string(max_subset_condition_size));

  auto id = A.owner().identity();
  std::vector<Element> others;
  for (auto const& a : A.members())
    if (!(a == id)) others.push_back(a);
  auto const k = others.size();
  auto const masks = std::size_t{1} << k;
  auto subset = [&](std::size_t mask) {
    std::vector<Element> s{id};
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1U) s.push_back(others[i]);
    return s;
  };

  // Per X mask: number of qualifying Y masks scanned, and the first failing one.
  struct Row {
    std::size_t checked = 0;
    std::optional<std::size_t> failing;
  };
  std::vector<Row> rows(masks);
  auto scan_row = [&](std::size_t mx) {
    auto X = subset(mx);
    auto& row = rows[mx];
    for (std::size_t my = 0; my < masks; ++my) {
      if (X.size() + 1 + static_cast<std::size_t>(std::popcount(my)) > A.size()) continue;
      ++row.checked;
      if (!has_unique_product(X, subset(my))) {
        row.failing = my;
        return;
      }
    }
  };
  if (exec == Exec::parallel) {
    detail::for_each_index(masks, exec, scan_row);
  } else {
    for (std::size_t mx = 0; mx < masks; ++mx) {
      scan_row(mx);
      if (rows[mx].failing) break;
    }
  }

  SubsetConditionReport report;
  for (std::size_t mx = 0; mx < masks; ++mx) {
    report.pairs_checked += rows[mx].checked;
    if (rows[mx].failing) {
      report.holds = false;
      report.counterexample.emplace(FiniteSubset(A.owner(), subset(mx)),
                                    FiniteSubset(A.owner(), subset(*rows[mx].failing)));
      break;
    }
  }
  return report;
}

std::optional<UniqueProduct> brute_force_unique_product(FiniteSubset const& X, FiniteSubset const& Y) {
  auto report = unique_products(X, Y, Exec::serial);
  if (report.products.empty()) return std::nullopt;
  return report.products.back();
}

namespace {

bool in_kernel(Homomorphism const& q, Element const& g) { return q(g).is_identity(); }

void require_identity(FiniteSubset const& S, char const* name) {
  if (S.empty() || !S.contains(S.owner().identity()))
    throw PreconditionFailed(std::string("lift needs id in ") + name);
}

UniqueProduct checked(FiniteSubset const& X, FiniteSubset const& Y, UniqueProduct p) {
  if (!is_unique_product(X, Y, p.a, p.b) || !(p.product == multiply(p.a, p.b)))
    throw Error("lift produced " + render(p.product) + ", which is not a unique product");
  return p;
}

// Largest member of S with image v under q.
Element largest_over(FiniteSubset const& S, Homomorphism const& q, Element const& v) {
  for (auto it = S.members().rbegin(); it != S.members().rend(); ++it)
    if (q(*it) == v) return *it;
  throw Error("no member over " + render(v));
}

}  // namespace

UniqueProduct upp_lift(FiniteSubset const& X, FiniteSubset const& Y, Homomorphism const& q,
                       UniqueProductProvider const& kernel_oracle) {
  require_pair(X, Y);
  require_identity(X, "X");
  require_identity(Y, "Y");
  if (!(q.source() == X.owner())) throw OwnerMismatch("map starts at " + q.source().spec());

  auto all_in_kernel = [&](FiniteSubset const& S) {
    return std::all_of(S.members().begin(), S.members().end(), [&](Element const& g) { return in_kernel(q, g); });
  };
  if (all_in_kernel(X) && all_in_kernel(Y)) {
    auto p = kernel_oracle(X, Y);
    if (!p) throw PreconditionFailed("kernel oracle found no unique product");
    return checked(X, Y, *p);
  }

  auto base = brute_force_unique_product(image(q, X), image(q, Y));
  if (!base) throw PreconditionFailed("no unique product for q(X)q(Y)");
  auto x = largest_over(X, q, base->a);
  auto y = largest_over(Y, q, base->b);

  std::vector<Element> s_side, t_side;
  for (auto const& s : X.members())
    if (q(s) == base->a) s_side.push_back(multiply(invert(x), s));
  for (auto const& t : Y.members())
    if (q(t) == base->b) t_side.push_back(multiply(t, invert(y)));
  FiniteSubset KS(X.owner(), std::move(s_side));
  FiniteSubset KT(Y.owner(), std::move(t_side));

  auto inner = kernel_oracle(KS, KT);
  if (!inner) throw PreconditionFailed("kernel oracle found no unique product");
  auto s = multiply(x, inner->a);
  auto t = multiply(inner->b, y);
  return checked(X, Y, {multiply(s, t), s, t});
}

namespace {

UniqueProduct upp_lift_chain_at(FiniteSubset const& X, FiniteSubset const& Y, std::span<Homomorphism const> chain,
                                std::size_t level, std::size_t cap) {
  if (level > cap) throw BudgetExceeded("lift recursion exceeded |X| + |Y| levels");
  if (chain.empty()) {
    auto p = brute_force_unique_product(X, Y);
    if (!p) throw PreconditionFailed("no unique product in the bottom kernel");
    return *p;
  }
  auto rest = chain.subspan(1);
  return upp_lift(X, Y, chain.front(), [&](FiniteSubset const& A, FiniteSubset const& B) {
    return std::optional<UniqueProduct>(upp_lift_chain_at(A, B, rest, level + 1, cap));
  });
}

}  // namespace

UniqueProduct upp_lift_chain(FiniteSubset const& X, FiniteSubset const& Y, std::span<Homomorphism const> chain) {
  require_pair(X, Y);
  return upp_lift_chain_at(X, Y, chain, 0, X.size() + Y.size());
}

UniqueProduct find_unique_product(FiniteSubset const& X, FiniteSubset const& Y, std::span<Homomorphism const> chain) {
  auto n = upp_normalize(X, Y);
  auto p = upp_pullback(n, upp_lift_chain(n.X, n.Y, chain));
  return checked(X, Y, p);
}

std::vector<Element> extreme_points(FiniteSubset const& A, Exec exec) {
  if (A.empty()) throw PreconditionFailed("extreme points of an empty set");
  auto const& a = A.members();
  std::vector<char> extreme(a.size());
  detail::for_each_index(a.size(), exec, [&](std::size_t i) { extreme[i] = is_extreme_point(A, a[i]); });
  std::vector<Element> out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (extreme[i]) out.push_back(a[i]);
  return out;
}

bool is_extreme_point(FiniteSubset const& A, Element const& a) {
  if (!A.contains(a)) return false;
  auto ainv = invert(a);
  std::vector<Element> left, right;
  for (auto const& x : A.members()) {
    left.push_back(multiply(ainv, x));
    right.push_back(multiply(invert(x), a));
  }
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  std::vector<Element> common;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(), std::back_inserter(common));
  return common.size() == 1 && common.front().is_identity();
}

namespace {

Element pick_extreme(FiniteSubset const& S, ExtremeProvider const& provider, char const* which) {
  auto candidates = provider(S);
  if (candidates.empty()) throw PreconditionFailed(std::string(which) + " provider returned no extreme point");
  auto best = *std::max_element(candidates.begin(), candidates.end());
  if (!is_extreme_point(S, best))
    throw PreconditionFailed(std::string(which) + " provider returned " + render(best) + ", not an extreme point");
  return best;
}

}  // namespace

Element diffuse_lift(FiniteSubset const& X, Homomorphism const& q, ExtremeProvider const& base_extreme,
                     ExtremeProvider const& kernel_extreme) {
  require_identity(X, "X");
  if (!(q.source() == X.owner())) throw OwnerMismatch("map starts at " + q.source().spec());

  auto c = pick_extreme(image(q, X), base_extreme, "base");
  auto a = largest_over(X, q, c);
  auto ainv = invert(a);
  std::vector<Element> kernel_part;
  for (auto const& x : X.members()) {
    auto k = multiply(ainv, x);
    if (in_kernel(q, k)) kernel_part.push_back(std::move(k));
  }
  auto b = pick_extreme(FiniteSubset(X.owner(), std::move(kernel_part)), kernel_extreme, "kernel");
  auto out = multiply(a, b);
  if (!is_extreme_point(X, out)) throw Error("lift produced " + render(out) + ", which is not an extreme point");
  return out;
}

Element diffuse_lift_chain(FiniteSubset const& X, std::span<Homomorphism const> chain) {
  if (chain.empty()) return pick_extreme(X, brute_force_extreme_points, "bottom");
  auto rest = chain.subspan(1);
  return diffuse_lift(X, chain.front(), brute_force_extreme_points, [&](FiniteSubset const& S) {
    return std::vector<Element>{diffuse_lift_chain(S, rest)};
  });
}

}  // namespace ordercert
