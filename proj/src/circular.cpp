#include "ordercert/circular.hpp"

#include <algorithm>
#include <numeric>

#include "ordercert/errors.hpp"
#include "ordercert/text.hpp"
#include "parallel.hpp"

namespace ordercert {

Triple make_triple(Element a, Element b, Element c) {
  require_same_owner(a, b);
  require_same_owner(a, c);
  return {std::move(a), std::move(b), std::move(c)};
}

bool is_degenerate(Triple const& t) { return t[0] == t[1] || t[1] == t[2] || t[0] == t[2]; }

Triple translate(Element const& y, Triple const& t) {
  return {multiply(y, t[0]), multiply(y, t[1]), multiply(y, t[2])};
}

std::string render(Triple const& t) {
  return "(" + render(t[0]) + ", " + render(t[1]) + ", " + render(t[2]) + ")";
}

void CircularAssignment::set(Triple const& t, int value) {
  if (value < -1 || value > 1) throw PreconditionFailed("circular values are -1, 0 or +1");
  values_[t] = value;
}

std::optional<int> CircularAssignment::get(Triple const& t) const {
  auto it = values_.find(t);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> CircularAssignment::value_or_degenerate(Triple const& t) const {
  if (auto v = get(t)) return v;
  if (is_degenerate(t)) return 0;
  return std::nullopt;
}

int CircularAssignment::at(Triple const& t) const {
  auto v = get(t);
  if (!v) throw PreconditionFailed("triple " + render(t) + " outside the assignment's domain");
  return *v;
}

std::vector<Element> CircularAssignment::components() const {
  std::set<Element> out;
  for (auto const& [t, v] : values_) out.insert(t.begin(), t.end());
  return {out.begin(), out.end()};
}

namespace {

using Quad = std::array<Element, 4>;

// Faces of (x1, x2, x3, x4) with their signs in the cocycle sum.
std::array<std::pair<Triple, int>, 4> faces(Quad const& x) {
  return {{{{x[0], x[1], x[2]}, 1}, {{x[0], x[1], x[3]}, -1}, {{x[0], x[2], x[3]}, 1}, {{x[1], x[2], x[3]}, -1}}};
}

std::optional<CircularValidation> cocycle_violation(CircularAssignment const& c, std::vector<Element> const& V,
                                                    std::size_t first) {
  for (auto const& x2 : V)
    for (auto const& x3 : V) {
      Triple head{V[first], x2, x3};
      if (!c.value_or_degenerate(head)) continue;
      for (auto const& x4 : V) {
        Quad q{V[first], x2, x3, x4};
        int sum = 0;
        bool inside = true;
        for (auto const& [face, sign] : faces(q)) {
          auto v = c.value_or_degenerate(face);
          if (!v) {
            inside = false;
            break;
          }
          sum += sign * *v;
        }
        if (inside && sum != 0)
          return CircularValidation{false, CircularValidation::Axiom::cocycle,
                                    "cocycle sum " + std::to_string(sum) + " on (" + render(q[0]) + ", " +
                                        render(q[1]) + ", " + render(q[2]) + ", " + render(q[3]) + ")",
                                    {q.begin(), q.end()}};
      }
    }
  return std::nullopt;
}

}  // namespace

CircularValidation validate_circular_assignment(CircularAssignment const& c,
                                                std::optional<std::vector<Element>> multipliers, Exec exec) {
  using Axiom = CircularValidation::Axiom;
  for (auto const& [t, v] : c.values()) {
    if ((v == 0) != is_degenerate(t))
      return {false, Axiom::zero_iff_degenerate,
              "value " + std::to_string(v) + " on " + (is_degenerate(t) ? "degenerate " : "") + render(t),
              {t.begin(), t.end()}};
  }

  auto V = c.components();
  std::vector<std::optional<CircularValidation>> rows(V.size());
  detail::for_each_index(V.size(), exec, [&](std::size_t i) { rows[i] = cocycle_violation(c, V, i); });
  for (auto& r : rows)
    if (r) return std::move(*r);

  auto const& ys = multipliers ? *multipliers : V;
  for (auto const& y : ys)
    for (auto const& [t, v] : c.values()) {
      auto w = c.get(translate(y, t));
      if (w && *w != v)
        return {false, Axiom::invariance, "c(" + render(y) + " . " + render(t) + ") != c" + render(t),
                {y, t[0], t[1], t[2]}};
    }
  return {};
}

namespace {

// Union-find over variables with parity: value(v) = sign(v) * value(root(v)).
class ParityUnionFind {
 public:
  explicit ParityUnionFind(std::size_t n) : parent_(n), flip_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::pair<std::size_t, int> find(std::size_t v) {
    int sign = 1;
    std::vector<std::size_t> path;
    while (parent_[v] != v) {
      path.push_back(v);
      v = parent_[v];
    }
    // Compress, fixing each node's flip relative to the root.
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      auto p = parent_[*it];
      if (p != v) flip_[*it] ^= flip_[p];
      parent_[*it] = v;
    }
    if (!path.empty()) sign = flip_[path.front()] ? -1 : 1;
    return {v, sign};
  }

  /// Imposes value(a) = s * value(b); false on contradiction.
  bool unite(std::size_t a, std::size_t b, int s) {
    auto [ra, sa] = find(a);
    auto [rb, sb] = find(b);
    // value(a) = sa * value(ra), value(b) = sb * value(rb)
    int rel = sa * s * sb;  // value(ra) = rel * value(rb)
    if (ra == rb) return rel == 1;
    if (ra < rb) std::swap(ra, rb);  // smaller index stays root
    parent_[ra] = rb;
    flip_[ra] = rel == -1;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<char> flip_;
};

struct Term {
  std::size_t root;
  int coeff;
};

struct Constraint {
  std::vector<Term> terms;  // sum coeff * value(root) == 0
};

class CircularSolver {
 public:
  CircularSolver(std::vector<Triple> vars, std::vector<Element> universe, std::vector<Element> multipliers,
                 std::size_t budget)
      : vars_(std::move(vars)), universe_(std::move(universe)), multipliers_(std::move(multipliers)),
        budget_(budget), uf_(vars_.size()) {
    std::sort(vars_.begin(), vars_.end());
    for (std::size_t i = 0; i < vars_.size(); ++i) index_.emplace(vars_[i], i);
  }

  CircularSearchResult run() {
    CircularSearchResult result;
    if (!build()) return result;
    value_.assign(vars_.size(), 0);
    if (!search(0)) {
      result.nodes = nodes_;
      return result;
    }
    result.status = CircularSearchResult::Status::found;
    result.nodes = nodes_;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      auto [r, s] = uf_.find(i);
      result.assignment.set(vars_[i], s * value_[r]);
    }
    return result;
  }

 private:
  std::optional<std::size_t> var_of(Triple const& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool build() {
    for (auto const& y : multipliers_)
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (auto j = var_of(translate(y, vars_[i])))
          if (!uf_.unite(i, *j, 1)) return false;

    std::vector<std::array<std::pair<std::size_t, int>, 4>> quads;
    auto const& V = universe_;
    for (auto const& x1 : V)
      for (auto const& x2 : V)
        for (auto const& x3 : V)
          for (auto const& x4 : V) {
            std::vector<std::pair<std::size_t, int>> live;
            bool inside = true;
            for (auto const& [face, sign] : faces({x1, x2, x3, x4})) {
              if (is_degenerate(face)) continue;
              auto v = var_of(face);
              if (!v) {
                inside = false;
                break;
              }
              live.emplace_back(*v, sign);
            }
            if (!inside || live.empty()) continue;
            if (live.size() == 2) {
              // a x_p + b x_q = 0  =>  x_p = -a b x_q
              if (!uf_.unite(live[0].first, live[1].first, -live[0].second * live[1].second)) return false;
            } else {
              quads.push_back({live[0], live[1], live[2], live[3]});
            }
          }

    // Rewrite the four-term constraints over roots.
    std::set<std::vector<std::pair<std::size_t, int>>> seen;
    watch_.assign(vars_.size(), {});
    for (auto const& q : quads) {
      std::map<std::size_t, int> coeff;
      for (auto const& [v, c] : q) {
        auto [r, s] = uf_.find(v);
        coeff[r] += c * s;
      }
      std::vector<std::pair<std::size_t, int>> key;
      for (auto const& [r, c] : coeff)
        if (c != 0) key.emplace_back(r, c);
      if (key.empty()) continue;
      // A constraint and its negation are the same.
      if (key.front().second < 0)
        for (auto& kc : key) kc.second = -kc.second;
      if (!seen.insert(key).second) continue;
      Constraint con;
      for (auto const& [r, c] : key) con.terms.push_back({r, c});
      if (!feasible_alone(con)) return false;
      auto id = constraints_.size();
      constraints_.push_back(std::move(con));
      for (auto const& t : constraints_.back().terms) watch_[t.root].push_back(id);
    }

    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (uf_.find(i).first == i) roots_.push_back(i);
    return true;
  }

  static bool feasible_alone(Constraint const& c) {
    auto n = c.terms.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      int sum = 0;
      for (std::size_t k = 0; k < n; ++k) sum += c.terms[k].coeff * ((mask >> k & 1U) ? -1 : 1);
      if (sum == 0) return true;
    }
    return false;
  }

  // Checks constraint c under the current values; forces any unassigned
  // root whose value is the same in every feasible completion.
  bool propagate_constraint(std::size_t c, std::vector<std::size_t>& queue) {
    auto const& terms = constraints_[c].terms;
    int fixed = 0;
    std::vector<std::size_t> open;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      auto v = value_[terms[k].root];
      if (v == 0) open.push_back(k);
      else fixed += terms[k].coeff * v;
    }
    if (open.empty()) return fixed == 0;
    std::vector<int> can_plus(open.size(), 0), can_minus(open.size(), 0);
    bool any = false;
    for (std::size_t mask = 0; mask < (std::size_t{1} << open.size()); ++mask) {
      int sum = fixed;
      for (std::size_t k = 0; k < open.size(); ++k) sum += terms[open[k]].coeff * ((mask >> k & 1U) ? -1 : 1);
      if (sum != 0) continue;
      any = true;
      for (std::size_t k = 0; k < open.size(); ++k) ((mask >> k & 1U) ? can_minus[k] : can_plus[k]) = 1;
    }
    if (!any) return false;
    for (std::size_t k = 0; k < open.size(); ++k) {
      if (can_plus[k] && can_minus[k]) continue;
      auto r = terms[open[k]].root;
      value_[r] = can_plus[k] ? 1 : -1;
      trail_.push_back(r);
      queue.push_back(r);
    }
    return true;
  }

  bool assign(std::size_t root, int v) {
    value_[root] = v;
    trail_.push_back(root);
    std::vector<std::size_t> queue{root};
    while (!queue.empty()) {
      auto r = queue.back();
      queue.pop_back();
      for (auto c : watch_[r])
        if (!propagate_constraint(c, queue)) return false;
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = 0;
      trail_.pop_back();
    }
  }

  bool search(std::size_t pos) {
    while (pos < roots_.size() && value_[roots_[pos]] != 0) ++pos;
    if (pos == roots_.size()) return true;
    auto r = roots_[pos];
    for (int v : {1, -1}) {
      if (++nodes_ > budget_) throw BudgetExceeded("circular search exceeded " + std::to_string(budget_) + " nodes");
      auto mark = trail_.size();
      if (assign(r, v) && search(pos + 1)) return true;
      undo_to(mark);
    }
    return false;
  }

  std::vector<Triple> vars_;
  std::vector<Element> universe_;
  std::vector<Element> multipliers_;
  std::size_t budget_;
  std::map<Triple, std::size_t> index_;
  ParityUnionFind uf_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> watch_;
  std::vector<std::size_t> roots_;
  std::vector<int> value_;
  std::vector<std::size_t> trail_;
  std::size_t nodes_ = 0;
};

}  // namespace

CircularSearchResult preorder_search(Group G, int k, std::size_t node_budget) {
  if (k < 0) throw PreconditionFailed("pre-order length must be >= 0");
  auto B = ball(G, k).members;
  std::vector<Triple> vars;
  for (auto const& a : B)
    for (auto const& b : B)
      for (auto const& c : B) {
        Triple t{a, b, c};
        if (!is_degenerate(t)) vars.push_back(std::move(t));
      }
  auto result = CircularSolver(std::move(vars), B, B, node_budget).run();
  if (result.status == CircularSearchResult::Status::found)
    for (auto const& a : B)
      for (auto const& b : B)
        for (auto const& c : B) {
          Triple t{a, b, c};
          if (is_degenerate(t)) result.assignment.set(t, 0);
        }
  return result;
}

CircularSearchResult triple_assignment_search(std::vector<Triple> const& T, std::size_t node_budget) {
  std::set<Element> comp;
  for (auto const& t : T) {
    if (is_degenerate(t)) throw PreconditionFailed("triple " + render(t) + " lies on the big diagonal");
    require_same_owner(T.front()[0], t[0]);
    require_same_owner(t[0], t[1]);
    require_same_owner(t[0], t[2]);
    comp.insert(t.begin(), t.end());
  }
  std::vector<Element> V(comp.begin(), comp.end());
  std::vector<Triple> vars(T.begin(), T.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return CircularSolver(std::move(vars), V, V, node_budget).run();
}

SemigroupOracle SemigroupOracle::empty() {
  return SemigroupOracle("empty", [](Element const&) { return false; });
}

SemigroupOracle SemigroupOracle::from_cone(ConeHandle P) {
  auto name = "cone:" + P.describe();
  return SemigroupOracle(std::move(name), [P = std::move(P)](Element const& g) { return P.contains(g); });
}

SemigroupOracle SemigroupOracle::from_predicate(std::string name, std::function<bool(Element const&)> member) {
  return SemigroupOracle(std::move(name), std::move(member));
}

bool SemigroupOracle::contains(Element const& g) const {
  if (!member_(g)) return false;
  std::scoped_lock lock(log_->mutex);
  if (log_->positive.contains(invert(g)))
    throw PreconditionFailed("semigroup " + name_ + " is not antisymmetric: contains " + render(g) +
                             " and its inverse");
  if (log_->positive.insert(g).second) log_->order.push_back(g);
  return true;
}

std::vector<Element> SemigroupOracle::positive_log() const {
  std::scoped_lock lock(log_->mutex);
  return log_->order;
}

CircularAssignment extension_circular_order(FiniteSubset const& X, Homomorphism const& phi,
                                            CircularAssignment const& d, SemigroupOracle const& S) {
  if (!(phi.source() == X.owner())) throw OwnerMismatch("map starts at " + phi.source().spec());
  auto const& xs = X.members();

  // Only kernel differences are ever queried.
  auto in_S = [&](Element const& k) { return S.contains(k); };
  // c(g1, g2, g3) for phi(g1) = phi(g2) != phi(g3).
  auto equal_pair_rule = [&](Element const& g1, Element const& g2) {
    return in_S(multiply(invert(g1), g2)) ? 1 : -1;
  };

  for (auto const& x : xs)
    for (auto const& y : xs) {
      auto k = multiply(invert(x), y);
      if (k.is_identity() || !phi(k).is_identity()) continue;
      if (!in_S(k) && !in_S(invert(k)))
        throw PreconditionFailed("kernel difference " + render(k) + " is outside S, S^-1 and id");
    }

  std::vector<Element> images;
  for (auto const& x : xs) images.push_back(phi(x));

  CircularAssignment c;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      for (std::size_t k = 0; k < xs.size(); ++k) {
        Triple t{xs[i], xs[j], xs[k]};
        if (is_degenerate(t)) {
          c.set(t, 0);
          continue;
        }
        auto const &p = images[i], &q = images[j], &r = images[k];
        int value = 0;
        if (!(p == q) && !(q == r) && !(p == r)) {
          auto v = d.get({p, q, r});
          if (!v) throw PreconditionFailed("d is missing " + render(Triple{p, q, r}));
          value = *v;
        } else if (p == q && q == r) {
          int hits = 0;
          for (auto const& diff : {multiply(invert(t[0]), t[1]), multiply(invert(t[1]), t[2]),
                                   multiply(invert(t[0]), t[2])})
            if (in_S(diff)) ++hits;
          value = hits % 2 == 1 ? 1 : -1;
        } else if (p == q) {
          value = equal_pair_rule(t[0], t[1]);
        } else if (q == r) {
          value = equal_pair_rule(t[1], t[2]);  // c(g1,g2,g3) = c(g2,g3,g1)
        } else {
          value = equal_pair_rule(t[2], t[0]);  // c(g1,g2,g3) = c(g3,g1,g2)
        }
        c.set(t, value);
      }
  return c;
}

CircularAssignment circle_order(Group cyclic) {
  if (cyclic.kind() != GroupKind::finite_cyclic) throw PreconditionFailed("circle order needs a finite cyclic group");
  auto n = cyclic.parameter();
  CircularAssignment c;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t e = 0; e < n; ++e) {
        Triple t{cyclic.element({a}), cyclic.element({b}), cyclic.element({e})};
        if (is_degenerate(t)) {
          c.set(t, 0);
          continue;
        }
        auto db = ((b - a) % n + n) % n;
        auto de = ((e - a) % n + n) % n;
        c.set(t, db < de ? 1 : -1);
      }
  return c;
}

CircularAssignment cone_to_circular(ConeHandle const& P, std::vector<Triple> const& domain) {
  auto less = [&](Element const& g, Element const& h) {
    auto d = multiply(invert(g), h);
    bool forward = P.contains(d);
    bool backward = P.contains(invert(d));
    if (forward == backward)
      throw PreconditionFailed("cone " + P.describe() + " fails trichotomy on " + render(d));
    return forward;
  };
  CircularAssignment c;
  for (auto const& t : domain) {
    if (is_degenerate(t)) {
      c.set(t, 0);
      continue;
    }
    // Parity of inversions among the three pairs.
    int inversions = 0;
    if (less(t[1], t[0])) ++inversions;
    if (less(t[2], t[1])) ++inversions;
    if (less(t[2], t[0])) ++inversions;
    c.set(t, inversions % 2 == 0 ? 1 : -1);
  }
  return c;
}

}  // namespace ordercert
