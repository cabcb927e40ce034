#include "ordercert/closure.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "ordercert/errors.hpp"

namespace ordercert {

struct Derivation::Node {
  enum class Op { leaf, product, conradian };
  Op op = Op::leaf;
  std::optional<Leaf> leaf;
  Derivation left;
  Derivation right;
  std::size_t size = 1;
};

Derivation Derivation::leaf(std::size_t index, Element base, std::optional<Element> conjugator) {
  Derivation d;
  auto n = std::make_shared<Node>();
  n->op = Node::Op::leaf;
  n->leaf = Leaf{index, std::move(base), std::move(conjugator)};
  d.node_ = std::move(n);
  return d;
}

Derivation Derivation::product(Derivation a, Derivation b) {
  Derivation d;
  auto n = std::make_shared<Node>();
  n->op = Node::Op::product;
  n->size = a.size() + b.size();
  n->left = std::move(a);
  n->right = std::move(b);
  d.node_ = std::move(n);
  return d;
}

Derivation Derivation::conradian(Derivation x, Derivation y) {
  Derivation d;
  auto n = std::make_shared<Node>();
  n->op = Node::Op::conradian;
  n->size = x.size() + y.size();
  n->left = std::move(x);
  n->right = std::move(y);
  d.node_ = std::move(n);
  return d;
}

bool Derivation::is_leaf() const { return node_ && node_->op == Node::Op::leaf; }
bool Derivation::is_product() const { return node_ && node_->op == Node::Op::product; }
bool Derivation::is_conradian() const { return node_ && node_->op == Node::Op::conradian; }

Derivation::Leaf const& Derivation::as_leaf() const {
  if (!is_leaf()) throw PreconditionFailed("derivation node is not a leaf");
  return *node_->leaf;
}

std::pair<Derivation, Derivation> Derivation::children() const {
  if (!node_ || node_->op == Node::Op::leaf) throw PreconditionFailed("derivation node has no children");
  return {node_->left, node_->right};
}

std::size_t Derivation::size() const { return node_ ? node_->size : 0; }

Element replay(Derivation const& d) {
  if (!d.valid()) throw PreconditionFailed("malformed derivation: empty node");
  if (d.is_leaf()) {
    auto const& l = d.as_leaf();
    return l.conjugator ? conjugate(*l.conjugator, l.base) : l.base;
  }
  auto [a, b] = d.children();
  auto x = replay(a);
  auto y = replay(b);
  if (d.is_product()) return multiply(x, y);
  return multiply(multiply(invert(x), y), multiply(x, x));
}

bool leaves_permitted(Derivation const& d, std::span<Element const> X, ClosureKind kind) {
  if (!d.valid()) return false;
  if (d.is_leaf()) {
    auto const& l = d.as_leaf();
    if (l.index >= X.size() || !(l.base == X[l.index])) return false;
    return !l.conjugator || kind.tag == ClosureKind::Tag::normal;
  }
  if (d.is_conradian() && kind.tag != ClosureKind::Tag::conradian) return false;
  auto [a, b] = d.children();
  return leaves_permitted(a, X, kind) && leaves_permitted(b, X, kind);
}

namespace {

struct Candidate {
  Element value;
  std::size_t left;
  std::size_t right;
  bool conradian;
};

constexpr std::size_t chunk_size = 256;

class ClosureEngine {
 public:
  ClosureEngine(std::span<Element const> X, ClosureKind kind, std::size_t budget, Exec exec,
                bool stop_at_identity)
      : X_(X), kind_(kind), budget_(budget), exec_(exec), stop_at_identity_(stop_at_identity) {}

  ClosureResult run(int depth) {
    if (X_.empty()) throw PreconditionFailed("closure of an empty set");
    for (auto const& x : X_) require_same_owner(X_.front(), x);
    if (kind_.conjugator_radius < 0) throw PreconditionFailed("conjugator radius must be >= 0");
    if (depth < 1) return std::move(result_);

    seed_generators();
    for (int c = 2; c <= depth && !finished_; ++c) build_level(c);
    return std::move(result_);
  }

 private:
  void seed_generators() {
    result_.level_start.push_back(0);
    auto owner = X_.front().group();
    if (kind_.tag == ClosureKind::Tag::normal) {
      // Identity first, so an unconjugated leaf wins when values coincide.
      auto conjugators = ball(owner, kind_.conjugator_radius).members;
      std::stable_partition(conjugators.begin(), conjugators.end(), [](Element const& g) { return g.is_identity(); });
      for (std::size_t i = 0; i < X_.size() && !finished_; ++i)
        for (auto const& g : conjugators) {
          if (g.is_identity())
            accept(X_[i], Derivation::leaf(i, X_[i]));
          else
            accept(conjugate(g, X_[i]), Derivation::leaf(i, X_[i], g));
          if (finished_) break;
        }
    } else {
      for (std::size_t i = 0; i < X_.size() && !finished_; ++i) accept(X_[i], Derivation::leaf(i, X_[i]));
    }
    close_level();
  }

  void build_level(int c) {
    for (int i = 1; i < c && !finished_; ++i) {
      auto [lb, le] = level_range(i);
      auto [rb, re] = level_range(c - i);
      if (lb == le || rb == re) continue;
      for (std::size_t chunk = lb; chunk < le && !finished_; chunk += chunk_size) {
        auto chunk_end = std::min(le, chunk + chunk_size);
        for (auto& cand : expand(chunk, chunk_end, rb, re)) {
          accept_candidate(std::move(cand));
          if (finished_) break;
        }
      }
    }
    close_level();
  }

  // Products (and Conradian combinations) of generated[l] with generated[r]
  // for l in [lb, le), r in [rb, re), dropping values already seen in
  // earlier levels. Order matches the serial double loop.
  std::vector<Candidate> expand(std::size_t lb, std::size_t le, std::size_t rb, std::size_t re) const {
    auto const n = static_cast<std::ptrdiff_t>(le - lb);
    std::vector<std::vector<Candidate>> per_left(static_cast<std::size_t>(n));
    bool const conradian = kind_.tag == ClosureKind::Tag::conradian;
    auto const& gen = result_.generated;
#pragma omp parallel for schedule(dynamic, 8) if (exec_ == Exec::parallel)
    for (std::ptrdiff_t a = 0; a < n; ++a) {
      auto l = lb + static_cast<std::size_t>(a);
      auto& out = per_left[static_cast<std::size_t>(a)];
      std::optional<Element> linv, lsq;
      if (conradian) {
        linv = invert(gen[l]);
        lsq = multiply(gen[l], gen[l]);
      }
      for (auto r = rb; r < re; ++r) {
        auto p = multiply(gen[l], gen[r]);
        if (!seen_before_level(p)) out.push_back({std::move(p), l, r, false});
        if (conradian) {
          auto q = multiply(multiply(*linv, gen[r]), *lsq);
          if (!seen_before_level(q)) out.push_back({std::move(q), l, r, true});
        }
      }
    }
    std::vector<Candidate> merged;
    for (auto& v : per_left) std::move(v.begin(), v.end(), std::back_inserter(merged));
    return merged;
  }

  bool seen_before_level(Element const& e) const {
    auto it = index_.find(e);
    return it != index_.end() && it->second < result_.level_start.back();
  }

  void accept_candidate(Candidate cand) {
    auto const& d = result_.derivations;
    auto deriv = cand.conradian ? Derivation::conradian(d[cand.left], d[cand.right])
                                : Derivation::product(d[cand.left], d[cand.right]);
    accept(std::move(cand.value), std::move(deriv));
  }

  void accept(Element value, Derivation deriv) {
    if (index_.contains(value)) return;
    if (result_.generated.size() >= budget_) {
      result_.exhausted_budget = true;
      finished_ = true;
      return;
    }
    if (value.is_identity() && !result_.identity_witness) {
      result_.identity_witness = deriv;
      if (stop_at_identity_) finished_ = true;
    }
    index_.emplace(value, result_.generated.size());
    result_.generated.push_back(std::move(value));
    result_.derivations.push_back(std::move(deriv));
  }

  // Sorts the newest level by normal form and records its end.
  void close_level() {
    auto begin = result_.level_start.back();
    auto end = result_.generated.size();
    std::vector<std::size_t> order(end - begin);
    std::iota(order.begin(), order.end(), begin);
    auto& gen = result_.generated;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return gen[a] < gen[b]; });
    std::vector<Element> elems;
    std::vector<Derivation> derivs;
    for (auto i : order) {
      elems.push_back(std::move(gen[i]));
      derivs.push_back(std::move(result_.derivations[i]));
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
      gen[begin + k] = std::move(elems[k]);
      result_.derivations[begin + k] = std::move(derivs[k]);
      index_[gen[begin + k]] = begin + k;
    }
    result_.level_start.push_back(end);
    ++result_.depth_reached;
  }

  std::pair<std::size_t, std::size_t> level_range(int level) const {
    auto const& s = result_.level_start;
    return {s[static_cast<std::size_t>(level - 1)], s[static_cast<std::size_t>(level)]};
  }

  std::span<Element const> X_;
  ClosureKind kind_;
  std::size_t budget_;
  Exec exec_;
  bool stop_at_identity_;
  bool finished_ = false;
  ClosureResult result_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
};

}  // namespace

ClosureResult close(std::span<Element const> X, ClosureKind kind, int depth, std::size_t budget, Exec exec) {
  return ClosureEngine(X, kind, budget, exec, false).run(depth);
}

ClosureResult close_until_identity(std::span<Element const> X, ClosureKind kind, int depth, std::size_t budget,
                                   Exec exec) {
  return ClosureEngine(X, kind, budget, exec, true).run(depth);
}

std::optional<Derivation> contains_identity_upto(std::span<Element const> X, ClosureKind kind, int depth,
                                                 std::size_t budget, Exec exec) {
  return close_until_identity(X, kind, depth, budget, exec).identity_witness;
}

}  // namespace ordercert
