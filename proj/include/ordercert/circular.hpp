#pragma once

// Circular orderings on finite sets of triples.
//
// c : G^3 -> {-1, 0, +1} is a circular ordering when
//   (1) c(t) = 0 iff t has a repeated entry,
//   (2) c(x1,x2,x3) - c(x1,x2,x4) + c(x1,x3,x4) - c(x2,x3,x4) = 0,
//   (3) c(y t) = c(t).
// On a finite domain, (2) is required for every 4-tuple whose faces all lie
// in the domain, and (3) for every multiplier y with t and y t in the
// domain. Degenerate triples always count as in the domain with value 0.

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ordercert/cone.hpp"
#include "ordercert/exec.hpp"
#include "ordercert/group.hpp"
#include "ordercert/homomorphism.hpp"
#include "ordercert/products.hpp"

namespace ordercert {

using Triple = std::array<Element, 3>;

Triple make_triple(Element a, Element b, Element c);
bool is_degenerate(Triple const& t);
/// y t, componentwise.
Triple translate(Element const& y, Triple const& t);
std::string render(Triple const& t);

class CircularAssignment {
 public:
  CircularAssignment() = default;

  void set(Triple const& t, int value);
  /// nullopt outside the domain.
  std::optional<int> get(Triple const& t) const;
  /// Value on the domain, 0 on degenerate triples, nullopt otherwise.
  std::optional<int> value_or_degenerate(Triple const& t) const;
  /// Throws PreconditionFailed outside the domain.
  int at(Triple const& t) const;

  std::map<Triple, int> const& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  /// Entries of the domain triples, sorted.
  std::vector<Element> components() const;

  friend bool operator==(CircularAssignment const&, CircularAssignment const&) = default;

 private:
  std::map<Triple, int> values_;
};

struct CircularValidation {
  bool ok = true;
  enum class Axiom { none, zero_iff_degenerate, cocycle, invariance } failed = Axiom::none;
  std::string violation;
  std::vector<Element> witness;  // the triple, the 4-tuple, or (y, t...)
};

/// Checks axioms (1)-(3). Multipliers default to the components of the domain.
CircularValidation validate_circular_assignment(CircularAssignment const& c,
                                                std::optional<std::vector<Element>> multipliers = std::nullopt,
                                                Exec exec = Exec::parallel);

inline constexpr std::size_t default_search_nodes = 5'000'000;

struct CircularSearchResult {
  enum class Status { found, impossible } status = Status::impossible;
  CircularAssignment assignment;  // found only
  std::size_t nodes = 0;
};

/// Length-k circular pre-order on ball(G, k)^3, by backtracking with
/// translation classes and cocycle propagation. `impossible` is an
/// exhaustive refutation. Throws BudgetExceeded after `node_budget` nodes.
CircularSearchResult preorder_search(Group G, int k, std::size_t node_budget = default_search_nodes);

/// Signs for the non-degenerate triples T, subject to the cocycle condition
/// and c(t) = c(y t) for y in comp(T). Throws PreconditionFailed on a
/// degenerate triple, BudgetExceeded after `node_budget` nodes.
CircularSearchResult triple_assignment_search(std::vector<Triple> const& T,
                                              std::size_t node_budget = default_search_nodes);

/// Membership in a semigroup S with lazy antisymmetry enforcement: a
/// positive answer for g after a positive answer for g^-1 throws
/// PreconditionFailed. Copies share the log.
class SemigroupOracle {
 public:
  static SemigroupOracle empty();
  static SemigroupOracle from_cone(ConeHandle P);
  static SemigroupOracle from_predicate(std::string name, std::function<bool(Element const&)> member);

  bool contains(Element const& g) const;
  std::string const& name() const noexcept { return name_; }
  /// Elements answered positively so far, in query order.
  std::vector<Element> positive_log() const;

 private:
  struct Log {
    std::mutex mutex;
    std::set<Element> positive;
    std::vector<Element> order;
  };
  SemigroupOracle(std::string name, std::function<bool(Element const&)> member)
      : name_(std::move(name)), member_(std::move(member)), log_(std::make_shared<Log>()) {}

  std::string name_;
  std::function<bool(Element const&)> member_;
  std::shared_ptr<Log> log_;
};

/// c on X^3 built from d on phi's target: d(phi t) when the images are
/// distinct; the S-rule on the equal pair (rotated to the front) when two
/// images agree; the parity of S-hits among g1^-1 g2, g2^-1 g3, g1^-1 g3,
/// counted with multiplicity, when all three agree.
/// Throws PreconditionFailed when some kernel difference x^-1 y is outside
/// S ∪ S^-1 ∪ {id}, when d lacks a needed triple, or on an antisymmetry
/// violation. S is only queried on ker(phi).
CircularAssignment extension_circular_order(FiniteSubset const& X, Homomorphism const& phi,
                                            CircularAssignment const& d, SemigroupOracle const& S);

/// The circle embedding of finite_cyclic(n) on all n^3 triples.
CircularAssignment circle_order(Group cyclic);

/// Sign of the permutation sorting each triple under g < h iff g^-1 h in P.
/// Throws PreconditionFailed when P fails trichotomy on a needed difference.
CircularAssignment cone_to_circular(ConeHandle const& P, std::vector<Triple> const& domain);

}  // namespace ordercert
