#pragma once

// Unique products and extreme points of finite subsets, and the two lifting
// constructions through a short exact sequence 1 -> K -> G -> H -> 1 with
// K = ker(q).
//
// A unique product for AB is ab such that ab = a'b' (a' in A, b' in B)
// forces a = a', b = b'. An extreme point of A is a with
// a^-1 A ∩ A^-1 a = {id}.
//
// Tie-breaks are normal-form lexicographic: both lifts take the largest
// candidate at every choice point.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ordercert/exec.hpp"
#include "ordercert/group.hpp"
#include "ordercert/homomorphism.hpp"

namespace ordercert {

/// Sorted, deduplicated finite subset of one group.
class FiniteSubset {
 public:
  FiniteSubset(Group owner, std::vector<Element> members);
  /// Owner taken from the first member; throws PreconditionFailed if empty.
  static FiniteSubset of(std::vector<Element> members);

  Group owner() const noexcept { return owner_; }
  std::vector<Element> const& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(Element const& g) const;

  friend bool operator==(FiniteSubset const&, FiniteSubset const&) = default;

 private:
  Group owner_;
  std::vector<Element> members_;
};

/// g S
FiniteSubset left_translate(Element const& g, FiniteSubset const& S);
/// S g
FiniteSubset right_translate(FiniteSubset const& S, Element const& g);
FiniteSubset image(Homomorphism const& q, FiniteSubset const& S);

struct UniqueProduct {
  Element product;
  Element a;
  Element b;
  friend bool operator==(UniqueProduct const&, UniqueProduct const&) = default;
};

struct UniqueProductReport {
  std::vector<UniqueProduct> products;  // sorted by product
};

/// Exhaustive |A|·|B| table.
UniqueProductReport unique_products(FiniteSubset const& A, FiniteSubset const& B, Exec exec = Exec::parallel);

bool is_unique_product(FiniteSubset const& A, FiniteSubset const& B, Element const& a, Element const& b);

struct NormalizedPair {
  FiniteSubset X;  // x^-1 X
  FiniteSubset Y;  // Y y^-1
  Element x;
  Element y;
};

/// Translates by the smallest x in X and y in Y so both sides contain id.
NormalizedPair upp_normalize(FiniteSubset const& X, FiniteSubset const& Y);

/// Unique product (x^-1 g)(h y^-1) of the normalized pair -> gh for XY.
UniqueProduct upp_pullback(NormalizedPair const& n, UniqueProduct const& normalized);

struct SubsetConditionReport {
  bool holds = true;
  std::optional<std::pair<FiniteSubset, FiniteSubset>> counterexample;
  std::size_t pairs_checked = 0;
};

/// Every X, Y in A with id in X ∩ Y and |X|+|Y| <= |A| has a unique product.
/// Pairs are scanned by subset bitmask over the non-identity members, X
/// major. Throws PreconditionFailed unless id in A, or if |A| > 12.
SubsetConditionReport upp_subset_condition(FiniteSubset const& A, Exec exec = Exec::parallel);

/// Unique product for a pair inside one group, or nullopt.
using UniqueProductProvider = std::function<std::optional<UniqueProduct>(FiniteSubset const&, FiniteSubset const&)>;

/// Largest unique product by brute force.
std::optional<UniqueProduct> brute_force_unique_product(FiniteSubset const& X, FiniteSubset const& Y);

/// One lifting step. Requires id in X ∩ Y and a unique product of
/// q(X)q(Y); kernel pairs go to kernel_oracle (default: brute force). The
/// result is checked against the full table before it is returned.
UniqueProduct upp_lift(FiniteSubset const& X, FiniteSubset const& Y, Homomorphism const& q,
                       UniqueProductProvider const& kernel_oracle = brute_force_unique_product);

/// Lifts through q_1, then through q_2 on ker(q_1), and so on; brute force
/// below the last map. Recursion depth is capped at |X| + |Y|.
UniqueProduct upp_lift_chain(FiniteSubset const& X, FiniteSubset const& Y, std::span<Homomorphism const> chain);

/// Normalizes, lifts through the chain (brute force if empty), pulls back.
UniqueProduct find_unique_product(FiniteSubset const& X, FiniteSubset const& Y,
                                  std::span<Homomorphism const> chain = {});

/// Exhaustive scan, sorted.
std::vector<Element> extreme_points(FiniteSubset const& A, Exec exec = Exec::parallel);

bool is_extreme_point(FiniteSubset const& A, Element const& a);

/// Candidate extreme points of a set; callers check the contract.
using ExtremeProvider = std::function<std::vector<Element>(FiniteSubset const&)>;

inline std::vector<Element> brute_force_extreme_points(FiniteSubset const& A) {
  return extreme_points(A, Exec::serial);
}

/// One lifting step. Requires id in X; picks the largest extreme point of
/// q(X) from base_extreme, the largest a in X over it and the largest
/// extreme point b of a^-1 X ∩ ker(q) from kernel_extreme; returns ab after
/// checking it. Throws PreconditionFailed when a provider returns a
/// non-extreme point or nothing.
Element diffuse_lift(FiniteSubset const& X, Homomorphism const& q,
                     ExtremeProvider const& base_extreme = brute_force_extreme_points,
                     ExtremeProvider const& kernel_extreme = brute_force_extreme_points);

/// Lifts through each map in turn on the successive kernels.
Element diffuse_lift_chain(FiniteSubset const& X, std::span<Homomorphism const> chain);

}  // namespace ordercert
