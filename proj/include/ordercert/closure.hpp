#pragma once

// Truncated generation of S(X), C(X) and NS(X).
//
// The depth of a derivation is its number of leaves, so the plain closure
// at depth d holds exactly the products of at most d generators. Levels are
// built breadth-first by depth; each new level is deduplicated against
// everything seen so far and sorted by normal form.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ordercert/exec.hpp"
#include "ordercert/group.hpp"

namespace ordercert {

struct ClosureKind {
  enum class Tag { plain, conradian, normal };
  Tag tag = Tag::plain;
  int conjugator_radius = 0;  // normal only

  static ClosureKind plain() { return {Tag::plain, 0}; }
  static ClosureKind conradian() { return {Tag::conradian, 0}; }
  static ClosureKind normal(int radius) { return {Tag::normal, radius}; }
};

/// Immutable derivation tree; subtrees are shared.
class Derivation {
 public:
  /// X[index], conjugated by `conjugator` when present (g x g^-1).
  struct Leaf {
    std::size_t index = 0;
    Element base;
    std::optional<Element> conjugator;
  };
  struct Node;

  static Derivation leaf(std::size_t index, Element base, std::optional<Element> conjugator = std::nullopt);
  static Derivation product(Derivation a, Derivation b);
  /// x^-1 y x^2
  static Derivation conradian(Derivation x, Derivation y);

  bool is_leaf() const;
  bool is_product() const;
  bool is_conradian() const;
  Leaf const& as_leaf() const;
  /// Children of a product (a, b) or Conradian node (x, y).
  std::pair<Derivation, Derivation> children() const;

  /// Number of leaves.
  std::size_t size() const;

  bool valid() const noexcept { return node_ != nullptr; }

 private:
  std::shared_ptr<Node const> node_;
};

/// Element the derivation constructs. Throws PreconditionFailed on a
/// malformed tree.
Element replay(Derivation const& d);

/// True iff every leaf is one of the permitted generators: X[index] itself
/// for plain/conradian, any conjugate of X[index] for normal, and no
/// Conradian node unless the kind is conradian.
bool leaves_permitted(Derivation const& d, std::span<Element const> X, ClosureKind kind);

inline constexpr std::size_t default_closure_budget = 1'000'000;

struct ClosureResult {
  std::vector<Element> generated;
  std::vector<Derivation> derivations;  // derivations[i] builds generated[i]
  std::vector<std::size_t> level_start;  // level d occupies [level_start[d-1], level_start[d])
  int depth_reached = 0;
  std::optional<Derivation> identity_witness;
  bool exhausted_budget = false;
};

ClosureResult close(std::span<Element const> X, ClosureKind kind, int depth,
                    std::size_t budget = default_closure_budget, Exec exec = Exec::parallel);

/// Semi-decision: a witness if id is derivable within the bounds. Absence
/// says nothing about the infinite closure.
std::optional<Derivation> contains_identity_upto(std::span<Element const> X, ClosureKind kind, int depth,
                                                 std::size_t budget = default_closure_budget,
                                                 Exec exec = Exec::parallel);

/// Same search, stopping at the first identity; exposes the budget flag.
ClosureResult close_until_identity(std::span<Element const> X, ClosureKind kind, int depth,
                                   std::size_t budget = default_closure_budget,
                                   Exec exec = Exec::parallel);

}  // namespace ordercert
