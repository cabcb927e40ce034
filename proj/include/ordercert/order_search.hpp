#pragma once

// Finite sign-assignment criteria for left, Conradian and bi-orderability.
//
// For X = (x_1, ..., x_n) and signs e_i in {+1, -1} the criterion asks
// whether id lies in S, C or NS of (x_1^e_1, ..., x_n^e_n). One sign vector
// that keeps id out for every depth is necessary and sufficient; a
// derivation of id for every sign vector refutes the property outright.
// At finite depth a clean vector is only evidence ("depth-d certificate").

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ordercert/closure.hpp"
#include "ordercert/cone.hpp"
#include "ordercert/exec.hpp"
#include "ordercert/group.hpp"
#include "ordercert/homomorphism.hpp"

namespace ordercert {

enum class Criterion { lo, co, bo };

std::string to_string(Criterion c);
/// "lo", "co", "bo"; throws ParseError otherwise.
Criterion parse_criterion(std::string const& text);

/// Entries in {-1, +1}, aligned with the input list.
using SignVector = std::vector<int>;

/// x_i^signs[i]; identity entries stay identity.
std::vector<Element> apply_signs(std::span<Element const> X, SignVector const& signs);

/// Vectors in search order: +1 before -1, first entry most significant.
SignVector sign_vector_at(std::size_t n, std::size_t rank);

enum class Verdict { certified, obstructed, inconclusive };

std::string to_string(Verdict v);

struct SearchVerdict {
  Verdict status = Verdict::inconclusive;
  std::optional<SignVector> signs;  // certified: first clean vector
  /// Identity derivations in search order. Leaf indices refer to X and leaf
  /// bases are the signed generators x_i^e_i. Complete for obstructed.
  std::vector<std::pair<SignVector, Derivation>> witnesses;
  /// Vectors whose closure hit the budget without reaching id.
  std::vector<SignVector> exhausted;
  int depth = 0;
  Criterion criterion = Criterion::lo;
  int conjugator_radius = 0;
};

ClosureKind closure_kind(Criterion c, int conjugator_radius);

/// Identity entries of X are ignored (they get sign +1 and never appear as
/// leaves). The parallel path evaluates the 2^n closures concurrently; the
/// verdict is identical to the serial one.
SearchVerdict sign_search(std::span<Element const> X, Criterion criterion, int depth, int conjugator_radius = 0,
                          std::size_t budget = default_closure_budget, Exec exec = Exec::parallel);

/// One step of the inductive choice: phi with a bi-invariant cone on its target.
struct SelectionStage {
  Homomorphism phi;
  ConeHandle cone;
};

struct SignSelection {
  SignVector signs;
  /// Stage that fixed each sign; -1 for signs fixed after the stages ran out
  /// (and for identity entries).
  std::vector<int> decided_by;
  /// NS check of the selected signs: certified, or inconclusive with the
  /// offending derivation in witnesses (or the vector in exhausted).
  SearchVerdict verdict;
};

/// Chooses e_i with phi_k(x_i^e_i) positive at the first stage k where
/// phi_k(x_i) != id. Elements killed by every stage are signed by a BO
/// search on that sublist (all +1 if it does not certify). Only the first
/// |X| stages are used.
///
/// Throws PreconditionFailed when the first stage kills every x_i, when a
/// cone does not live on its map's target, or when the cone fails the
/// conjugation spot check (P ∩ ball(target, 2) against ball(target, 1)).
SignSelection bo_sign_select(std::span<Element const> X, std::vector<SelectionStage> const& stages, int depth,
                             int conjugator_radius, std::size_t budget = default_closure_budget,
                             Exec exec = Exec::parallel);

inline SignSelection bo_sign_select(std::span<Element const> X, Homomorphism const& phi, ConeHandle const& image_cone,
                                    int depth, int conjugator_radius, std::size_t budget = default_closure_budget,
                                    Exec exec = Exec::parallel) {
  return bo_sign_select(X, std::vector<SelectionStage>{{phi, image_cone}}, depth, conjugator_radius, budget, exec);
}

}  // namespace ordercert
