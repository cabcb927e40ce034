#pragma once

// Positive cones as membership oracles with symbolic descriptors.
//
// On laurent-z = Z[t,t^-1] x| <z> the kernel cones are
//
//   Q      leading term (n, a): n >= 0 and a > 0, or n < 0 and a < 0
//   Q_i    write n = m*i + j with 0 <= j < i; member iff a > 0 for m even,
//          a < 0 for m odd (blocks of length i alternate sign, period 2i)
//
// Both carry a shift s: the shifted cone is { p : t^-s p in cone }. This is
// exactly what conjugation by (p, z^s) does to a kernel cone, so conjugation
// stays symbolic. For Q_i the shift is taken mod 2i (the "phase").
//
// The group acts on cones by P -> g P g^-1: h is in the conjugated cone iff
// g^-1 h g is in P.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordercert/exec.hpp"
#include "ordercert/group.hpp"
#include "ordercert/homomorphism.hpp"

namespace ordercert {

class ConeHandle;

namespace cone_desc {
/// First nonzero normal-form coordinate positive, on abelian:n and
/// heisenberg. On klein the b exponent is compared first, then a.
struct Standard {};
struct Q {
  std::int64_t shift = 0;
};
struct Qi {
  int i = 1;
  std::int64_t phase = 0;  // in [0, 2i)
};
/// P_K on ker(q) together with q^-1(P_H).
struct Lex {
  Homomorphism q;
  std::shared_ptr<ConeHandle const> kernel;
  std::shared_ptr<ConeHandle const> quotient;
};
/// Explicit finite positive set, meaningful on a ball of the given radius.
struct Finite {
  std::vector<Element> members;  // sorted
  int radius = 0;
};
/// g P g^-1 for descriptors without a closed form.
struct Conjugated {
  std::shared_ptr<ConeHandle const> base;
  Element by;
};
}  // namespace cone_desc

using ConeDescriptor = std::variant<cone_desc::Standard, cone_desc::Q, cone_desc::Qi, cone_desc::Lex,
                                    cone_desc::Finite, cone_desc::Conjugated>;

class ConeHandle {
 public:
  static ConeHandle standard(Group g);
  static ConeHandle q_cone(std::int64_t shift = 0);
  static ConeHandle qi_cone(int i, std::int64_t phase = 0);
  static ConeHandle lex(Homomorphism q, ConeHandle kernel, ConeHandle quotient);
  static ConeHandle finite(Group g, std::vector<Element> members, int radius);
  /// by * base * by^-1 without a closed form.
  static ConeHandle conjugated(ConeHandle base, Element by);
  /// lex(z_exponent, Q, standard on Z)
  static ConeHandle p_cone();
  /// lex(z_exponent, Q_i, standard on Z)
  static ConeHandle pi_cone(int i, std::int64_t phase = 0);

  Group owner() const noexcept { return owner_; }
  ConeDescriptor const& descriptor() const noexcept { return *desc_; }

  /// Throws OwnerMismatch for foreign elements, PreconditionFailed when a
  /// kernel-only cone (Q, Q_i) is asked about an element outside the kernel.
  bool contains(Element const& g) const;

  /// Human-readable descriptor, e.g. "lex(z-exponent; qi(i=2,phase=1); standard)".
  std::string describe() const;

  /// Structural equality of descriptors.
  friend bool operator==(ConeHandle const& a, ConeHandle const& b);

 private:
  ConeHandle(Group owner, ConeDescriptor desc)
      : owner_(owner), desc_(std::make_shared<ConeDescriptor const>(std::move(desc))) {}

  Group owner_;
  std::shared_ptr<ConeDescriptor const> desc_;
};

inline bool cone_membership(ConeHandle const& P, Element const& g) { return P.contains(g); }

inline ConeHandle lex_cone(Homomorphism q, ConeHandle kernel, ConeHandle quotient) {
  return ConeHandle::lex(std::move(q), std::move(kernel), std::move(quotient));
}

/// g P g^-1. Exact and symbolic for Standard on abelian groups, Q, Q_i,
/// Lex and Finite; otherwise wrapped as Conjugated.
ConeHandle conjugate_cone(ConeHandle const& P, Element const& g);

struct ConeCheckReport {
  bool ok = true;
  std::string violation;           // empty when ok
  std::vector<Element> witness;    // offending elements, e.g. (g) or (g, h)
};

/// Trichotomy on ball(radius) and closure for products that stay in the ball.
/// Kernel-only cones (Q, Q_i) are checked on the kernel part of the ball.
ConeCheckReport cone_axioms_check(ConeHandle const& P, int radius, Exec exec = Exec::parallel);

enum class InvarianceMode { bi, conradian };

/// bi: h^-1 g h in P for g in P, h in the ball.
/// conradian: h^-1 g h^2 in P for g, h in P.
ConeCheckReport cone_invariance_check(ConeHandle const& P, int radius, InvarianceMode mode,
                                      Exec exec = Exec::parallel);

struct OrbitWitness {
  std::size_t first = 0;
  std::size_t second = 0;
  Element element;
  bool in_first = false;  // element is in cones[first] and not in cones[second], or vice versa
};

struct OrbitReport {
  std::vector<ConeHandle> cones;
  std::vector<OrbitWitness> witnesses;  // one per unordered pair
};

/// Closes {P} under conjugation by the given elements. Throws BudgetExceeded
/// when more than `bound` cones appear, PreconditionFailed when two cones
/// cannot be told apart within the witness search.
OrbitReport cone_orbit(ConeHandle const& P, std::vector<Element> const& conjugators, int bound,
                       int search_radius = 2);

/// Beyond `threshold`, every n either works (recurrent) or fails.
struct ClosedFormRecurrence {
  bool recurrent = false;
  std::int64_t threshold = 0;
};

struct RecurrenceReport {
  Element g;
  std::vector<Element> probes;
  std::vector<std::int64_t> found;  // n in [1, n_max] with g^-n h g^n in P for all probes
  std::int64_t exhausted_at = 0;
  std::optional<ClosedFormRecurrence> closed_form;
};

RecurrenceReport recurrence_check(ConeHandle const& P, Element const& g, std::vector<Element> const& probes,
                                  std::int64_t n_max);

/// Decides recurrence for every n when P is lex over a shifted Q with the
/// standard cone on the z exponent; nullopt for other descriptors.
std::optional<ClosedFormRecurrence> closed_form_recurrence(ConeHandle const& P, Element const& g,
                                                           std::vector<Element> const& probes);

}  // namespace ordercert
