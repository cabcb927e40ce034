#pragma once

#include <vector>

#include "ordercert/group.hpp"

namespace ordercert {

/// A homomorphism between built-in groups, given by generator images.
/// Construction checks every relator of the source presentation.
class Homomorphism {
 public:
  Homomorphism(Group source, Group target, std::vector<Element> images);

  static Homomorphism identity(Group g);
  /// klein -> abelian:1, a -> 0, b -> 1.
  static Homomorphism klein_b_exponent();
  /// heisenberg -> abelian:2 or free:n -> abelian:n.
  static Homomorphism abelianization(Group g);
  /// laurent-z -> abelian:1, recording the z exponent.
  static Homomorphism z_exponent();
  /// abelian:n -> abelian:1, the chosen coordinate.
  static Homomorphism coordinate(Group free_abelian, std::size_t index);
  /// abelian:1 -> cyclic:n.
  static Homomorphism reduction_mod(int n);

  Group source() const noexcept { return source_; }
  Group target() const noexcept { return target_; }
  std::vector<Element> const& images() const noexcept { return images_; }

  Element operator()(Element const& g) const;

  friend bool operator==(Homomorphism const&, Homomorphism const&) = default;

 private:
  Group source_;
  Group target_;
  std::vector<Element> images_;
};

inline Element apply_hom(Homomorphism const& phi, Element const& g) { return phi(g); }

}  // namespace ordercert
