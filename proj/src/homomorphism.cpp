#include "ordercert/homomorphism.hpp"

#include "ordercert/errors.hpp"

namespace ordercert {

namespace {

Element image_of_word(Group target, std::vector<Element> const& images, Word const& w) {
  Element out = target.identity();
  for (auto const& s : w) out = multiply(out, power(images[s.generator], s.exponent));
  return out;
}

}  // namespace

Homomorphism::Homomorphism(Group source, Group target, std::vector<Element> images)
    : source_(source), target_(target), images_(std::move(images)) {
  if (images_.size() != source_.generator_count())
    throw PreconditionFailed("homomorphism needs one image per generator of " + source_.spec());
  for (auto const& img : images_)
    if (!(img.group() == target_)) throw OwnerMismatch("generator image outside " + target_.spec());
  for (auto const& r : relators(source_)) {
    if (!image_of_word(target_, images_, r).is_identity())
      throw PreconditionFailed("generator images violate a defining relation of " + source_.spec());
  }
}

Homomorphism Homomorphism::identity(Group g) {
  std::vector<Element> images;
  for (std::size_t i = 0; i < g.generator_count(); ++i) images.push_back(g.generator(i));
  return {g, g, std::move(images)};
}

Homomorphism Homomorphism::klein_b_exponent() {
  auto z = Group::free_abelian(1);
  return {Group::klein_bottle(), z, {z.identity(), z.generator(0)}};
}

Homomorphism Homomorphism::abelianization(Group g) {
  switch (g.kind()) {
    case GroupKind::heisenberg: {
      auto t = Group::free_abelian(2);
      return {g, t, {t.generator(0), t.generator(1), t.identity()}};
    }
    case GroupKind::free:
    case GroupKind::free_abelian: {
      auto t = Group::free_abelian(g.parameter());
      std::vector<Element> images;
      for (std::size_t i = 0; i < g.generator_count(); ++i) images.push_back(t.generator(i));
      return {g, t, std::move(images)};
    }
    case GroupKind::klein_bottle:
      throw PreconditionFailed("klein abelianization has torsion; use klein_b_exponent");
    default:
      throw PreconditionFailed("no built-in abelianization for " + g.spec());
  }
}

Homomorphism Homomorphism::z_exponent() {
  auto z = Group::free_abelian(1);
  return {Group::laurent_semidirect(), z, {z.identity(), z.generator(0)}};
}

Homomorphism Homomorphism::coordinate(Group free_abelian, std::size_t index) {
  if (free_abelian.kind() != GroupKind::free_abelian) throw PreconditionFailed("coordinate map needs abelian:n");
  auto z = Group::free_abelian(1);
  std::vector<Element> images;
  for (std::size_t i = 0; i < free_abelian.generator_count(); ++i)
    images.push_back(i == index ? z.generator(0) : z.identity());
  return {free_abelian, z, std::move(images)};
}

Homomorphism Homomorphism::reduction_mod(int n) {
  auto c = Group::finite_cyclic(n);
  return {Group::free_abelian(1), c, {c.generator(0)}};
}

Element Homomorphism::operator()(Element const& g) const {
  if (!(g.group() == source_)) throw OwnerMismatch("element of " + g.group().spec() + " applied to map from " + source_.spec());
  return image_of_word(target_, images_, as_word(g));
}

}  // namespace ordercert
