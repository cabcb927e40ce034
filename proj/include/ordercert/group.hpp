#pragma once

// Built-in groups with computable normal forms.
//
// Every element is stored as a flat vector of integers whose meaning depends
// on the group kind:
//
//   free(n)             reduced word, letters +-(i+1) for generator i
//   free_abelian(n)     exponent vector of length n
//   finite_cyclic(n)    single residue in [0, n)
//   klein_bottle        (m, n) for a^m b^n, with b a = a^-1 b
//   heisenberg          (p, q, r) for x^p y^q z^r, z = x^-1 y^-1 x y central
//   laurent_semidirect  (k, e1, c1, e2, c2, ...) for (sum c_i t^e_i, z^k),
//                       exponents strictly increasing, no zero coefficients
//   direct_product      (len1, nf1..., len2, nf2..., ...)
//
// Two elements are equal iff their normal forms are equal.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ordercert/laurent.hpp"

namespace ordercert {

enum class GroupKind {
  free,
  free_abelian,
  finite_cyclic,
  klein_bottle,
  heisenberg,
  laurent_semidirect,
  direct_product,
};

class Element;

/// Interned handle to a built-in group. Handles compare equal iff they
/// denote the same group spec; copying is a pointer copy.
class Group {
 public:
  static Group free(int rank);
  static Group free_abelian(int rank);
  static Group finite_cyclic(int order);
  static Group klein_bottle();
  static Group heisenberg();
  static Group laurent_semidirect();
  static Group direct_product(std::vector<Group> factors);

  GroupKind kind() const noexcept;
  /// n for free/free_abelian/finite_cyclic; 0 otherwise.
  int parameter() const noexcept;
  std::span<Group const> factors() const noexcept;

  std::size_t generator_count() const noexcept;
  std::span<std::string const> generator_labels() const noexcept;
  /// Canonical spec text, e.g. "product(cyclic:2,cyclic:2)".
  std::string const& spec() const noexcept;

  bool is_abelian() const noexcept;
  bool is_finite() const noexcept;

  Element identity() const;
  Element generator(std::size_t index) const;
  /// Normalizes `coords` into an element (reduces words, takes residues, ...).
  Element element(std::vector<std::int64_t> coords) const;

  friend bool operator==(Group a, Group b) noexcept { return a.data_ == b.data_; }

  struct Data;

 private:
  explicit Group(Data const* data) : data_(data) {}
  static Group intern(Data data);

  Data const* data_ = nullptr;
};

class Element {
 public:
  Element(Group group, std::vector<std::int64_t> normal_form)
      : group_(group), nf_(std::move(normal_form)) {}

  Group group() const noexcept { return group_; }
  std::vector<std::int64_t> const& normal_form() const noexcept { return nf_; }
  bool is_identity() const;

  friend bool operator==(Element const& a, Element const& b) noexcept {
    return a.group_ == b.group_ && a.nf_ == b.nf_;
  }
  /// Normal-form lexicographic order (within one group).
  friend std::strong_ordering operator<=>(Element const& a, Element const& b) noexcept {
    return a.nf_ <=> b.nf_;
  }

 private:
  Group group_;
  std::vector<std::int64_t> nf_;
};

struct ElementHash {
  std::size_t operator()(Element const& e) const noexcept;
};

/// Throws OwnerMismatch unless g and h live in the same group.
void require_same_owner(Element const& g, Element const& h);

Element multiply(Element const& g, Element const& h);
Element invert(Element const& g);
Element power(Element const& g, std::int64_t k);
/// g h g^-1
Element conjugate(Element const& g, Element const& h);

inline Element operator*(Element const& g, Element const& h) { return multiply(g, h); }

/// A generator raised to an exponent.
struct Syllable {
  std::size_t generator = 0;
  std::int64_t exponent = 0;
  friend bool operator==(Syllable const&, Syllable const&) = default;
};
using Word = std::vector<Syllable>;

Element evaluate(Group g, Word const& word);
/// Some word in the generators that evaluates to `e`.
Word as_word(Element const& e);
/// Finite relator set of the built-in presentation (each evaluates to id).
std::vector<Word> relators(Group g);

// Kind-specific accessors. Each throws PreconditionFailed on the wrong kind.
std::pair<LaurentPoly, std::int64_t> laurent_parts(Element const& e);
Element laurent_element(Group g, LaurentPoly const& poly, std::int64_t z_exponent);
std::vector<Element> product_components(Element const& e);
Element product_element(Group g, std::vector<Element> const& components);

inline constexpr std::size_t default_ball_budget = 1'000'000;

/// All elements of word length <= radius in the generators and their inverses.
struct Ball {
  Group group;
  int radius = 0;
  std::vector<Element> members;  // sorted by normal form

  bool contains(Element const& e) const;
};

Ball ball(Group g, int radius, std::size_t budget = default_ball_budget);

}  // namespace ordercert
