#include <doctest.h>

#include <random>

#include "ordercert/circular.hpp"
#include "ordercert/errors.hpp"
#include "support.hpp"

using namespace ordercert;
using test_support::el;

namespace {

Element zn(std::int64_t v) { return Group::free_abelian(1).element({v}); }

Triple zt(std::int64_t a, std::int64_t b, std::int64_t c) { return make_triple(zn(a), zn(b), zn(c)); }

FiniteSubset zset(std::vector<std::int64_t> const& xs) {
  std::vector<Element> v;
  for (auto x : xs) v.push_back(zn(x));
  return FiniteSubset(Group::free_abelian(1), std::move(v));
}

// S = positive multiples of 3 in Z.
SemigroupOracle multiples_of_three() {
  return SemigroupOracle::from_predicate("3Z+", [](Element const& g) {
    auto v = g.normal_form()[0];
    return v > 0 && v % 3 == 0;
  });
}

std::vector<Triple> all_triples(std::vector<Element> const& B) {
  std::vector<Triple> out;
  for (auto const& a : B)
    for (auto const& b : B)
      for (auto const& c : B) out.push_back(make_triple(a, b, c));
  return out;
}

CircularAssignment restrict_to(CircularAssignment const& c, std::vector<Element> const& B) {
  CircularAssignment out;
  for (auto const& t : all_triples(B))
    if (auto v = c.value_or_degenerate(t)) out.set(t, *v);
  return out;
}

}  // namespace

TEST_CASE("the circle order on Z/3 is a circular ordering") {
  auto C3 = Group::finite_cyclic(3);
  auto c = circle_order(C3);
  CHECK(c.size() == 27);
  CHECK(c.at(make_triple(C3.element({0}), C3.element({1}), C3.element({2}))) == 1);
  CHECK(c.at(make_triple(C3.element({0}), C3.element({2}), C3.element({1}))) == -1);
  CHECK(c.at(make_triple(C3.element({1}), C3.element({1}), C3.element({2}))) == 0);
  CHECK(validate_circular_assignment(c).ok);
}

TEST_CASE("validation reports each axiom") {
  auto F = Group::free(2);
  auto id = F.identity();
  auto a = el(F, "a");
  auto b = el(F, "b");

  CircularAssignment degenerate;
  degenerate.set(make_triple(a, a, a), 0);
  CHECK(validate_circular_assignment(degenerate).ok);

  CircularAssignment swap;
  swap.set(make_triple(id, a, b), 1);
  swap.set(make_triple(a, id, b), 1);
  auto v = validate_circular_assignment(swap);
  CHECK(!v.ok);
  CHECK(v.failed == CircularValidation::Axiom::cocycle);
  REQUIRE(v.witness.size() == 4);

  CircularAssignment zero;
  zero.set(make_triple(id, a, b), 0);
  auto z = validate_circular_assignment(zero);
  CHECK(z.failed == CircularValidation::Axiom::zero_iff_degenerate);

  CircularAssignment moved;
  moved.set(make_triple(id, a, b), 1);
  moved.set(make_triple(a, el(F, "a^2"), el(F, "a b")), -1);
  auto m = validate_circular_assignment(moved);
  CHECK(m.failed == CircularValidation::Axiom::invariance);
  CHECK(validate_circular_assignment(moved, std::vector<Element>{b}).ok);
}

TEST_CASE("preorder search on small finite groups") {
  auto C4 = Group::finite_cyclic(4);
  auto r = preorder_search(C4, 4);
  REQUIRE(r.status == CircularSearchResult::Status::found);
  CHECK(r.assignment.size() == 64);
  CHECK(validate_circular_assignment(r.assignment).ok);

  auto V = Group::direct_product({Group::finite_cyclic(2), Group::finite_cyclic(2)});
  CHECK(preorder_search(V, 2).status == CircularSearchResult::Status::impossible);
  // stable once the ball covers the group
  CHECK(preorder_search(V, 3).status == CircularSearchResult::Status::impossible);

  auto trivial = Group::finite_cyclic(1);
  for (int k : {1, 3}) {
    auto t = preorder_search(trivial, k);
    CHECK(t.status == CircularSearchResult::Status::found);
    CHECK(validate_circular_assignment(t.assignment).ok);
  }
}

TEST_CASE("preorders restrict to shorter lengths") {
  for (auto [G, k] : {std::pair{Group::free_abelian(1), 2}, std::pair{Group::klein_bottle(), 1},
                      std::pair{Group::finite_cyclic(5), 3}}) {
    CAPTURE(G.spec());
    auto r = preorder_search(G, k);
    REQUIRE(r.status == CircularSearchResult::Status::found);
    CHECK(validate_circular_assignment(r.assignment).ok);
    auto smaller = restrict_to(r.assignment, ball(G, k - 1).members);
    CHECK(validate_circular_assignment(smaller).ok);
  }
}

TEST_CASE("preorder search budget") {
  CHECK_THROWS_AS(preorder_search(Group::free_abelian(2), 2, 10), BudgetExceeded);
}

TEST_CASE("triple assignment search") {
  auto single = triple_assignment_search({zt(0, 1, 2)});
  REQUIRE(single.status == CircularSearchResult::Status::found);
  CHECK(single.assignment.at(zt(0, 1, 2)) == 1);

  auto C3 = Group::finite_cyclic(3);
  std::vector<Triple> T;
  for (auto const& t : all_triples(ball(C3, 3).members))
    if (!is_degenerate(t)) T.push_back(t);
  CHECK(T.size() == 6);
  auto r = triple_assignment_search(T);
  REQUIRE(r.status == CircularSearchResult::Status::found);
  auto circle = circle_order(C3);
  for (auto const& t : T) CHECK(r.assignment.at(t) == circle.at(t));
  auto e = [&](int i) { return C3.element({i}); };
  CHECK(r.assignment.at(make_triple(e(0), e(1), e(2))) == -r.assignment.at(make_triple(e(1), e(0), e(2))));

  auto V = Group::direct_product({Group::finite_cyclic(2), Group::finite_cyclic(2)});
  std::vector<Triple> U;
  for (auto const& t : all_triples(ball(V, 2).members))
    if (!is_degenerate(t)) U.push_back(t);
  CHECK(triple_assignment_search(U).status == CircularSearchResult::Status::impossible);

  CHECK_THROWS_AS(triple_assignment_search({zt(0, 0, 1)}), PreconditionFailed);
}

TEST_CASE("search outputs pass validation") {
  std::mt19937_64 rng(301);
  auto Z2 = Group::free_abelian(2);
  auto B = ball(Z2, 1).members;
  auto triples = all_triples(B);
  std::erase_if(triples, [](Triple const& t) { return is_degenerate(t); });
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(triples.begin(), triples.end(), rng);
    std::vector<Triple> T(triples.begin(), triples.begin() + 12);
    auto r = triple_assignment_search(T);
    REQUIRE(r.status == CircularSearchResult::Status::found);
    CHECK(r.assignment.size() >= T.size());
    std::vector<Element> comp;
    for (auto const& t : T) comp.insert(comp.end(), t.begin(), t.end());
    CHECK(validate_circular_assignment(r.assignment, comp).ok);
  }
}

TEST_CASE("extension through Z -> Z/3") {
  auto phi = Homomorphism::reduction_mod(3);
  auto d = circle_order(Group::finite_cyclic(3));
  auto S = multiples_of_three();

  auto c = extension_circular_order(zset({0, 1, 3}), phi, d, S);
  CHECK(c.at(zt(0, 3, 1)) == 1);
  CHECK(c.at(zt(0, 1, 3)) == -1);
  CHECK(c.size() == 27);
  CHECK(validate_circular_assignment(c).ok);

  auto all_equal = extension_circular_order(zset({0, 3, 6}), phi, d, multiples_of_three());
  CHECK(all_equal.at(zt(0, 3, 6)) == 1);
  CHECK(all_equal.at(zt(3, 0, 6)) == -1);
  CHECK(validate_circular_assignment(all_equal).ok);

  // 0 and 3 differ by a kernel element outside the empty semigroup
  CHECK_THROWS_AS(extension_circular_order(zset({0, 3}), phi, d, SemigroupOracle::empty()), PreconditionFailed);
  // S is only consulted on ker(phi), so a larger semigroup gives the same c
  auto positive = SemigroupOracle::from_predicate("positive", [](Element const& g) { return g.normal_form()[0] > 0; });
  CHECK(extension_circular_order(zset({0, 1, 3}), phi, d, positive) == c);
  for (auto const& k : positive.positive_log()) CHECK(phi(k).is_identity());
}

TEST_CASE("extension with an injective map is d after phi") {
  auto phi = Homomorphism::reduction_mod(5);
  auto C5 = Group::finite_cyclic(5);
  auto d = circle_order(C5);
  auto X = zset({0, 6, -3, 13});
  auto c = extension_circular_order(X, phi, d, SemigroupOracle::empty());
  for (auto const& [t, v] : c.values()) CHECK(v == d.at(make_triple(phi(t[0]), phi(t[1]), phi(t[2]))));
  CHECK(validate_circular_assignment(c).ok);
}

TEST_CASE("random extensions pass validation") {
  std::mt19937_64 rng(302);
  std::uniform_int_distribution<std::int64_t> pick(-7, 7);
  auto phi = Homomorphism::reduction_mod(3);
  auto d = circle_order(Group::finite_cyclic(3));
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::int64_t> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(pick(rng));
    auto X = zset(xs);
    auto c = extension_circular_order(X, phi, d, multiples_of_three());
    CHECK(c.size() == X.size() * X.size() * X.size());
    auto v = validate_circular_assignment(c);
    CHECK_MESSAGE(v.ok, v.violation);
  }
}

TEST_CASE("extension from a kernel cone") {
  // Z^2 -> Z by the first coordinate, with S the positive cone of the kernel
  auto Z2 = Group::free_abelian(2);
  auto Z1 = Group::free_abelian(1);
  auto first = Homomorphism(Z2, Z1, {Z1.element({1}), Z1.element({0})});
  auto P = ConeHandle::standard(Z2);
  auto kernel_positive = SemigroupOracle::from_predicate("ker+", [&](Element const& g) {
    return g.normal_form()[0] == 0 && P.contains(g);
  });
  auto base = ball(Z1, 2).members;
  auto d = cone_to_circular(ConeHandle::standard(Z1), all_triples(base));
  FiniteSubset X(Z2, {Z2.element({0, 0}), Z2.element({0, 1}), Z2.element({1, -1}), Z2.element({1, 2})});
  auto c = extension_circular_order(X, first, d, kernel_positive);
  CHECK(validate_circular_assignment(c).ok);
  CHECK(!kernel_positive.positive_log().empty());
}

TEST_CASE("semigroup oracle antisymmetry") {
  auto S = SemigroupOracle::from_predicate("all", [](Element const&) { return true; });
  CHECK(S.contains(zn(2)));
  CHECK(S.contains(zn(2)));
  CHECK_THROWS_AS(S.contains(zn(-2)), PreconditionFailed);
  auto copy = S;
  CHECK_THROWS_AS(copy.contains(zn(-2)), PreconditionFailed);
  CHECK(S.positive_log() == std::vector<Element>{zn(2)});
  CHECK(!SemigroupOracle::empty().contains(zn(1)));
  auto P = SemigroupOracle::from_cone(ConeHandle::standard(Group::free_abelian(1)));
  CHECK(P.contains(zn(4)));
  CHECK(!P.contains(zn(-4)));
}

TEST_CASE("cone to circular") {
  auto P = ConeHandle::standard(Group::free_abelian(1));
  auto c = cone_to_circular(P, {zt(0, 1, 2), zt(1, 0, 2), zt(0, 0, 1), zt(2, 0, 1)});
  CHECK(c.at(zt(0, 1, 2)) == 1);
  CHECK(c.at(zt(1, 0, 2)) == -1);
  CHECK(c.at(zt(0, 0, 1)) == 0);
  CHECK(c.at(zt(2, 0, 1)) == 1);
}

TEST_CASE("left orders induce invariant circular orders") {
  for (auto G : {Group::free_abelian(2), Group::klein_bottle(), Group::heisenberg()}) {
    CAPTURE(G.spec());
    auto B = ball(G, 1).members;
    auto c = cone_to_circular(ConeHandle::standard(G), all_triples(B));
    CHECK(validate_circular_assignment(c, B).ok);
  }
}
