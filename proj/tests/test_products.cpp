#include <doctest.h>

#include <random>

#include "ordercert/errors.hpp"
#include "ordercert/products.hpp"
#include "support.hpp"

using namespace ordercert;
using test_support::el;
using test_support::els;

namespace {

FiniteSubset ints(std::initializer_list<std::int64_t> xs) {
  auto Z = Group::free_abelian(1);
  std::vector<Element> v;
  for (auto x : xs) v.push_back(Z.element({x}));
  return FiniteSubset(Z, std::move(v));
}

FiniteSubset pts(std::initializer_list<std::pair<std::int64_t, std::int64_t>> xs) {
  auto Z2 = Group::free_abelian(2);
  std::vector<Element> v;
  for (auto [a, b] : xs) v.push_back(Z2.element({a, b}));
  return FiniteSubset(Z2, std::move(v));
}

FiniteSubset subset(Group const& G, std::vector<std::string> const& texts) {
  return FiniteSubset(G, els(G, texts));
}

FiniteSubset random_subset(Group const& G, int radius, std::size_t k, std::mt19937_64& rng) {
  return FiniteSubset(G, test_support::sample(G, radius, k, rng));
}

}  // namespace

TEST_CASE("unique products by table") {
  auto A = ints({0, 1});
  auto r = unique_products(A, A);
  REQUIRE(r.products.size() == 2);
  CHECK(r.products[0] == UniqueProduct{ints({0}).members()[0], ints({0}).members()[0], ints({0}).members()[0]});
  CHECK(r.products[1].product == ints({2}).members()[0]);
  CHECK(r.products[1].a == ints({1}).members()[0]);

  auto F = Group::free(2);
  auto I = FiniteSubset(F, {F.identity()});
  auto one = unique_products(I, I);
  REQUIRE(one.products.size() == 1);
  CHECK(one.products[0].product.is_identity());

  auto four = unique_products(subset(F, {"id", "a"}), subset(F, {"id", "b"}));
  CHECK(four.products.size() == 4);

  CHECK_THROWS_AS(unique_products(A, I), OwnerMismatch);
}

TEST_CASE("finite subsets sort and deduplicate") {
  auto A = ints({3, 1, 3, 2});
  CHECK(A.size() == 3);
  CHECK(A == ints({1, 2, 3}));
  CHECK(A.contains(ints({2}).members()[0]));
  CHECK(left_translate(ints({5}).members()[0], A) == ints({6, 7, 8}));
  CHECK_THROWS_AS(FiniteSubset::of({}), PreconditionFailed);
}

TEST_CASE("upp_normalize") {
  auto F = Group::free(2);
  auto n = upp_normalize(subset(F, {"a"}), subset(F, {"b"}));
  CHECK(n.X == FiniteSubset(F, {F.identity()}));
  CHECK(n.Y == FiniteSubset(F, {F.identity()}));
  CHECK(n.x == el(F, "a"));
  CHECK(n.y == el(F, "b"));

  auto m = upp_normalize(ints({0, 1}), ints({5}));
  CHECK(m.X == ints({0, 1}));
  CHECK(m.Y == ints({0}));
  auto one = ints({1}).members()[0];
  auto zero = ints({0}).members()[0];
  auto back = upp_pullback(m, UniqueProduct{one, one, zero});
  CHECK(back.product == ints({6}).members()[0]);
  CHECK(is_unique_product(ints({0, 1}), ints({5}), back.a, back.b));
}

TEST_CASE("normalization pulls unique products back") {
  std::mt19937_64 rng(201);
  for (auto G : {Group::free(2), Group::klein_bottle(), Group::heisenberg(), Group::finite_cyclic(5)}) {
    for (int trial = 0; trial < 15; ++trial) {
      auto X = random_subset(G, 2, 3, rng);
      auto Y = random_subset(G, 2, 3, rng);
      auto n = upp_normalize(X, Y);
      CHECK(n.X.contains(G.identity()));
      CHECK(n.Y.contains(G.identity()));
      for (auto const& u : unique_products(n.X, n.Y).products) {
        auto back = upp_pullback(n, u);
        CHECK(back.product == back.a * back.b);
        CHECK(is_unique_product(X, Y, back.a, back.b));
      }
    }
  }
}

TEST_CASE("subset condition") {
  auto F = Group::free(2);
  auto r = upp_subset_condition(FiniteSubset(F, {F.identity()}));
  CHECK(r.holds);

  CHECK(upp_subset_condition(ints({0, 1, 2})).holds);

  // |X|+|Y| <= |A| rules out X = Y = Z/2 inside Z/2 itself
  auto C2 = Group::finite_cyclic(2);
  CHECK(upp_subset_condition(FiniteSubset(C2, {C2.identity(), C2.element({1})})).holds);

  auto C4 = Group::finite_cyclic(4);
  std::vector<Element> all;
  for (std::int64_t i = 0; i < 4; ++i) all.push_back(C4.element({i}));
  auto bad = upp_subset_condition(FiniteSubset(C4, all));
  CHECK(!bad.holds);
  REQUIRE(bad.counterexample);
  auto pair = FiniteSubset(C4, {C4.element({0}), C4.element({2})});
  CHECK(bad.counterexample->first == pair);
  CHECK(bad.counterexample->second == pair);
  CHECK(unique_products(pair, pair).products.empty());

  CHECK_THROWS_AS(upp_subset_condition(ints({1, 2})), PreconditionFailed);
}

TEST_CASE("subset condition parallel matches serial") {
  std::mt19937_64 rng(202);
  for (auto G : {Group::finite_cyclic(6), Group::klein_bottle(), Group::free(2)}) {
    for (int trial = 0; trial < 3; ++trial) {
      auto v = test_support::sample(G, 2, 6, rng);
      v.push_back(G.identity());
      FiniteSubset A(G, v);
      auto s = upp_subset_condition(A, Exec::serial);
      auto p = upp_subset_condition(A, Exec::parallel);
      CHECK(s.holds == p.holds);
      CHECK(s.counterexample == p.counterexample);
      CHECK(s.pairs_checked == p.pairs_checked);
    }
  }
}

TEST_CASE("upp_lift on the klein bottle") {
  auto K = Group::klein_bottle();
  auto q = Homomorphism::klein_b_exponent();
  auto u = upp_lift(subset(K, {"id", "a", "b"}), subset(K, {"id", "b"}), q);
  CHECK(u.product == el(K, "b^2"));
  CHECK(u.a == el(K, "b"));
  CHECK(u.b == el(K, "b"));

  auto I = FiniteSubset(K, {K.identity()});
  auto t = upp_lift(I, I, q);
  CHECK(t.product.is_identity());
  CHECK(t.a.is_identity());
}

TEST_CASE("upp_lift on Z^2 recurses into the kernel") {
  auto Z2 = Group::free_abelian(2);
  auto second = Homomorphism(Z2, Group::free_abelian(1),
                             {Group::free_abelian(1).element({0}), Group::free_abelian(1).element({1})});
  auto u = upp_lift(pts({{0, 0}, {1, 0}}), pts({{0, 0}, {0, 1}}), second);
  CHECK(u.product == Z2.element({1, 1}));
  CHECK(u.a == Z2.element({1, 0}));
  CHECK(u.b == Z2.element({0, 1}));
}

TEST_CASE("upp_lift preconditions") {
  auto K = Group::klein_bottle();
  auto q = Homomorphism::klein_b_exponent();
  CHECK_THROWS_AS(upp_lift(subset(K, {"a"}), subset(K, {"id"}), q), PreconditionFailed);
  // a kernel oracle that never answers
  UniqueProductProvider silent = [](FiniteSubset const&, FiniteSubset const&) { return std::nullopt; };
  CHECK_THROWS_AS(upp_lift(subset(K, {"id", "a"}), subset(K, {"id", "a^-1"}), q, silent), PreconditionFailed);
  // an oracle returning a non-unique product is caught by the final check
  UniqueProductProvider liar = [](FiniteSubset const& X, FiniteSubset const& Y) {
    return std::optional{UniqueProduct{X.members().front() * Y.members().back(), X.members().front(), Y.members().back()}};
  };
  auto C = Group::free_abelian(1);
  auto id_map = Homomorphism(C, Group::free_abelian(1), {Group::free_abelian(1).element({0})});
  CHECK_THROWS_AS(upp_lift(ints({0, 1}), ints({0, 1}), id_map, liar), Error);
}

TEST_CASE("lifted unique products pass the exhaustive check") {
  std::mt19937_64 rng(203);
  auto K = Group::klein_bottle();
  std::vector chainK{Homomorphism::klein_b_exponent()};
  auto H = Group::heisenberg();
  std::vector chainH{Homomorphism::abelianization(H)};
  for (int trial = 0; trial < 40; ++trial) {
    for (auto [G, chain] : {std::pair{K, &chainK}, std::pair{H, &chainH}}) {
      auto X = random_subset(G, 2, 4, rng);
      auto Y = random_subset(G, 2, 4, rng);
      auto u = find_unique_product(X, Y, *chain);
      CHECK(is_unique_product(X, Y, u.a, u.b));
      CHECK(u.product == u.a * u.b);
    }
  }
}

TEST_CASE("UPP groups always have unique products") {
  std::mt19937_64 rng(204);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    for (auto G : {Group::free(2), Group::klein_bottle()}) {
      auto A = random_subset(G, 2, size(rng), rng);
      auto B = random_subset(G, 2, size(rng), rng);
      auto r = unique_products(A, B);
      CHECK(!r.products.empty());
      for (auto const& u : r.products) CHECK(is_unique_product(A, B, u.a, u.b));
      CHECK(r.products == unique_products(A, B, Exec::serial).products);
    }
  }
}

TEST_CASE("extreme points") {
  auto Z = ints({7});
  CHECK(extreme_points(Z) == Z.members());
  CHECK(extreme_points(ints({0, 1, 2})) == ints({0, 2}).members());
  auto F = Group::free(2);
  auto A = subset(F, {"id", "a", "b"});
  CHECK(extreme_points(A) == A.members());
  CHECK(!is_extreme_point(ints({0, 1, 2}), ints({1}).members()[0]));
}

TEST_CASE("diffuse groups have two extreme points") {
  std::mt19937_64 rng(205);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  for (int trial = 0; trial < 100; ++trial) {
    for (auto G : {Group::free(2), Group::free_abelian(2), Group::klein_bottle(), Group::heisenberg()}) {
      auto A = random_subset(G, 2, size(rng), rng);
      if (A.size() < 2) continue;
      auto pts = extreme_points(A);
      CHECK(pts.size() >= 2);
      for (auto const& p : pts) CHECK(is_extreme_point(A, p));
    }
  }
  // torsion: the whole of Z/3 has no extreme point
  auto C3 = Group::finite_cyclic(3);
  CHECK(extreme_points(FiniteSubset(C3, {C3.element({0}), C3.element({1}), C3.element({2})})).empty());
}

TEST_CASE("diffuse_lift") {
  auto K = Group::klein_bottle();
  CHECK(diffuse_lift(subset(K, {"id", "a", "b"}), Homomorphism::klein_b_exponent()) == el(K, "b"));
  CHECK(diffuse_lift(FiniteSubset(K, {K.identity()}), Homomorphism::klein_b_exponent()).is_identity());

  auto H = Group::heisenberg();
  CHECK(diffuse_lift(subset(H, {"id", "x", "z"}), Homomorphism::abelianization(H)) == el(H, "x"));

  ExtremeProvider wrong = [](FiniteSubset const& A) {
    auto m = A.members();
    return std::vector<Element>{m[m.size() / 2]};
  };
  CHECK_THROWS_AS(diffuse_lift(ints({0, 1, 2}), Homomorphism::identity(Group::free_abelian(1)), wrong),
                  PreconditionFailed);
  CHECK_THROWS_AS(diffuse_lift(subset(K, {"a", "b"}), Homomorphism::klein_b_exponent()), PreconditionFailed);
}

TEST_CASE("diffuse lifts are extreme points") {
  std::mt19937_64 rng(206);
  auto K = Group::klein_bottle();
  auto H = Group::heisenberg();
  std::vector chainK{Homomorphism::klein_b_exponent()};
  std::vector chainH{Homomorphism::abelianization(H)};
  for (int trial = 0; trial < 40; ++trial) {
    for (auto [G, chain] : {std::pair{K, &chainK}, std::pair{H, &chainH}}) {
      auto v = test_support::sample(G, 2, 4, rng);
      v.push_back(G.identity());
      FiniteSubset X(G, v);
      auto p = diffuse_lift_chain(X, *chain);
      CHECK(is_extreme_point(X, p));
    }
  }
}
