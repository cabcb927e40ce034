#include <doctest.h>

#include <random>

#include "ordercert/errors.hpp"
#include "ordercert/order_search.hpp"
#include "support.hpp"

using namespace ordercert;
using test_support::el;
using test_support::els;

namespace {

// Every witness replays to id and only uses the signed generators.
void check_witnesses(SearchVerdict const& v, std::span<Element const> X) {
  for (auto const& [signs, d] : v.witnesses) {
    CHECK(replay(d).is_identity());
    auto signed_X = apply_signs(X, signs);
    CHECK(leaves_permitted(d, signed_X, closure_kind(v.criterion, v.conjugator_radius)));
  }
}

}  // namespace

TEST_CASE("sign vectors are enumerated +1 first") {
  CHECK(sign_vector_at(2, 0) == SignVector{1, 1});
  CHECK(sign_vector_at(2, 1) == SignVector{1, -1});
  CHECK(sign_vector_at(2, 2) == SignVector{-1, 1});
  CHECK(sign_vector_at(2, 3) == SignVector{-1, -1});
}

TEST_CASE("torsion obstructs left orders") {
  auto C2 = Group::finite_cyclic(2);
  std::vector X{C2.element({1})};
  auto v = sign_search(X, Criterion::lo, 2);
  CHECK(v.status == Verdict::obstructed);
  REQUIRE(v.witnesses.size() == 2);
  CHECK(v.witnesses[0].first == SignVector{1});
  CHECK(v.witnesses[1].first == SignVector{-1});
  for (auto const& [s, d] : v.witnesses) {
    CHECK(d.is_product());
    CHECK(d.size() == 2);
  }
  check_witnesses(v, X);
}

TEST_CASE("the klein bottle is not bi-orderable") {
  auto K = Group::klein_bottle();
  std::vector X{el(K, "a")};
  auto v = sign_search(X, Criterion::bo, 2, 1);
  CHECK(v.status == Verdict::obstructed);
  REQUIRE(v.witnesses.size() == 2);
  for (auto const& [s, d] : v.witnesses) {
    REQUIRE(d.is_product());
    auto [l, r] = d.children();
    auto ae = s[0] == 1 ? el(K, "a") : el(K, "a^-1");
    auto leaves = std::vector{replay(l), replay(r)};
    CHECK(std::count(leaves.begin(), leaves.end(), ae) == 1);
    CHECK(std::count(leaves.begin(), leaves.end(), el(K, "b") * ae * el(K, "b^-1")) == 1);
  }
  check_witnesses(v, X);
}

TEST_CASE("the klein bottle is left-orderable at depth 6") {
  auto K = Group::klein_bottle();
  auto X = els(K, {"a", "b"});
  auto v = sign_search(X, Criterion::lo, 6);
  CHECK(v.status == Verdict::certified);
  REQUIRE(v.signs);
  CHECK(*v.signs == SignVector{1, 1});
  CHECK(v.witnesses.empty());
}

TEST_CASE("identity entries are stripped") {
  auto A = Group::free_abelian(1);
  std::vector X{A.identity()};
  auto v = sign_search(X, Criterion::lo, 3);
  CHECK(v.status == Verdict::certified);
  CHECK(*v.signs == SignVector{1});

  auto C2 = Group::finite_cyclic(2);
  std::vector Y{C2.identity(), C2.element({1})};
  auto w = sign_search(Y, Criterion::lo, 2);
  CHECK(w.status == Verdict::obstructed);
  REQUIRE(w.witnesses.size() == 2);
  CHECK(w.witnesses[0].first == SignVector{1, 1});
  CHECK(w.witnesses[1].first == SignVector{1, -1});
  check_witnesses(w, Y);
}

TEST_CASE("budget exhaustion is inconclusive") {
  auto F = Group::free(2);
  auto X = els(F, {"a", "b"});
  auto v = sign_search(X, Criterion::lo, 10, 0, 50);
  CHECK(v.status == Verdict::inconclusive);
  CHECK(v.exhausted.size() == 4);
}

TEST_CASE("bi-orderable groups are never obstructed") {
  std::mt19937_64 rng(101);
  for (auto G : {Group::free(2), Group::free_abelian(2), Group::free_abelian(3)}) {
    for (int trial = 0; trial < 12; ++trial) {
      std::uniform_int_distribution<std::size_t> size(1, 4);
      auto X = test_support::sample(G, 2, size(rng), rng);
      CAPTURE(G.spec());
      CHECK(sign_search(X, Criterion::lo, 4).status != Verdict::obstructed);
      CHECK(sign_search(X, Criterion::co, 4).status != Verdict::obstructed);
      CHECK(sign_search(X, Criterion::bo, 3, 1).status != Verdict::obstructed);
    }
  }
}

TEST_CASE("an LO certificate rules out a CO obstruction at equal depth") {
  std::mt19937_64 rng(102);
  for (auto G : {Group::klein_bottle(), Group::heisenberg(), Group::finite_cyclic(4)}) {
    for (int trial = 0; trial < 8; ++trial) {
      auto X = test_support::sample(G, 2, 2, rng, false);
      auto lo = sign_search(X, Criterion::lo, 4);
      auto co = sign_search(X, Criterion::co, 4);
      if (lo.status == Verdict::certified) CHECK(co.status != Verdict::obstructed);
      if (co.status == Verdict::obstructed) check_witnesses(co, X);
    }
  }
}

TEST_CASE("parallel fan-out matches the serial reference") {
  std::mt19937_64 rng(103);
  for (auto G : {Group::klein_bottle(), Group::finite_cyclic(3), Group::free(2), Group::heisenberg()}) {
    for (int trial = 0; trial < 4; ++trial) {
      auto X = test_support::sample(G, 2, 3, rng, false);
      for (auto c : {Criterion::lo, Criterion::co, Criterion::bo}) {
        auto s = sign_search(X, c, 3, 1, default_closure_budget, Exec::serial);
        auto p = sign_search(X, c, 3, 1, default_closure_budget, Exec::parallel);
        CHECK(s.status == p.status);
        CHECK(s.signs == p.signs);
        REQUIRE(s.witnesses.size() == p.witnesses.size());
        for (std::size_t i = 0; i < s.witnesses.size(); ++i) {
          CHECK(s.witnesses[i].first == p.witnesses[i].first);
          CHECK(replay(s.witnesses[i].second) == replay(p.witnesses[i].second));
        }
      }
    }
  }
}

TEST_CASE("bo_sign_select on the Heisenberg group") {
  auto H = Group::heisenberg();
  auto X = els(H, {"x", "y"});
  auto sel = bo_sign_select(X, Homomorphism::abelianization(H), ConeHandle::standard(Group::free_abelian(2)), 4, 1);
  CHECK(sel.signs == SignVector{1, 1});
  CHECK(sel.decided_by == std::vector<int>{0, 0});
  CHECK(sel.verdict.status == Verdict::certified);

  auto Y = els(H, {"x^-1", "y x^2", "z^-1"});
  auto sel2 =
      bo_sign_select(Y, Homomorphism::abelianization(H), ConeHandle::standard(Group::free_abelian(2)), 3, 1);
  CHECK(sel2.signs == SignVector{-1, 1, 1});
  CHECK(sel2.decided_by == std::vector<int>{0, 0, -1});

  CHECK_THROWS_AS(bo_sign_select(els(H, {"z"}), Homomorphism::abelianization(H),
                                 ConeHandle::standard(Group::free_abelian(2)), 3, 1),
                  PreconditionFailed);
}

TEST_CASE("bo_sign_select makes images positive") {
  auto A = Group::free_abelian(1);
  std::vector X{A.element({-5})};
  auto sel = bo_sign_select(X, Homomorphism::identity(A), ConeHandle::standard(A), 3, 0);
  CHECK(sel.signs == SignVector{-1});

  std::mt19937_64 rng(104);
  auto H = Group::heisenberg();
  auto phi = Homomorphism::abelianization(H);
  auto cone = ConeHandle::standard(Group::free_abelian(2));
  for (int trial = 0; trial < 20; ++trial) {
    auto Z = test_support::sample(H, 2, 3, rng, false);
    bool any = std::any_of(Z.begin(), Z.end(), [&](Element const& g) { return !phi(g).is_identity(); });
    if (!any) continue;
    auto s = bo_sign_select(Z, phi, cone, 2, 0);
    auto signed_Z = apply_signs(Z, s.signs);
    for (auto const& g : signed_Z)
      if (!phi(g).is_identity()) CHECK(cone.contains(phi(g)));
  }
}

TEST_CASE("bo_sign_select with stages on the Laurent group") {
  auto L = Group::laurent_semidirect();
  auto X = std::vector{el(L, "z^-1"), test_support::lp("1*t^0"), test_support::lp("-1*t^2")};
  std::vector<SelectionStage> stages{{Homomorphism::z_exponent(), ConeHandle::standard(Group::free_abelian(1))}};
  auto sel = bo_sign_select(X, stages, 3, 1);
  CHECK(sel.signs[0] == -1);
  CHECK(sel.decided_by == std::vector<int>{0, -1, -1});
  // fallback signs come from a BO search on the kernel part
  std::vector<Element> rest{X[1], X[2]};
  auto sub = sign_search(rest, Criterion::bo, 3, 1);
  REQUIRE(sub.status == Verdict::certified);
  CHECK(sel.signs[1] == (*sub.signs)[0]);
  CHECK(sel.signs[2] == (*sub.signs)[1]);
}

TEST_CASE("bo_sign_select spot-checks conjugation invariance") {
  auto H = Group::heisenberg();
  auto K = Group::klein_bottle();
  auto lex = ConeHandle::lex(Homomorphism::klein_b_exponent(), ConeHandle::standard(K),
                             ConeHandle::standard(Group::free_abelian(1)));
  std::vector X{el(K, "a"), el(K, "b")};
  CHECK_THROWS_AS(bo_sign_select(X, Homomorphism::identity(K), lex, 2, 1), PreconditionFailed);
  CHECK_THROWS_AS(bo_sign_select(els(H, {"x"}), Homomorphism::abelianization(H),
                                 ConeHandle::standard(Group::free_abelian(3)), 2, 1),
                  PreconditionFailed);
}
