#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ordercert/certificate.hpp"
#include "ordercert/cli.hpp"
#include "ordercert/errors.hpp"
#include "support.hpp"

using namespace ordercert;
using test_support::el;
using test_support::els;

namespace {

CommandSpec check(std::string property, std::string group, std::vector<std::string> elements = {}) {
  CommandSpec c;
  c.subcommand = "check";
  c.property = std::move(property);
  c.group = std::move(group);
  c.elements = std::move(elements);
  return c;
}

bool verifies(Json const& doc) {
  auto r = verify_certificate(doc);
  if (!r.ok) MESSAGE(r.reason);
  return r.ok;
}

// Paths to every derivation leaf in a document's witnesses.
void leaf_paths(Json const& d, Json::json_pointer at, std::vector<Json::json_pointer>& out) {
  if (d[0] == "x") {
    out.push_back(at);
    return;
  }
  leaf_paths(d[1], at / 1, out);
  leaf_paths(d[2], at / 2, out);
}

}  // namespace

TEST_CASE("derivations round trip through JSON") {
  auto K = Group::klein_bottle();
  auto X = els(K, {"a", "b"});
  SignVector s{-1, 1};
  auto leaf_a = Derivation::leaf(0, invert(X[0]), el(K, "b"));
  auto leaf_b = Derivation::leaf(1, X[1]);
  auto d = Derivation::conradian(Derivation::product(leaf_a, leaf_b), leaf_b);
  auto j = derivation_to_json(d, s);
  CHECK(j[0] == "c");
  CHECK(j[1][1] == Json::array({"x", 0, -1, "b"}));
  auto back = derivation_from_json(j, X, s);
  CHECK(replay(back) == replay(d));
  CHECK(derivation_to_json(back, s) == j);

  CHECK_THROWS_AS(derivation_from_json(Json::array({"x", 2, 1}), X, s), ParseError);
  CHECK_THROWS_AS(derivation_from_json(Json::array({"x", 0, 1}), X, s), ParseError);
  CHECK_THROWS_AS(derivation_from_json(Json::array({"q", j[1], j[2]}), X, s), ParseError);
  CHECK_THROWS_AS(derivation_from_json(Json::array({"*", j[1]}), X, s), ParseError);
}

TEST_CASE("cones and maps round trip through JSON") {
  auto F = Group::free(1);
  for (auto P : {ConeHandle::standard(Group::free_abelian(2)), ConeHandle::q_cone(2), ConeHandle::qi_cone(3, 5),
                 ConeHandle::p_cone(), ConeHandle::pi_cone(2, 1), ConeHandle::finite(F, {F.generator(0)}, 2),
                 ConeHandle::conjugated(ConeHandle::standard(Group::heisenberg()), el(Group::heisenberg(), "x"))}) {
    CAPTURE(P.describe());
    CHECK(cone_from_json(cone_to_json(P)) == P);
  }
  auto phi = Homomorphism::abelianization(Group::heisenberg());
  CHECK(hom_from_json(hom_to_json(phi)) == phi);
  CHECK_THROWS_AS(cone_from_json(Json{{"kind", "mystery"}}), ParseError);
}

TEST_CASE("assignments round trip through JSON") {
  auto c = circle_order(Group::finite_cyclic(4));
  auto back = assignment_from_json(assignment_to_json(c), Group::finite_cyclic(4));
  CHECK(back.size() == 24);
  for (auto const& [t, v] : back.values()) CHECK(c.at(t) == v);
}

TEST_CASE("spec command examples") {
  auto bo = check("bo", "klein", {"a"});
  bo.depth = 2;
  bo.radius = 1;
  auto r = run(bo);
  CHECK(r.exit_code == 1);
  CHECK(r.document["verdict"] == "obstructed");
  CHECK(verifies(r.document));

  CommandSpec orbit;
  orbit.subcommand = "orbit";
  orbit.group = "laurent-z";
  orbit.cone = "pi";
  orbit.i = 2;
  orbit.bound = 10;
  auto o = run(orbit);
  CHECK(o.exit_code == 0);
  CHECK(o.document["evidence"]["count"] == 4);
  CHECK(verifies(o.document));

  auto circ = check("circ", "product(cyclic:2,cyclic:2)");
  circ.k = 2;
  auto c = run(circ);
  CHECK(c.exit_code == 1);
  CHECK(c.document["verdict"] == "impossible");
  CHECK(verifies(c.document));
}

TEST_CASE("every property emits verifiable documents") {
  std::vector<CommandSpec> cmds;
  auto lo = check("lo", "klein", {"a", "b"});
  lo.depth = 5;
  cmds.push_back(lo);
  auto co = check("co", "cyclic:3", {"a"});
  co.depth = 3;
  cmds.push_back(co);
  auto sel = check("bo", "heisenberg", {"x", "y^-1", "z"});
  sel.map = "natural";
  sel.depth = 3;
  cmds.push_back(sel);
  auto upp = check("upp", "klein", {"id", "a", "b"});
  upp.with = {"id", "b"};
  upp.map = "natural";
  cmds.push_back(upp);
  cmds.push_back(check("upp", "abelian:1", {"a^0", "a", "a^2"}));
  cmds.push_back(check("upp", "cyclic:4", {"id", "a", "a^2", "a^3"}));
  auto upp_finite = check("upp", "cyclic:2", {"id", "a"});
  upp_finite.with = {"id", "a"};
  cmds.push_back(upp_finite);
  auto diffuse = check("diffuse", "heisenberg", {"id", "x", "z"});
  diffuse.map = "natural";
  cmds.push_back(diffuse);
  cmds.push_back(check("diffuse", "cyclic:3", {"id", "a", "a^2"}));
  auto pre = check("circ", "cyclic:4");
  pre.k = 4;
  cmds.push_back(pre);
  auto ext = check("circ", "abelian:1", {"id", "a", "a^3"});
  ext.map = "mod:3";
  ext.semigroup = "multiples:3";
  cmds.push_back(ext);
  auto cone = check("cone-axioms", "");
  cone.cone = "pi";
  cone.i = 2;
  cmds.push_back(cone);
  auto bad_cone = check("cone-axioms", "klein");
  bad_cone.cone = "standard";
  bad_cone.mode = "bi";
  cmds.push_back(bad_cone);
  CommandSpec recur;
  recur.subcommand = "recur";
  recur.cone = "pi";
  recur.i = 2;
  recur.n_max = 8;
  cmds.push_back(recur);
  recur.cone = "p";
  recur.n_max = 50;
  cmds.push_back(recur);

  std::vector<int> expected{0, 1, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 1, 0, 1};
  REQUIRE(cmds.size() == expected.size());
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto r = run(cmds[i]);
    CAPTURE(i);
    CAPTURE(r.document.dump());
    CHECK(r.exit_code == expected[i]);
    CHECK(r.exit_code == exit_code_for(r.document["verdict"]));
    CHECK(verifies(r.document));
  }
}

TEST_CASE("inconclusive documents verify") {
  auto lo = check("lo", "free:2", {"a", "b"});
  lo.depth = 10;
  lo.budget = 40;
  auto r = run(lo);
  CHECK(r.exit_code == 2);
  CHECK(verifies(r.document));

  CommandSpec orbit;
  orbit.subcommand = "orbit";
  orbit.cone = "pi";
  orbit.i = 3;
  orbit.bound = 4;
  auto o = run(orbit);
  CHECK(o.exit_code == 2);
  CHECK(verifies(o.document));
}

TEST_CASE("mutated derivations are rejected") {
  auto cmd = check("lo", "cyclic:2", {"a"});
  cmd.depth = 2;
  auto doc = run(cmd).document;
  REQUIRE(verifies(doc));
  std::size_t mutants = 0;
  for (std::size_t w = 0; w < doc["evidence"]["witnesses"].size(); ++w) {
    auto root = Json::json_pointer("/evidence/witnesses") / w / "derivation";
    std::vector<Json::json_pointer> leaves;
    leaf_paths(doc[root], root, leaves);
    for (auto const& p : leaves) {
      auto flip = doc;
      flip[p][2] = -flip[p][2].get<int>();
      CHECK(!verify_certificate(flip).ok);
      auto index = doc;
      index[p][1] = 7;
      CHECK(!verify_certificate(index).ok);
      auto tag = doc;
      tag[p][0] = "y";
      CHECK(!verify_certificate(tag).ok);
      mutants += 3;
    }
    auto conradian = doc;
    conradian[root][0] = "c";
    CHECK(!verify_certificate(conradian).ok);
    ++mutants;
  }
  CHECK(mutants >= 10);

  auto dropped = doc;
  dropped["evidence"]["witnesses"].erase(1);
  CHECK(!verify_certificate(dropped).ok);
  auto relabeled = doc;
  relabeled["verdict"] = "certified";
  CHECK(!verify_certificate(relabeled).ok);
}

TEST_CASE("mutated evidence of other kinds is rejected") {
  auto lo = check("lo", "klein", {"a", "b"});
  lo.depth = 4;
  auto cert = run(lo).document;
  REQUIRE(verifies(cert));
  auto flipped = cert;
  flipped["evidence"]["signs"][0] = -1;
  flipped["evidence"]["signs"][1] = -1;
  CHECK(verifies(flipped));  // (-1,-1) is also a clean vector for the klein bottle
  auto torsion = check("lo", "cyclic:2", {"a"});
  auto fake = run(torsion).document;
  fake["verdict"] = "certified";
  fake["evidence"]["signs"] = Json::array({1});
  fake["evidence"]["witnesses"] = Json::array();
  CHECK(!verify_certificate(fake).ok);

  auto pre = check("circ", "cyclic:3");
  pre.k = 3;
  auto circ = run(pre).document;
  REQUIRE(verifies(circ));
  auto wrong = circ;
  wrong["evidence"]["assignment"][0][3] = -wrong["evidence"]["assignment"][0][3].get<int>();
  CHECK(!verify_certificate(wrong).ok);
  auto missing = circ;
  missing["evidence"]["assignment"].erase(0);
  CHECK(!verify_certificate(missing).ok);

  CommandSpec orbit;
  orbit.subcommand = "orbit";
  orbit.cone = "pi";
  orbit.i = 1;
  orbit.bound = 10;
  auto o = run(orbit).document;
  REQUIRE(verifies(o));
  auto short_orbit = o;
  short_orbit["evidence"]["cones"].erase(1);
  CHECK(!verify_certificate(short_orbit).ok);

  auto up = check("upp", "klein", {"id", "a", "b"});
  up.with = {"id", "b"};
  auto u = run(up).document;
  REQUIRE(verifies(u));
  u["evidence"]["a"] = "b";
  CHECK(!verify_certificate(u).ok);
}

TEST_CASE("usage errors exit with 3") {
  auto none = check("lo", "klein");
  CHECK(run(none).exit_code == 3);
  CHECK(run(check("xo", "klein", {"a"})).exit_code == 3);
  CHECK(run(check("lo", "dihedral:3", {"a"})).exit_code == 3);
  auto zero = check("lo", "klein", {"a"});
  zero.depth = 0;
  auto r = run(zero);
  CHECK(r.exit_code == 3);
  CHECK(r.document["verdict"] == "error");
  CHECK(r.document.contains("error"));
  CommandSpec bogus;
  bogus.subcommand = "dance";
  CHECK(run(bogus).exit_code == 3);
}

TEST_CASE("verify reads documents from disk") {
  auto dir = std::filesystem::temp_directory_path() / "ordercert_test_certificate";
  std::filesystem::create_directories(dir);
  auto cmd = check("co", "klein", {"a", "b"});
  auto doc = run(cmd).document;
  auto good = dir / "good.json";
  std::ofstream(good) << doc.dump(2);
  CommandSpec v;
  v.subcommand = "verify";
  v.input = good.string();
  CHECK(run(v).exit_code == 0);

  auto bad = dir / "bad.json";
  std::ofstream(bad) << "{ not json";
  v.input = bad.string();
  auto r = run(v);
  CHECK(r.exit_code == 1);
  CHECK(r.document["verified"] == false);
  v.input = (dir / "missing.json").string();
  CHECK(run(v).exit_code == 3);
  CHECK(render_text(run(cmd).document).find("verdict: certified") != std::string::npos);
}
