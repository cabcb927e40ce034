#include "ordercert/cli.hpp"

#include <fstream>
#include <sstream>

#include "ordercert/errors.hpp"
#include "ordercert/text.hpp"

namespace ordercert {

namespace {

// Bad flags or flag combinations; mapped to exit code 3 like library errors.
class UsageError : public Error {
 public:
  using Error::Error;
};

Group require_group(CommandSpec const& cmd) {
  if (cmd.group.empty()) throw UsageError("--group is required");
  return parse_group(cmd.group);
}

std::vector<Element> parse_list(std::vector<std::string> const& texts, Group g) {
  std::vector<Element> out;
  for (auto const& t : texts) out.push_back(parse_element(t, g));
  return out;
}

std::vector<Element> require_elements(CommandSpec const& cmd, Group g) {
  if (cmd.elements.empty()) throw UsageError("--elements is required");
  return parse_list(cmd.elements, g);
}

Homomorphism parse_map(std::string const& text, Group g) {
  if (text == "identity") return Homomorphism::identity(g);
  if (text == "natural") {
    switch (g.kind()) {
      case GroupKind::klein_bottle:
        return Homomorphism::klein_b_exponent();
      case GroupKind::heisenberg:
      case GroupKind::free:
        return Homomorphism::abelianization(g);
      case GroupKind::laurent_semidirect:
        return Homomorphism::z_exponent();
      case GroupKind::free_abelian:
        return Homomorphism::identity(g);
      default:
        throw UsageError("no natural quotient map on " + g.spec());
    }
  }
  if (text.starts_with("mod:")) {
    if (!(g == Group::free_abelian(1))) throw UsageError("mod:N maps start at abelian:1");
    return Homomorphism::reduction_mod(std::stoi(text.substr(4)));
  }
  if (text.starts_with("coord:")) return Homomorphism::coordinate(g, std::stoul(text.substr(6)));
  throw UsageError("unknown map " + text + " (natural, identity, mod:N, coord:I)");
}

SemigroupOracle parse_semigroup(std::string const& text, Group g) {
  if (text.empty() || text == "empty") return SemigroupOracle::empty();
  if (text == "standard") return SemigroupOracle::from_cone(ConeHandle::standard(g));
  if (text.starts_with("multiples:")) {
    if (!(g == Group::free_abelian(1))) throw UsageError("multiples:N lives in abelian:1");
    auto n = std::stoll(text.substr(10));
    if (n < 1) throw UsageError("multiples:N needs N >= 1");
    return SemigroupOracle::from_predicate(text, [n](Element const& e) {
      auto v = e.normal_form()[0];
      return v > 0 && v % n == 0;
    });
  }
  throw UsageError("unknown semigroup " + text + " (empty, multiples:N, standard)");
}

ConeHandle parse_cone(CommandSpec const& cmd, Group& g) {
  if (cmd.cone.empty()) throw UsageError("--cone is required");
  if (cmd.cone == "standard") {
    g = require_group(cmd);
    return ConeHandle::standard(g);
  }
  auto laurent = Group::laurent_semidirect();
  if (!cmd.group.empty() && !(parse_group(cmd.group) == laurent))
    throw UsageError("cone " + cmd.cone + " lives on laurent-z");
  g = laurent;
  if (cmd.cone == "p") return ConeHandle::p_cone();
  if (cmd.cone == "pi") return ConeHandle::pi_cone(cmd.i, cmd.phase);
  if (cmd.cone == "q") return ConeHandle::q_cone(cmd.phase);
  if (cmd.cone == "qi") return ConeHandle::qi_cone(cmd.i, cmd.phase);
  throw UsageError("unknown cone " + cmd.cone + " (standard, p, pi, q, qi)");
}

std::vector<Homomorphism> chain_of(CommandSpec const& cmd, Group g) {
  if (cmd.map.empty()) return {};
  return {parse_map(cmd.map, g)};
}

Json check_sign(CommandSpec const& cmd, Criterion criterion, std::size_t budget) {
  auto G = require_group(cmd);
  auto X = require_elements(cmd, G);
  if (criterion == Criterion::bo && !cmd.map.empty()) {
    auto phi = parse_map(cmd.map, G);
    std::vector<SelectionStage> stages{{phi, ConeHandle::standard(phi.target())}};
    auto sel = bo_sign_select(X, stages, cmd.depth, cmd.radius.value_or(1), budget, cmd.exec);
    return bo_select_document(X, stages, sel, budget);
  }
  int radius = criterion == Criterion::bo ? cmd.radius.value_or(1) : 0;
  auto v = sign_search(X, criterion, cmd.depth, radius, budget, cmd.exec);
  return sign_search_document(X, v, budget);
}

Json check_upp(CommandSpec const& cmd) {
  auto G = require_group(cmd);
  FiniteSubset X(G, require_elements(cmd, G));
  if (cmd.with.empty()) return upp_subset_document(X, upp_subset_condition(X, cmd.exec));
  FiniteSubset Y(G, parse_list(cmd.with, G));
  auto chain = chain_of(cmd, G);
  std::optional<UniqueProduct> found = brute_force_unique_product(X, Y);
  if (found && !chain.empty()) found = find_unique_product(X, Y, chain);
  return upp_pair_document(X, Y, chain, found);
}

Json check_diffuse(CommandSpec const& cmd) {
  auto G = require_group(cmd);
  FiniteSubset X(G, require_elements(cmd, G));
  auto chain = chain_of(cmd, G);
  auto points = extreme_points(X, cmd.exec);
  std::optional<Element> point;
  if (!points.empty()) {
    point = points.front();
    if (!chain.empty() && X.contains(G.identity())) point = diffuse_lift_chain(X, chain);
  }
  return diffuse_document(X, chain, point);
}

Json check_circ(CommandSpec const& cmd) {
  auto G = require_group(cmd);
  if (cmd.map.empty()) {
    if (cmd.k < 1) throw UsageError("--k must be positive");
    auto nodes = cmd.budget.value_or(default_search_nodes);
    return preorder_document(G, cmd.k, nodes, preorder_search(G, cmd.k, nodes));
  }
  FiniteSubset X(G, require_elements(cmd, G));
  auto phi = parse_map(cmd.map, G);
  auto target = phi.target();
  CircularAssignment d;
  if (target.kind() == GroupKind::finite_cyclic) {
    d = circle_order(target);
  } else {
    std::vector<Element> images;
    for (auto const& x : X.members()) images.push_back(phi(x));
    std::vector<Triple> domain;
    for (auto const& a : images)
      for (auto const& b : images)
        for (auto const& c : images) domain.push_back(make_triple(a, b, c));
    d = cone_to_circular(ConeHandle::standard(target), domain);
  }
  auto S = parse_semigroup(cmd.semigroup, G);
  auto c = extension_circular_order(X, phi, d, S);
  return extension_document(X, phi, cmd.semigroup.empty() ? "empty" : cmd.semigroup, c);
}

Json check_cone(CommandSpec const& cmd) {
  Group g = Group::free_abelian(1);
  auto P = parse_cone(cmd, g);
  auto radius = cmd.radius.value_or(2);
  auto mode = parse_cone_check_mode(cmd.mode);
  auto r = mode == ConeCheckMode::axioms
               ? cone_axioms_check(P, radius, cmd.exec)
               : cone_invariance_check(P, radius, mode == ConeCheckMode::bi ? InvarianceMode::bi : InvarianceMode::conradian,
                                       cmd.exec);
  return cone_check_document(P, radius, mode, r);
}

Json run_orbit(CommandSpec const& cmd) {
  Group g = Group::free_abelian(1);
  auto P = parse_cone(cmd, g);
  std::vector<Element> conj;
  if (cmd.elements.empty() && g == Group::laurent_semidirect()) conj = {parse_element("z", g)};
  else conj = require_elements(cmd, g);
  if (cmd.bound < 1) throw UsageError("--bound must be positive");
  auto radius = cmd.radius.value_or(2);
  try {
    return orbit_document(P, conj, cmd.bound, radius, cone_orbit(P, conj, cmd.bound, radius));
  } catch (BudgetExceeded const&) {
    return orbit_document(P, conj, cmd.bound, radius, std::nullopt);
  }
}

Json run_recur(CommandSpec const& cmd) {
  Group g = Group::free_abelian(1);
  auto P = parse_cone(cmd, g);
  bool laurent = g == Group::laurent_semidirect();
  if (cmd.by.empty() && !laurent) throw UsageError("--by is required");
  auto by = parse_element(cmd.by.empty() ? "z" : cmd.by, g);
  auto probes = cmd.elements.empty() && laurent ? std::vector{parse_element("poly:1*t^0;z:0", g)}
                                                : require_elements(cmd, g);
  if (cmd.n_max < 1) throw UsageError("--n-max must be positive");
  return recurrence_document(P, recurrence_check(P, by, probes, cmd.n_max), cmd.n_max);
}

RunResult run_verify(CommandSpec const& cmd) {
  RunResult out;
  if (cmd.input.empty()) throw UsageError("verify needs a document path");
  std::ifstream in(cmd.input);
  if (!in) throw UsageError("cannot read " + cmd.input);
  Json doc;
  VerifyReport report;
  try {
    doc = Json::parse(in);
    report = verify_certificate(doc);
  } catch (nlohmann::json::exception const& e) {
    report = {false, std::string("not JSON: ") + e.what()};
  }
  out.document = {{"verified", report.ok}};
  if (doc.is_object()) {
    out.document["property"] = doc.value("property", "");
    out.document["verdict"] = doc.value("verdict", "");
  }
  if (!report.ok) out.document["reason"] = report.reason;
  out.exit_code = report.ok ? 0 : 1;
  return out;
}

void check_budgets(CommandSpec const& cmd) {
  if (cmd.depth < 1) throw UsageError("--depth must be positive");
  if (cmd.radius && *cmd.radius < 0) throw UsageError("--radius must be non-negative");
  if (cmd.budget && *cmd.budget == 0) throw UsageError("--budget must be positive");
  if (cmd.format != "json" && cmd.format != "text") throw UsageError("--format is json or text");
}

}  // namespace

int exit_code_for(std::string const& verdict) {
  if (verdict == "certified") return 0;
  if (verdict == "obstructed" || verdict == "impossible") return 1;
  if (verdict == "inconclusive") return 2;
  return 3;
}

RunResult run(CommandSpec const& cmd) {
  auto label = cmd.subcommand == "check" ? cmd.property : cmd.subcommand;
  try {
    check_budgets(cmd);
    if (cmd.subcommand == "verify") return run_verify(cmd);
    auto budget = cmd.budget.value_or(default_closure_budget);
    Json doc;
    if (cmd.subcommand == "check") {
      auto const& p = cmd.property;
      if (p == "lo" || p == "co" || p == "bo") doc = check_sign(cmd, parse_criterion(p), budget);
      else if (p == "upp") doc = check_upp(cmd);
      else if (p == "diffuse") doc = check_diffuse(cmd);
      else if (p == "circ") doc = check_circ(cmd);
      else if (p == "cone-axioms") doc = check_cone(cmd);
      else throw UsageError("unknown property '" + p + "'");
    } else if (cmd.subcommand == "orbit") {
      doc = run_orbit(cmd);
    } else if (cmd.subcommand == "recur") {
      doc = run_recur(cmd);
    } else {
      throw UsageError("unknown subcommand '" + cmd.subcommand + "'");
    }
    return {doc, exit_code_for(doc["verdict"].get<std::string>())};
  } catch (Error const& e) {
    return {error_document(label, e.what()), 3};
  } catch (std::invalid_argument const& e) {
    return {error_document(label, std::string("bad number: ") + e.what()), 3};
  } catch (std::out_of_range const& e) {
    return {error_document(label, std::string("number out of range: ") + e.what()), 3};
  }
}

std::string render_text(Json const& doc) {
  std::ostringstream out;
  if (doc.contains("verified")) {
    out << "verified: " << (doc["verified"].get<bool>() ? "yes" : "no") << '\n';
    if (doc.contains("reason")) out << "reason: " << doc["reason"].get<std::string>() << '\n';
    return out.str();
  }
  out << "property: " << doc.value("property", "") << '\n';
  if (doc.contains("group")) out << "group: " << doc["group"].get<std::string>() << '\n';
  out << "verdict: " << doc.value("verdict", "") << '\n';
  if (doc.contains("error")) out << "error: " << doc["error"].get<std::string>() << '\n';
  if (!doc.contains("evidence")) return out.str();
  auto const& ev = doc["evidence"];
  if (ev.contains("signs") && !ev["signs"].is_null()) out << "signs: " << ev["signs"].dump() << '\n';
  if (ev.contains("witnesses") && doc.value("property", "") != "orbit")
    out << "witnesses: " << ev["witnesses"].size() << '\n';
  if (ev.contains("count")) out << "cones: " << ev["count"].get<std::size_t>() << '\n';
  if (ev.contains("found")) out << "found: " << ev["found"].dump() << '\n';
  if (ev.contains("assignment")) out << "assigned triples: " << ev["assignment"].size() << '\n';
  if (ev.contains("product")) out << "unique product: " << ev["product"].get<std::string>() << '\n';
  if (ev.contains("point")) out << "extreme point: " << ev["point"].get<std::string>() << '\n';
  if (ev.contains("violation")) out << "violation: " << ev["violation"].get<std::string>() << '\n';
  return out.str();
}

}  // namespace ordercert
