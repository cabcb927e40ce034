#include "ordercert/certificate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "ordercert/errors.hpp"
#include "ordercert/text.hpp"

namespace ordercert {

namespace {

// Thrown inside the verifier only; verify_certificate turns it into a report.
class Rejection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] void reject(std::string const& why) { throw Rejection(why); }

void require(bool cond, std::string const& why) {
  if (!cond) reject(why);
}

Json base_document(std::string const& property, Group const& g) {
  Json d;
  d["schema_version"] = certificate_schema_version;
  d["property"] = property;
  d["group"] = g.spec();
  d["inputs"] = Json::object();
  d["verdict"] = "inconclusive";
  d["evidence"] = Json::object();
  d["budgets"] = Json::object();
  return d;
}

Json signs_to_json(SignVector const& s) { return Json(s); }

SignVector signs_from_json(Json const& j, std::span<Element const> X) {
  require(j.is_array() && j.size() == X.size(), "sign vector has the wrong length");
  SignVector s;
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number_integer(), "sign entries must be integers");
    int v = j[i].get<int>();
    require(v == 1 || v == -1, "sign entries must be +1 or -1");
    require(v == 1 || !X[i].is_identity(), "identity entries keep sign +1");
    s.push_back(v);
  }
  return s;
}

Group owner_of(std::span<Element const> X) {
  if (X.empty()) throw PreconditionFailed("certificate needs a nonempty element list");
  return X.front().group();
}

std::string verdict_text(Verdict v) { return to_string(v); }

std::int64_t get_int(Json const& j, char const* key) {
  require(j.contains(key) && j[key].is_number_integer(), std::string("missing integer field ") + key);
  return j[key].get<std::int64_t>();
}

std::size_t get_size(Json const& j, char const* key) {
  auto v = get_int(j, key);
  require(v >= 0, std::string("negative field ") + key);
  return static_cast<std::size_t>(v);
}

std::string get_string(Json const& j, char const* key) {
  require(j.contains(key) && j[key].is_string(), std::string("missing string field ") + key);
  return j[key].get<std::string>();
}

Json const& get_field(Json const& j, char const* key) {
  require(j.is_object() && j.contains(key), std::string("missing field ") + key);
  return j[key];
}

// Cone membership where the descriptor is defined; nullopt elsewhere.
std::optional<bool> member(ConeHandle const& P, Element const& g) {
  try {
    return P.contains(g);
  } catch (PreconditionFailed const&) {
    return std::nullopt;
  }
}

std::vector<Triple> nondegenerate_triples(std::vector<Element> const& B) {
  std::vector<Triple> out;
  for (auto const& a : B)
    for (auto const& b : B)
      for (auto const& c : B) {
        Triple t{a, b, c};
        if (!is_degenerate(t)) out.push_back(t);
      }
  return out;
}

std::vector<Element> dedup(std::vector<Element> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// Number of ways p = ab with a in A, b in B, for every product.
std::map<Element, std::size_t> product_counts(std::vector<Element> const& A, std::vector<Element> const& B) {
  std::map<Element, std::size_t> counts;
  for (auto const& a : A)
    for (auto const& b : B) ++counts[multiply(a, b)];
  return counts;
}

bool has_unique_product(std::vector<Element> const& A, std::vector<Element> const& B) {
  auto counts = product_counts(A, B);
  return std::any_of(counts.begin(), counts.end(), [](auto const& kv) { return kv.second == 1; });
}

// The nontrivial elements of a^-1 X ∩ X^-1 a.
std::vector<Element> extreme_blockers(std::vector<Element> const& X, Element const& a) {
  std::set<Element> left;
  for (auto const& x : X) left.insert(multiply(invert(a), x));
  std::vector<Element> out;
  for (auto const& x : X) {
    auto c = multiply(invert(x), a);
    if (!c.is_identity() && left.contains(c)) out.push_back(c);
  }
  return out;
}

// g^-n h g^n in P for every probe.
bool conjugates_positive(ConeHandle const& P, Element const& g, std::vector<Element> const& probes,
                         std::int64_t n) {
  auto gn = power(g, n);
  auto gn_inv = invert(gn);
  return std::all_of(probes.begin(), probes.end(),
                     [&](Element const& h) { return P.contains(multiply(multiply(gn_inv, h), gn)); });
}

}  // namespace

// ---------------------------------------------------------------- conversions

Json elements_to_json(std::span<Element const> xs) {
  Json out = Json::array();
  for (auto const& x : xs) out.push_back(render(x));
  return out;
}

std::vector<Element> elements_from_json(Json const& j, Group g) {
  if (!j.is_array()) throw ParseError("element list must be an array");
  std::vector<Element> out;
  for (auto const& e : j) {
    if (!e.is_string()) throw ParseError("elements must be strings");
    out.push_back(parse_element(e.get<std::string>(), g));
  }
  return out;
}

Json derivation_to_json(Derivation const& d, SignVector const& signs) {
  if (d.is_leaf()) {
    auto const& l = d.as_leaf();
    Json leaf = Json::array({"x", l.index, l.index < signs.size() ? signs[l.index] : 1});
    if (l.conjugator) leaf.push_back(render(*l.conjugator));
    return leaf;
  }
  auto [a, b] = d.children();
  return Json::array({d.is_conradian() ? "c" : "*", derivation_to_json(a, signs), derivation_to_json(b, signs)});
}

Derivation derivation_from_json(Json const& j, std::span<Element const> X, SignVector const& signs) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) throw ParseError("derivation node must be a tagged array");
  auto tag = j[0].get<std::string>();
  if (tag == "x") {
    if (j.size() != 3 && j.size() != 4) throw ParseError("leaf must be [\"x\", index, eps] or carry a conjugator");
    if (!j[1].is_number_unsigned() || !j[2].is_number_integer()) throw ParseError("leaf index and eps are integers");
    auto index = j[1].get<std::size_t>();
    auto eps = j[2].get<int>();
    if (index >= X.size()) throw ParseError("leaf index " + std::to_string(index) + " is outside the input list");
    if (eps != 1 && eps != -1) throw ParseError("leaf eps must be +1 or -1");
    if (index < signs.size() && eps != signs[index]) throw ParseError("leaf eps disagrees with the sign vector");
    auto base = eps == 1 ? X[index] : invert(X[index]);
    std::optional<Element> conj;
    if (j.size() == 4) {
      if (!j[3].is_string()) throw ParseError("leaf conjugator must be a word");
      conj = parse_element(j[3].get<std::string>(), X[index].group());
    }
    return Derivation::leaf(index, base, conj);
  }
  if (tag == "*" || tag == "c") {
    if (j.size() != 3) throw ParseError("inner node must have two children");
    auto a = derivation_from_json(j[1], X, signs);
    auto b = derivation_from_json(j[2], X, signs);
    return tag == "*" ? Derivation::product(a, b) : Derivation::conradian(a, b);
  }
  throw ParseError("unknown derivation tag " + tag);
}

Json hom_to_json(Homomorphism const& phi) {
  Json j;
  j["source"] = phi.source().spec();
  j["target"] = phi.target().spec();
  j["images"] = elements_to_json(phi.images());
  return j;
}

Homomorphism hom_from_json(Json const& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("images"))
    throw ParseError("map needs source, target and images");
  auto source = parse_group(j["source"].get<std::string>());
  auto target = parse_group(j["target"].get<std::string>());
  return Homomorphism(source, target, elements_from_json(j["images"], target));
}

Json cone_to_json(ConeHandle const& P) {
  return std::visit(
      [&](auto const& d) -> Json {
        using D = std::decay_t<decltype(d)>;
        Json j;
        if constexpr (std::is_same_v<D, cone_desc::Standard>) {
          j["kind"] = "standard";
          j["group"] = P.owner().spec();
        } else if constexpr (std::is_same_v<D, cone_desc::Q>) {
          j["kind"] = "q";
          j["shift"] = d.shift;
        } else if constexpr (std::is_same_v<D, cone_desc::Qi>) {
          j["kind"] = "qi";
          j["i"] = d.i;
          j["phase"] = d.phase;
        } else if constexpr (std::is_same_v<D, cone_desc::Lex>) {
          j["kind"] = "lex";
          j["map"] = hom_to_json(d.q);
          j["kernel"] = cone_to_json(*d.kernel);
          j["quotient"] = cone_to_json(*d.quotient);
        } else if constexpr (std::is_same_v<D, cone_desc::Finite>) {
          j["kind"] = "finite";
          j["group"] = P.owner().spec();
          j["radius"] = d.radius;
          j["members"] = elements_to_json(d.members);
        } else {
          j["kind"] = "conjugated";
          j["by"] = render(d.by);
          j["base"] = cone_to_json(*d.base);
        }
        return j;
      },
      P.descriptor());
}

ConeHandle cone_from_json(Json const& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ParseError("cone needs a kind");
  auto kind = j["kind"].get<std::string>();
  if (kind == "standard") return ConeHandle::standard(parse_group(j.at("group").get<std::string>()));
  if (kind == "q") return ConeHandle::q_cone(j.at("shift").get<std::int64_t>());
  if (kind == "qi") return ConeHandle::qi_cone(j.at("i").get<int>(), j.at("phase").get<std::int64_t>());
  if (kind == "lex")
    return ConeHandle::lex(hom_from_json(j.at("map")), cone_from_json(j.at("kernel")), cone_from_json(j.at("quotient")));
  if (kind == "finite") {
    auto g = parse_group(j.at("group").get<std::string>());
    return ConeHandle::finite(g, elements_from_json(j.at("members"), g), j.at("radius").get<int>());
  }
  if (kind == "conjugated") {
    auto base = cone_from_json(j.at("base"));
    return ConeHandle::conjugated(base, parse_element(j.at("by").get<std::string>(), base.owner()));
  }
  throw ParseError("unknown cone kind " + kind);
}

Json assignment_to_json(CircularAssignment const& c) {
  Json out = Json::array();
  for (auto const& [t, v] : c.values())
    if (!is_degenerate(t)) out.push_back(Json::array({render(t[0]), render(t[1]), render(t[2]), v}));
  return out;
}

CircularAssignment assignment_from_json(Json const& j, Group g) {
  if (!j.is_array()) throw ParseError("assignment must be an array");
  CircularAssignment c;
  for (auto const& row : j) {
    if (!row.is_array() || row.size() != 4 || !row[3].is_number_integer())
      throw ParseError("assignment rows are [g1, g2, g3, value]");
    auto t = make_triple(parse_element(row[0].get<std::string>(), g), parse_element(row[1].get<std::string>(), g),
                         parse_element(row[2].get<std::string>(), g));
    if (c.get(t)) throw ParseError("triple " + render(t) + " assigned twice");
    c.set(t, row[3].get<int>());
  }
  return c;
}

// ------------------------------------------------------------------ builders

Json sign_search_document(std::span<Element const> X, SearchVerdict const& v, std::size_t budget) {
  auto d = base_document(to_string(v.criterion), owner_of(X));
  d["inputs"]["elements"] = elements_to_json(X);
  d["inputs"]["depth"] = v.depth;
  d["inputs"]["radius"] = v.conjugator_radius;
  d["verdict"] = verdict_text(v.status);
  auto& ev = d["evidence"];
  ev["signs"] = v.signs ? signs_to_json(*v.signs) : Json(nullptr);
  ev["witnesses"] = Json::array();
  for (auto const& [s, w] : v.witnesses)
    ev["witnesses"].push_back({{"signs", signs_to_json(s)}, {"derivation", derivation_to_json(w, s)}});
  ev["exhausted"] = Json::array();
  for (auto const& s : v.exhausted) ev["exhausted"].push_back(signs_to_json(s));
  d["budgets"]["closure"] = budget;
  return d;
}

Json bo_select_document(std::span<Element const> X, std::vector<SelectionStage> const& stages,
                        SignSelection const& s, std::size_t budget) {
  auto d = sign_search_document(X, s.verdict, budget);
  d["inputs"]["stages"] = Json::array();
  for (auto const& st : stages)
    d["inputs"]["stages"].push_back({{"map", hom_to_json(st.phi)}, {"cone", cone_to_json(st.cone)}});
  d["evidence"]["signs"] = signs_to_json(s.signs);
  d["evidence"]["decided_by"] = s.decided_by;
  return d;
}

Json upp_pair_document(FiniteSubset const& X, FiniteSubset const& Y, std::span<Homomorphism const> chain,
                       std::optional<UniqueProduct> const& found) {
  auto d = base_document("upp", X.owner());
  d["inputs"]["X"] = elements_to_json(X.members());
  d["inputs"]["Y"] = elements_to_json(Y.members());
  d["inputs"]["chain"] = Json::array();
  for (auto const& q : chain) d["inputs"]["chain"].push_back(hom_to_json(q));
  if (found) {
    d["verdict"] = "certified";
    d["evidence"] = {{"product", render(found->product)}, {"a", render(found->a)}, {"b", render(found->b)}};
  } else {
    d["verdict"] = "obstructed";
  }
  return d;
}

Json upp_subset_document(FiniteSubset const& A, SubsetConditionReport const& r) {
  auto d = base_document("upp", A.owner());
  d["inputs"]["A"] = elements_to_json(A.members());
  d["verdict"] = r.holds ? "certified" : "obstructed";
  d["evidence"]["pairs_checked"] = r.pairs_checked;
  if (r.counterexample) {
    d["evidence"]["X"] = elements_to_json(r.counterexample->first.members());
    d["evidence"]["Y"] = elements_to_json(r.counterexample->second.members());
  }
  return d;
}

Json diffuse_document(FiniteSubset const& X, std::span<Homomorphism const> chain, std::optional<Element> const& point) {
  auto d = base_document("diffuse", X.owner());
  d["inputs"]["X"] = elements_to_json(X.members());
  d["inputs"]["chain"] = Json::array();
  for (auto const& q : chain) d["inputs"]["chain"].push_back(hom_to_json(q));
  if (point) {
    d["verdict"] = "certified";
    d["evidence"]["point"] = render(*point);
  } else {
    d["verdict"] = "obstructed";
    d["evidence"]["blockers"] = Json::array();
    for (auto const& a : X.members()) {
      auto b = extreme_blockers(X.members(), a);
      if (b.empty()) throw PreconditionFailed(render(a) + " is an extreme point");
      d["evidence"]["blockers"].push_back({{"a", render(a)}, {"c", render(b.front())}});
    }
  }
  return d;
}

Json preorder_document(Group g, int k, std::size_t node_budget, CircularSearchResult const& r) {
  auto d = base_document("circ", g);
  d["inputs"]["k"] = k;
  d["budgets"]["nodes"] = node_budget;
  d["evidence"]["nodes"] = r.nodes;
  if (r.status == CircularSearchResult::Status::found) {
    d["verdict"] = "certified";
    d["evidence"]["assignment"] = assignment_to_json(r.assignment);
  } else {
    d["verdict"] = "impossible";
  }
  return d;
}

Json extension_document(FiniteSubset const& X, Homomorphism const& phi, std::string const& semigroup,
                        CircularAssignment const& c) {
  auto d = base_document("circ", X.owner());
  d["inputs"]["elements"] = elements_to_json(X.members());
  d["inputs"]["map"] = hom_to_json(phi);
  d["inputs"]["semigroup"] = semigroup;
  d["verdict"] = "certified";
  d["evidence"]["assignment"] = assignment_to_json(c);
  return d;
}

std::string to_string(ConeCheckMode m) {
  switch (m) {
    case ConeCheckMode::axioms:
      return "axioms";
    case ConeCheckMode::bi:
      return "bi";
    case ConeCheckMode::conradian:
      return "conradian";
  }
  return "axioms";
}

ConeCheckMode parse_cone_check_mode(std::string const& text) {
  if (text == "axioms") return ConeCheckMode::axioms;
  if (text == "bi") return ConeCheckMode::bi;
  if (text == "conradian") return ConeCheckMode::conradian;
  throw ParseError("unknown cone check mode " + text);
}

Json cone_check_document(ConeHandle const& P, int radius, ConeCheckMode mode, ConeCheckReport const& r) {
  auto d = base_document("cone-axioms", P.owner());
  d["inputs"]["cone"] = cone_to_json(P);
  d["inputs"]["radius"] = radius;
  d["inputs"]["mode"] = to_string(mode);
  d["verdict"] = r.ok ? "certified" : "obstructed";
  if (!r.ok) {
    d["evidence"]["violation"] = r.violation;
    d["evidence"]["witness"] = elements_to_json(r.witness);
  }
  return d;
}

Json orbit_document(ConeHandle const& P, std::vector<Element> const& conjugators, int bound, int search_radius,
                    std::optional<OrbitReport> const& report) {
  auto d = base_document("orbit", P.owner());
  d["inputs"]["cone"] = cone_to_json(P);
  d["inputs"]["conjugators"] = elements_to_json(conjugators);
  d["inputs"]["bound"] = bound;
  d["inputs"]["search_radius"] = search_radius;
  if (!report) {
    d["verdict"] = "inconclusive";
    return d;
  }
  d["verdict"] = "certified";
  auto& ev = d["evidence"];
  ev["count"] = report->cones.size();
  ev["cones"] = Json::array();
  for (auto const& c : report->cones) ev["cones"].push_back(cone_to_json(c));
  ev["parents"] = Json::array();
  for (std::size_t j = 1; j < report->cones.size(); ++j) {
    Json parent = nullptr;
    for (std::size_t p = 0; p < j && parent.is_null(); ++p)
      for (std::size_t c = 0; c < conjugators.size(); ++c)
        if (conjugate_cone(report->cones[p], conjugators[c]) == report->cones[j]) {
          parent = Json::array({p, c});
          break;
        }
    if (parent.is_null()) throw PreconditionFailed("orbit cone " + std::to_string(j) + " has no recorded parent");
    ev["parents"].push_back(parent);
  }
  ev["witnesses"] = Json::array();
  for (auto const& w : report->witnesses)
    ev["witnesses"].push_back(
        {{"first", w.first}, {"second", w.second}, {"element", render(w.element)}, {"in_first", w.in_first}});
  return d;
}

std::optional<std::int64_t> conjugation_period(ConeHandle const& P, Element const& g, std::int64_t n_max) {
  auto gp = g;
  for (std::int64_t p = 1; p <= n_max; ++p, gp = multiply(gp, g))
    if (conjugate_cone(P, gp) == P) return p;
  return std::nullopt;
}

Json recurrence_document(ConeHandle const& P, RecurrenceReport const& r, std::int64_t n_max) {
  auto d = base_document("recur", P.owner());
  d["inputs"]["cone"] = cone_to_json(P);
  d["inputs"]["g"] = render(r.g);
  d["inputs"]["probes"] = elements_to_json(r.probes);
  d["inputs"]["n_max"] = n_max;
  auto& ev = d["evidence"];
  ev["found"] = r.found;
  if (r.closed_form)
    ev["closed_form"] = {{"recurrent", r.closed_form->recurrent}, {"threshold", r.closed_form->threshold}};
  else
    ev["closed_form"] = nullptr;
  auto period = conjugation_period(P, r.g, n_max);
  ev["period"] = period ? Json(*period) : Json(nullptr);

  if (r.closed_form && !r.closed_form->recurrent) d["verdict"] = "obstructed";
  else if (!r.found.empty() && (period || (r.closed_form && r.closed_form->recurrent))) d["verdict"] = "certified";
  else d["verdict"] = "inconclusive";
  return d;
}

Json error_document(std::string const& property, std::string const& message) {
  Json d;
  d["schema_version"] = certificate_schema_version;
  d["property"] = property;
  d["verdict"] = "error";
  d["error"] = message;
  return d;
}

// ------------------------------------------------------------------ verifier

namespace {

void verify_sign_document(Json const& doc, Group const& G, Criterion criterion) {
  auto const& in = get_field(doc, "inputs");
  auto const& ev = get_field(doc, "evidence");
  auto X = elements_from_json(get_field(in, "elements"), G);
  require(!X.empty(), "empty element list");
  auto depth = static_cast<int>(get_int(in, "depth"));
  auto radius = static_cast<int>(get_int(in, "radius"));
  require(depth >= 1 && radius >= 0, "depth must be positive and radius non-negative");
  require(criterion == Criterion::bo || radius == 0, "only bo uses a conjugator radius");
  auto budget = get_size(get_field(doc, "budgets"), "closure");
  auto kind = closure_kind(criterion, radius);
  auto verdict = get_string(doc, "verdict");

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < X.size(); ++i)
    if (!X[i].is_identity()) kept.push_back(i);
  require(kept.size() <= 20, "too many elements for a sign search");

  std::optional<Ball> conjugators;
  if (criterion == Criterion::bo) conjugators = ball(G, radius);

  // Every listed witness must derive id from the signed list.
  std::set<SignVector> witnessed;
  for (auto const& w : get_field(ev, "witnesses")) {
    auto s = signs_from_json(get_field(w, "signs"), X);
    require(witnessed.insert(s).second, "sign vector witnessed twice");
    auto d = derivation_from_json(get_field(w, "derivation"), X, s);
    require(d.size() <= static_cast<std::size_t>(depth), "witness deeper than the stated depth");
    require(leaves_permitted(d, apply_signs(X, s), kind), "witness uses a leaf the criterion does not permit");
    std::vector<Derivation> stack{d};
    while (!stack.empty()) {
      auto n = stack.back();
      stack.pop_back();
      if (n.is_leaf()) {
        if (auto const& c = n.as_leaf().conjugator) require(conjugators && conjugators->contains(*c),
                                                            "conjugator outside the stated radius");
      } else {
        auto [a, b] = n.children();
        stack.push_back(a);
        stack.push_back(b);
      }
    }
    require(replay(d).is_identity(), "witness does not multiply to the identity");
  }

  auto signed_kept = [&](SignVector const& s) {
    std::vector<Element> out;
    for (auto i : kept) out.push_back(s[i] == 1 ? X[i] : invert(X[i]));
    return out;
  };

  std::set<SignVector> exhausted;
  for (auto const& e : get_field(ev, "exhausted")) {
    auto s = signs_from_json(e, X);
    require(!witnessed.contains(s) && exhausted.insert(s).second, "exhausted vector listed twice");
    auto r = close_until_identity(signed_kept(s), kind, depth, budget);
    require(!r.identity_witness && r.exhausted_budget, "listed vector does not exhaust the closure budget");
  }

  bool staged = in.contains("stages");
  std::optional<SignVector> signs;
  if (!ev["signs"].is_null()) signs = signs_from_json(ev["signs"], X);

  if (staged) {
    require(criterion == Criterion::bo, "sign selection stages need property bo");
    require(signs.has_value(), "selection documents carry the chosen signs");
    std::vector<SelectionStage> stages;
    for (auto const& st : in["stages"]) {
      auto phi = hom_from_json(get_field(st, "map"));
      auto cone = cone_from_json(get_field(st, "cone"));
      require(phi.source() == G && cone.owner() == phi.target(), "stage does not fit the group");
      stages.push_back({phi, cone});
    }
    auto const& decided = get_field(ev, "decided_by");
    require(decided.is_array() && decided.size() == X.size(), "decided_by has the wrong length");
    for (std::size_t i = 0; i < X.size(); ++i) {
      auto k = decided[i].get<int>();
      require(k >= -1 && k < static_cast<int>(stages.size()), "decided_by names an unknown stage");
      if (k < 0) continue;
      for (int j = 0; j < k; ++j) require(stages[j].phi(X[i]).is_identity(), "an earlier stage already sees x_i");
      auto image = stages[k].phi((*signs)[i] == 1 ? X[i] : invert(X[i]));
      require(!image.is_identity() && stages[k].cone.contains(image), "selected sign does not make the image positive");
    }
    require(verdict == "certified" || verdict == "inconclusive", "selection verdicts are certified or inconclusive");
    if (verdict == "inconclusive")
      require(witnessed.contains(*signs) || exhausted.contains(*signs), "inconclusive selection without evidence");
  }

  auto total = std::size_t{1} << kept.size();
  if (verdict == "certified") {
    require(signs.has_value(), "certified verdict without signs");
    require(!witnessed.contains(*signs) && !exhausted.contains(*signs), "certified vector is also refuted");
    if (!kept.empty()) {
      auto r = close_until_identity(signed_kept(*signs), kind, depth, budget);
      require(!r.identity_witness, "the certified signs derive the identity");
      require(!r.exhausted_budget, "the certified closure exhausts its budget");
    }
  } else if (verdict == "obstructed") {
    require(!staged, "selection documents cannot be obstructed");
    require(exhausted.empty() && witnessed.size() == total, "obstruction must refute every sign vector");
  } else if (verdict == "inconclusive") {
    if (!staged) require(!exhausted.empty() && witnessed.size() + exhausted.size() == total,
                         "inconclusive search must account for every sign vector");
  } else {
    reject("unknown verdict " + verdict);
  }
}

void verify_upp(Json const& doc, Group const& G) {
  auto const& in = get_field(doc, "inputs");
  auto const& ev = get_field(doc, "evidence");
  auto verdict = get_string(doc, "verdict");
  if (in.contains("A")) {
    auto A = dedup(elements_from_json(in["A"], G));
    require(std::binary_search(A.begin(), A.end(), G.identity()), "A must contain the identity");
    require(A.size() <= 12, "A is too large");
    std::vector<Element> rest;
    for (auto const& a : A)
      if (!a.is_identity()) rest.push_back(a);
    auto subset = [&](std::size_t mask) {
      std::vector<Element> s{G.identity()};
      for (std::size_t i = 0; i < rest.size(); ++i)
        if (mask >> i & 1) s.push_back(rest[i]);
      return s;
    };
    if (verdict == "certified") {
      for (std::size_t mx = 0; mx < (std::size_t{1} << rest.size()); ++mx)
        for (std::size_t my = 0; my < (std::size_t{1} << rest.size()); ++my) {
          auto X = subset(mx);
          auto Y = subset(my);
          if (X.size() + Y.size() > A.size()) continue;
          require(has_unique_product(X, Y), "a qualifying pair has no unique product");
        }
      return;
    }
    require(verdict == "obstructed", "unknown verdict " + verdict);
    auto X = dedup(elements_from_json(get_field(ev, "X"), G));
    auto Y = dedup(elements_from_json(get_field(ev, "Y"), G));
    for (auto const* S : {&X, &Y}) {
      require(std::binary_search(S->begin(), S->end(), G.identity()), "counterexample sets must contain id");
      for (auto const& s : *S) require(std::binary_search(A.begin(), A.end(), s), "counterexample leaves A");
    }
    require(X.size() + Y.size() <= A.size(), "counterexample is too large to qualify");
    require(!has_unique_product(X, Y), "counterexample has a unique product");
    return;
  }
  auto X = dedup(elements_from_json(get_field(in, "X"), G));
  auto Y = dedup(elements_from_json(get_field(in, "Y"), G));
  require(!X.empty() && !Y.empty(), "X and Y must be nonempty");
  if (verdict == "obstructed") {
    require(!has_unique_product(X, Y), "XY has a unique product");
    return;
  }
  require(verdict == "certified", "unknown verdict " + verdict);
  auto a = parse_element(get_string(ev, "a"), G);
  auto b = parse_element(get_string(ev, "b"), G);
  auto p = parse_element(get_string(ev, "product"), G);
  require(std::binary_search(X.begin(), X.end(), a) && std::binary_search(Y.begin(), Y.end(), b),
          "factors are not in X and Y");
  require(multiply(a, b) == p, "product does not match its factors");
  require(product_counts(X, Y)[p] == 1, "product has more than one factorization");
}

void verify_diffuse(Json const& doc, Group const& G) {
  auto X = dedup(elements_from_json(get_field(get_field(doc, "inputs"), "X"), G));
  require(!X.empty(), "X must be nonempty");
  auto const& ev = get_field(doc, "evidence");
  auto verdict = get_string(doc, "verdict");
  if (verdict == "certified") {
    auto a = parse_element(get_string(ev, "point"), G);
    require(std::binary_search(X.begin(), X.end(), a), "point is not in X");
    require(extreme_blockers(X, a).empty(), "point is not extreme");
    return;
  }
  require(verdict == "obstructed", "unknown verdict " + verdict);
  std::set<Element> blocked;
  for (auto const& row : get_field(ev, "blockers")) {
    auto a = parse_element(get_string(row, "a"), G);
    auto c = parse_element(get_string(row, "c"), G);
    require(!c.is_identity(), "blocker must be nontrivial");
    require(std::binary_search(X.begin(), X.end(), multiply(a, c)), "blocker is not in a^-1 X");
    require(std::binary_search(X.begin(), X.end(), multiply(a, invert(c))), "blocker is not in X^-1 a");
    blocked.insert(a);
  }
  require(blocked.size() == X.size() && std::equal(blocked.begin(), blocked.end(), X.begin()),
          "blockers must cover every member");
}

void verify_circ(Json const& doc, Group const& G) {
  auto const& in = get_field(doc, "inputs");
  auto const& ev = get_field(doc, "evidence");
  auto verdict = get_string(doc, "verdict");
  std::vector<Element> universe;
  if (in.contains("k")) {
    auto k = static_cast<int>(get_int(in, "k"));
    require(k >= 1, "k must be positive");
    universe = ball(G, k).members;
    if (verdict == "impossible") {
      auto nodes = get_size(get_field(doc, "budgets"), "nodes");
      auto r = preorder_search(G, k, nodes);
      require(r.status == CircularSearchResult::Status::impossible, "a length-k pre-order exists");
      return;
    }
  } else {
    universe = dedup(elements_from_json(get_field(in, "elements"), G));
    auto phi = hom_from_json(get_field(in, "map"));
    require(phi.source() == G, "map does not start at the group");
  }
  require(verdict == "certified", "unknown verdict " + verdict);
  auto c = assignment_from_json(get_field(ev, "assignment"), G);
  auto expected = nondegenerate_triples(universe);
  require(c.size() == expected.size(), "assignment does not cover the domain");
  for (auto const& t : expected) {
    auto v = c.get(t);
    require(v && (*v == 1 || *v == -1), "missing or zero value on " + render(t));
  }
  auto check = validate_circular_assignment(c, universe);
  require(check.ok, "assignment fails the validator: " + check.violation);
}

void verify_cone_check(Json const& doc) {
  auto const& in = get_field(doc, "inputs");
  auto P = cone_from_json(get_field(in, "cone"));
  auto radius = static_cast<int>(get_int(in, "radius"));
  require(radius >= 0, "radius must be non-negative");
  auto mode = parse_cone_check_mode(get_string(in, "mode"));
  auto verdict = get_string(doc, "verdict");
  if (verdict == "certified") {
    auto r = mode == ConeCheckMode::axioms ? cone_axioms_check(P, radius)
                                           : cone_invariance_check(P, radius, mode == ConeCheckMode::bi
                                                                                  ? InvarianceMode::bi
                                                                                  : InvarianceMode::conradian);
    require(r.ok, "cone check fails: " + r.violation);
    return;
  }
  require(verdict == "obstructed", "unknown verdict " + verdict);
  auto w = elements_from_json(get_field(get_field(doc, "evidence"), "witness"), P.owner());
  auto in_P = [&](Element const& g) {
    auto m = member(P, g);
    require(m.has_value(), "witness outside the cone's domain");
    return *m;
  };
  if (mode == ConeCheckMode::axioms && w.size() == 1) {
    auto const& g = w[0];
    bool fails = g.is_identity() ? in_P(g) : in_P(g) == in_P(invert(g));
    require(fails, "witness satisfies trichotomy");
  } else if (mode == ConeCheckMode::axioms && w.size() == 2) {
    require(in_P(w[0]) && in_P(w[1]) && !in_P(multiply(w[0], w[1])), "witness is closed under products");
  } else if (mode == ConeCheckMode::bi && w.size() == 2) {
    require(in_P(w[0]) && !in_P(multiply(multiply(invert(w[1]), w[0]), w[1])), "witness conjugates into P");
  } else if (mode == ConeCheckMode::conradian && w.size() == 2) {
    auto const& g = w[0];
    auto const& h = w[1];
    require(in_P(g) && in_P(h) && !in_P(multiply(multiply(invert(h), g), multiply(h, h))),
            "witness satisfies the Conradian condition");
  } else {
    reject("witness has the wrong shape");
  }
}

void verify_orbit(Json const& doc) {
  auto const& in = get_field(doc, "inputs");
  auto P = cone_from_json(get_field(in, "cone"));
  auto G = P.owner();
  auto conj = elements_from_json(get_field(in, "conjugators"), G);
  auto bound = static_cast<int>(get_int(in, "bound"));
  auto search_radius = static_cast<int>(get_int(in, "search_radius"));
  auto verdict = get_string(doc, "verdict");
  if (verdict == "inconclusive") {
    bool exceeded = false;
    try {
      cone_orbit(P, conj, bound, search_radius);
    } catch (BudgetExceeded const&) {
      exceeded = true;
    }
    require(exceeded, "orbit fits within the bound");
    return;
  }
  require(verdict == "certified", "unknown verdict " + verdict);
  auto const& ev = get_field(doc, "evidence");
  std::vector<ConeHandle> cones;
  for (auto const& c : get_field(ev, "cones")) cones.push_back(cone_from_json(c));
  require(!cones.empty() && cones.front() == P, "orbit must start at the input cone");
  require(get_size(ev, "count") == cones.size(), "count disagrees with the cone list");
  require(cones.size() <= static_cast<std::size_t>(bound), "orbit exceeds its bound");

  auto const& parents = get_field(ev, "parents");
  require(parents.size() + 1 == cones.size(), "one parent per cone after the first");
  for (std::size_t j = 1; j < cones.size(); ++j) {
    auto p = parents[j - 1].at(0).get<std::size_t>();
    auto c = parents[j - 1].at(1).get<std::size_t>();
    require(p < j && c < conj.size(), "parent index out of range");
    require(conjugate_cone(cones[p], conj[c]) == cones[j], "cone is not the stated conjugate");
  }

  std::set<std::pair<std::size_t, std::size_t>> separated;
  for (auto const& w : get_field(ev, "witnesses")) {
    auto i = get_size(w, "first");
    auto j = get_size(w, "second");
    require(i < j && j < cones.size(), "witness indices out of range");
    auto g = parse_element(get_string(w, "element"), G);
    auto a = member(cones[i], g);
    auto b = member(cones[j], g);
    require(a && b && *a != *b, "witness does not separate its cones");
    require(*a == get_field(w, "in_first").get<bool>(), "witness side is misreported");
    separated.insert({i, j});
  }
  require(separated.size() == cones.size() * (cones.size() - 1) / 2, "some pair of cones is not separated");

  // Closure: every conjugate is a listed cone, structurally or on the pool.
  std::set<Element> pool;
  for (auto const& b : ball(G, search_radius).members) {
    pool.insert(b);
    for (auto const& c : conj)
      for (int k = 1; k <= bound; ++k) {
        pool.insert(conjugate(power(c, k), b));
        pool.insert(conjugate(power(c, -k), b));
      }
  }
  auto agree = [&](ConeHandle const& a, ConeHandle const& b) {
    return std::all_of(pool.begin(), pool.end(), [&](Element const& g) {
      auto x = member(a, g);
      auto y = member(b, g);
      return !x || !y || *x == *y;
    });
  };
  for (auto const& k : cones)
    for (auto const& c : conj) {
      auto image = conjugate_cone(k, c);
      bool listed = std::any_of(cones.begin(), cones.end(), [&](ConeHandle const& m) { return m == image; }) ||
                    std::any_of(cones.begin(), cones.end(), [&](ConeHandle const& m) { return agree(m, image); });
      require(listed, "the orbit is not closed under conjugation");
    }
}

void verify_recurrence(Json const& doc) {
  auto const& in = get_field(doc, "inputs");
  auto const& ev = get_field(doc, "evidence");
  auto P = cone_from_json(get_field(in, "cone"));
  auto G = P.owner();
  auto g = parse_element(get_string(in, "g"), G);
  auto probes = elements_from_json(get_field(in, "probes"), G);
  auto n_max = get_int(in, "n_max");
  require(n_max >= 1 && n_max <= 100000, "n_max out of range");
  for (auto const& h : probes) require(P.contains(h), "probe is not positive");

  std::vector<std::int64_t> found;
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (conjugates_positive(P, g, probes, n)) found.push_back(n);
  require(get_field(ev, "found").get<std::vector<std::int64_t>>() == found, "found list does not replay");

  auto closed = closed_form_recurrence(P, g, probes);
  auto const& cf = get_field(ev, "closed_form");
  require(cf.is_null() == !closed.has_value(), "closed form presence does not replay");
  if (closed)
    require(cf.at("recurrent").get<bool>() == closed->recurrent && cf.at("threshold").get<std::int64_t>() == closed->threshold,
            "closed form does not replay");

  std::optional<std::int64_t> period;
  if (!get_field(ev, "period").is_null()) {
    period = get_int(ev, "period");
    require(*period >= 1 && conjugate_cone(P, power(g, *period)) == P, "stated period does not fix the cone");
  }

  auto verdict = get_string(doc, "verdict");
  if (verdict == "obstructed") {
    require(closed && !closed->recurrent, "obstruction needs a non-recurrent closed form");
  } else if (verdict == "certified") {
    require(!found.empty(), "certified recurrence needs some n");
    require(period || (closed && closed->recurrent), "certified recurrence needs a period or a closed form");
    require(!closed || closed->recurrent, "closed form says not recurrent");
  } else {
    require(verdict == "inconclusive", "unknown verdict " + verdict);
  }
}

}  // namespace

VerifyReport verify_certificate(Json const& doc) {
  try {
    require(doc.is_object(), "certificate must be a JSON object");
    require(get_int(doc, "schema_version") == certificate_schema_version, "unsupported schema version");
    auto property = get_string(doc, "property");
    if (property == "cone-axioms") verify_cone_check(doc);
    else if (property == "orbit") verify_orbit(doc);
    else if (property == "recur") verify_recurrence(doc);
    else {
      auto G = parse_group(get_string(doc, "group"));
      if (property == "lo" || property == "co" || property == "bo") verify_sign_document(doc, G, parse_criterion(property));
      else if (property == "upp") verify_upp(doc, G);
      else if (property == "diffuse") verify_diffuse(doc, G);
      else if (property == "circ") verify_circ(doc, G);
      else reject("unknown property " + property);
    }
    return {true, {}};
  } catch (Rejection const& e) {
    return {false, e.what()};
  } catch (Error const& e) {
    return {false, e.what()};
  } catch (nlohmann::json::exception const& e) {
    return {false, std::string("malformed document: ") + e.what()};
  }
}

}  // namespace ordercert
