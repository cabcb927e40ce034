#pragma once

// Replayable JSON certificates.
//
// Every document has the shape
//   { "schema_version": 1, "property": ..., "group": spec, "inputs": {...},
//     "verdict": ..., "evidence": {...}, "budgets": {...} }
// and is checked by verify_certificate using only group arithmetic,
// closures, the circular validator and cone membership. docs/certificate.schema.json
// describes the layout per property.
//
// Derivations are nested arrays:
//   ["x", i, eps]          leaf X[i]^eps
//   ["x", i, eps, "word"]  leaf conjugated by word (word X[i]^eps word^-1)
//   ["*", L, R]            product L R
//   ["c", A, B]            Conradian step A^-1 B A^2

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ordercert/circular.hpp"
#include "ordercert/closure.hpp"
#include "ordercert/cone.hpp"
#include "ordercert/homomorphism.hpp"
#include "ordercert/order_search.hpp"
#include "ordercert/products.hpp"

namespace ordercert {

using Json = nlohmann::ordered_json;

inline constexpr int certificate_schema_version = 1;

Json elements_to_json(std::span<Element const> xs);
std::vector<Element> elements_from_json(Json const& j, Group g);

/// Leaf signs are taken from `signs[index]`.
Json derivation_to_json(Derivation const& d, SignVector const& signs);
/// Rebuilds leaves as X[i]^eps. Throws ParseError on malformed trees, on an
/// index outside X, or when a leaf's eps disagrees with `signs`.
Derivation derivation_from_json(Json const& j, std::span<Element const> X, SignVector const& signs);

Json hom_to_json(Homomorphism const& phi);
Homomorphism hom_from_json(Json const& j);

Json cone_to_json(ConeHandle const& P);
ConeHandle cone_from_json(Json const& j);

/// Non-degenerate entries only, as [g1, g2, g3, value].
Json assignment_to_json(CircularAssignment const& c);
CircularAssignment assignment_from_json(Json const& j, Group g);

// Document builders. Verdict strings: certified, obstructed, inconclusive,
// impossible.

Json sign_search_document(std::span<Element const> X, SearchVerdict const& v, std::size_t budget);
Json bo_select_document(std::span<Element const> X, std::vector<SelectionStage> const& stages,
                        SignSelection const& s, std::size_t budget);

/// Pair mode: a unique product of XY, or none.
Json upp_pair_document(FiniteSubset const& X, FiniteSubset const& Y, std::span<Homomorphism const> chain,
                       std::optional<UniqueProduct> const& found);
Json upp_subset_document(FiniteSubset const& A, SubsetConditionReport const& r);

/// An extreme point of X, or none (then one blocker per member is recorded).
Json diffuse_document(FiniteSubset const& X, std::span<Homomorphism const> chain,
                      std::optional<Element> const& point);

Json preorder_document(Group g, int k, std::size_t node_budget, CircularSearchResult const& r);
Json extension_document(FiniteSubset const& X, Homomorphism const& phi, std::string const& semigroup,
                        CircularAssignment const& c);

enum class ConeCheckMode { axioms, bi, conradian };
std::string to_string(ConeCheckMode m);
ConeCheckMode parse_cone_check_mode(std::string const& text);
Json cone_check_document(ConeHandle const& P, int radius, ConeCheckMode mode, ConeCheckReport const& r);

/// `report` empty means the orbit exceeded `bound`.
Json orbit_document(ConeHandle const& P, std::vector<Element> const& conjugators, int bound, int search_radius,
                    std::optional<OrbitReport> const& report);

/// Smallest p in [1, n_max] with g^p P g^-p structurally equal to P.
std::optional<std::int64_t> conjugation_period(ConeHandle const& P, Element const& g, std::int64_t n_max);

/// certified: some n works and the good set is periodic or the closed form
/// says recurrent; obstructed: the closed form says not recurrent;
/// inconclusive otherwise.
Json recurrence_document(ConeHandle const& P, RecurrenceReport const& r, std::int64_t n_max);

/// Diagnostic document for exit code 3.
Json error_document(std::string const& property, std::string const& message);

struct VerifyReport {
  bool ok = false;
  std::string reason;  // why the document was rejected; empty when ok
};

/// Replays the evidence of a document. Never throws.
VerifyReport verify_certificate(Json const& doc);

}  // namespace ordercert
