#pragma once

// Command dispatch behind the ordercert executable.
//
//   check  --property {lo,co,bo,upp,diffuse,circ,cone-axioms}
//   orbit  --cone ... --bound N
//   recur  --cone ... --by g --elements probes --n-max N
//   verify FILE
//
// Exit codes depend on the verdict only: 0 certified, 1 obstructed or
// impossible, 2 inconclusive, 3 usage error. verify exits 0 when the
// document replays and 1 otherwise.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordercert/certificate.hpp"
#include "ordercert/exec.hpp"

namespace ordercert {

struct CommandSpec {
  std::string subcommand;  // check, orbit, recur, verify
  std::string property;    // check only
  std::string group;
  std::vector<std::string> elements;
  std::vector<std::string> with;  // upp: the second set; absent means the subset condition on elements
  std::string map;                // natural, identity, mod:N, coord:I
  std::string semigroup;          // circ extension: empty, multiples:N, standard
  std::string cone;               // standard, p, pi, q, qi
  int i = 1;
  std::int64_t phase = 0;  // Q_i phase, or the shift of q
  std::string mode = "axioms";
  std::string by;  // recur: the element g
  int depth = 4;
  std::optional<int> radius;  // bo: 1, orbit: 2, cone-axioms: 2
  int k = 2;
  std::int64_t n_max = 20;
  int bound = 64;
  std::optional<std::size_t> budget;  // closure elements, or search nodes for circ
  std::string format = "json";
  std::string input;  // verify: path to the document
  Exec exec = Exec::parallel;
};

struct RunResult {
  Json document;
  int exit_code = 3;
};

int exit_code_for(std::string const& verdict);

/// Never throws for library errors; they become an error document with
/// exit code 3.
RunResult run(CommandSpec const& cmd);

/// Short human-readable summary of a document.
std::string render_text(Json const& doc);

}  // namespace ordercert
