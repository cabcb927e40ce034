#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ordercert/cli.hpp"
#include "ordercert/text.hpp"

namespace {

struct RawOptions {
  std::string elements;
  std::string with;
  std::size_t budget = 0;
  int radius = -1;
  bool serial = false;
  std::string out;
};

void add_common(CLI::App& sub, ordercert::CommandSpec& cmd, RawOptions& raw) {
  sub.add_option("--group", cmd.group, "group spec, e.g. free:2, klein, product(cyclic:2,cyclic:2)");
  sub.add_option("--elements", raw.elements, "comma-separated element words");
  sub.add_option("--budget", raw.budget, "closure element cap (search nodes for circ)");
  sub.add_option("--format", cmd.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  sub.add_option("--out", raw.out, "write the document here instead of stdout");
  sub.add_flag("--serial", raw.serial, "use the serial reference kernels");
}

void add_cone(CLI::App& sub, ordercert::CommandSpec& cmd) {
  sub.add_option("--cone", cmd.cone, "standard, p, pi, q or qi");
  sub.add_option("--i", cmd.i, "index of Q_i / P_i");
  sub.add_option("--phase", cmd.phase, "Q_i phase, or the shift of q");
}

}  // namespace

int main(int argc, char** argv) {
  ordercert::CommandSpec cmd;
  RawOptions raw;

  CLI::App app{"ordercert: finite certificates for orderability properties of groups"};
  app.require_subcommand(1);

  auto* check = app.add_subcommand("check", "decide a property at bounded depth");
  add_common(*check, cmd, raw);
  check->add_option("--property", cmd.property, "lo, co, bo, upp, diffuse, circ or cone-axioms")->required();
  check->add_option("--with", raw.with, "upp: second set (otherwise the subset condition on --elements)");
  check->add_option("--map", cmd.map, "natural, identity, mod:N or coord:I");
  check->add_option("--quotient", cmd.map, "same as --map");
  check->add_option("--semigroup", cmd.semigroup, "circ extension: empty, multiples:N or standard");
  check->add_option("--depth", cmd.depth, "closure depth (leaf count)");
  check->add_option("--radius", raw.radius, "conjugator radius (bo) or ball radius (cone-axioms)");
  check->add_option("--k", cmd.k, "circ: pre-order length");
  check->add_option("--mode", cmd.mode, "cone-axioms: axioms, bi or conradian");
  add_cone(*check, cmd);

  auto* orbit = app.add_subcommand("orbit", "orbit of a cone under conjugation");
  add_common(*orbit, cmd, raw);
  add_cone(*orbit, cmd);
  orbit->add_option("--bound", cmd.bound, "largest orbit to explore");
  orbit->add_option("--radius", raw.radius, "witness search radius");

  auto* recur = app.add_subcommand("recur", "recurrence of conjugate powers");
  add_common(*recur, cmd, raw);
  add_cone(*recur, cmd);
  recur->add_option("--by", cmd.by, "the element g (default z)");
  recur->add_option("--n-max", cmd.n_max, "largest power to test");

  auto* verify = app.add_subcommand("verify", "replay a certificate");
  verify->add_option("file", cmd.input, "certificate path")->required();
  verify->add_option("--format", cmd.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--out", raw.out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 3;
  }

  cmd.subcommand = app.get_subcommands().front()->get_name();
  if (!raw.elements.empty()) cmd.elements = ordercert::split_top_level(raw.elements, ',');
  if (!raw.with.empty()) cmd.with = ordercert::split_top_level(raw.with, ',');
  if (raw.budget > 0) cmd.budget = raw.budget;
  if (raw.radius >= 0) cmd.radius = raw.radius;
  if (raw.serial) cmd.exec = ordercert::Exec::serial;

  auto result = ordercert::run(cmd);
  auto text = cmd.format == "text" ? ordercert::render_text(result.document) : result.document.dump(2) + "\n";
  if (raw.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(raw.out);
    if (!out) {
      std::cerr << "cannot write " << raw.out << '\n';
      return 3;
    }
    out << text;
  }
  if (result.exit_code == 3 && result.document.contains("error"))
    std::cerr << "ordercert: " << result.document["error"].get<std::string>() << '\n';
  return result.exit_code;
}
