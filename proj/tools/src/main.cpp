// satmdp command-line front end. Reports are JSON on stdout (or --out);
// exit 0 ok, 1 verification failed, 2 usage or input error, 3 refused.
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "satmdp/errors.hpp"

using namespace satmdp;
using namespace satmdp::cli;

namespace {

void add_common(CLI::App* sub, CommonOptions& o, bool out_is_report = true) {
  sub->add_option("--config", o.config_path, "JSON config overlaying the defaults")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "overrides the config seed");
  sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  if (out_is_report) sub->add_option("--out", o.out, "write the report here instead of stdout");
  sub->add_flag("--timing", o.timing, "include wallclock_seconds in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SAT-to-MDP reduction toolkit"};
  app.require_subcommand(1);
  CommonOptions common;
  common.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int i = 1; i < argc; ++i) common.argv.emplace_back(argv[i]);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "build an instance bundle from a DIMACS file");
  add_common(g, common, false);
  g->add_option("--cnf", gen.cnf, "input DIMACS")->required();
  g->add_option("--out", common.out, "bundle directory")->required();
  g->add_flag("--lenient", gen.lenient, "accept clauses of one to three literals");

  auto* vc = app.add_subcommand("verify-claims", "check reward-function bounds and linearity");
  add_common(vc, common);

  RunArgs run;
  std::string mode;
  auto* r = app.add_subcommand("run", "run an agent on an instance");
  add_common(r, common);
  r->add_option("--instance", run.instance, "instance.json from gen, or a toy spec")->required()->check(CLI::ExistingFile);
  r->add_option("--mode", run.mode, "reward mode for SAT instances")->check(CLI::IsMember({"full", "simulator"}));
  r->add_option("--budget", run.budget, "oracle query cap (0 = none)");
  r->add_option("--trajectories", run.trajectories, "JSON-lines trajectory log (greedy and random)");

  ReduceArgs red;
  auto* rd = app.add_subcommand("reduce", "decide gap-SAT through the zero-reward simulator");
  add_common(rd, common);
  rd->add_option("--cnf", red.cnf, "input DIMACS")->required();
  rd->add_option("--budget", red.budget, "oracle query cap (0 = none)");
  rd->add_flag("--lenient", red.lenient, "accept clauses of one to three literals");

  TransformArgs tr;
  auto* t = app.add_subcommand("transform", "bound variable occurrences");
  add_common(t, common, false);
  t->add_option("--cnf", tr.cnf, "input DIMACS")->required();
  t->add_option("--out", common.out, "output DIMACS")->required();
  t->add_option("--b", tr.b, "occurrence bound (overrides config)");
  t->add_option("--report", tr.report, "write the report here instead of stdout");
  t->add_flag("--lenient", tr.lenient, "accept clauses of one to three literals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_gen(common, gen);
    if (*vc) return cmd_verify_claims(common);
    if (*r) return cmd_run(common, run);
    if (*rd) return cmd_reduce(common, red);
    if (*t) return cmd_transform(common, tr);
  } catch (const RefusalError& e) {
    std::cerr << "satmdp: refused: " << e.what() << '\n';
    return kRefused;
  } catch (const InvariantViolation& e) {
    std::cerr << "satmdp: invariant violated: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "satmdp: error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
