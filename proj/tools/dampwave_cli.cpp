// Command-line front end: run, sweep and verify.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dampwave/config.hpp"
#include "dampwave/experiment.hpp"

int main(int argc, char** argv) {
  using namespace dampwave;

  CLI::App app{"Damped wave equation experiment harness"};
  app.set_version_flag("--version", std::string("dampwave ") + tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  int workers = 1;
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_option("--workers", workers, "Concurrent simulations in a sweep")->check(CLI::PositiveNumber);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one simulation from a config file");
  run->add_option("config", run_config, "Config file")->required();

  std::string sweep_config;
  auto* sweep = app.add_subcommand("sweep", "Run the disturbance-scale sweep of a config file");
  sweep->add_option("config", sweep_config, "Config file")->required();

  VerifyRequest req;
  auto* verify = app.add_subcommand("verify", "Check an inequality: gronwall, generalized-gronwall or gn");
  verify->add_option("subject", req.subject, "gronwall | generalized-gronwall | gn")
      ->required()
      ->check(CLI::IsMember({"gronwall", "generalized-gronwall", "gn"}));
  verify->add_option("args", req.args, "gn: N m q r p; gronwall: trace.csv; generalized-gronwall: [t,F,h1,h2 csv]");
  verify->add_option("--T", req.T, "Gronwall constant T");
  verify->add_option("--C0", req.C0, "Gronwall constant C0");
  double tail = 0.0;
  auto* tail_opt = verify->add_option("--tail", tail, "Bound on the energy integral beyond the last sample");
  verify->add_option("--C1", req.C1);
  verify->add_option("--C2", req.C2);
  verify->add_option("--C3", req.C3);
  verify->add_option("--alpha1", req.alpha1);
  verify->add_option("--alpha2", req.alpha2);
  verify->add_option("--instances", req.instances, "Self-test instance count");
  verify->add_option("--seed", req.seed, "Self-test seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFault;
  }

  if (*verify) {
    if (*tail_opt) req.tail = tail;
    return cmd_verify(req, std::cout);
  }

  const std::string& path = *run ? run_config : sweep_config;
  ExperimentConfig config;
  try {
    config = load_config(path);
  } catch (const std::exception& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kExitFault;
  }
  const std::string dir = out_dir.empty() ? config.output.dir : out_dir;
  if (*run) return cmd_run(config, dir, std::cerr);
  return cmd_sweep(config, dir, workers, std::cerr);
}
