// Command-line driver: mvset <subcommand> --config run.cfg [--output dir]
//
// Exit status: 0 when every check passes, 1 when a check fails or a stage
// throws (details in <output>/failures.json), 2 for usage or config errors.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mvset/config.hpp"
#include "mvset/pipeline.hpp"

namespace {

const char* describe(const std::string& name) {
  if (name == "green") return "Green's function at x0";
  if (name == "obstacle") return "obstacle solutions and mass balance for every radius";
  if (name == "family") return "mean value sets, contours and the nesting report";
  if (name == "verify-mvt") return "mean value, dual identity and monotonicity checks";
  if (name == "schwarz") return "Schwarz potentials of the family and their vanishing outside";
  if (name == "uniqueness") return "volume-matched uniqueness experiment";
  if (name == "classical") return "closed-form Laplacian identities";
  return "run every stage in order";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean value sets of divergence-form elliptic operators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output;
  bool echo = false;
  bool quiet = false;

  for (const auto& name : mvset::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->add_option("-c,--config", config_path, "run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", output, "output directory (overrides [output] directory)");
    sub->add_flag("--echo-config", echo, "print the canonical configuration before running");
    sub->add_flag("-q,--quiet", quiet, "only print failures");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  mvset::RunConfig cfg;
  try {
    cfg = mvset::parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "mvset: " << e.what() << "\n";
    return 2;
  }
  if (!output.empty()) cfg.directory = output;
  if (echo) std::cout << mvset::canonical_config(cfg);

  mvset::RunResult result;
  try {
    result = mvset::run_subcommand(name, cfg);
  } catch (const std::exception& e) {
    std::cerr << "mvset: " << e.what() << "\n";
    return 2;
  }

  for (const auto& c : result.checks) {
    if (quiet && c.passed) continue;
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.subcommand << " " << c.name << " = " << c.value << " "
              << c.relation << " " << c.threshold << "\n";
  }
  for (const auto& e : result.errors) std::cerr << "error " << e << "\n";
  if (!quiet) std::cout << (result.passed() ? "all checks passed" : "some checks failed") << "\n";
  return result.exit_code();
}
