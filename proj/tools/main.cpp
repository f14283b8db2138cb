#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slantcheck/builtins.hpp"
#include "slantcheck/errors.hpp"
#include "slantcheck/report.hpp"
#include "slantcheck/runner.hpp"
#include "slantcheck/scenario.hpp"
#include "slantcheck/version.hpp"

namespace {

struct Options {
  std::string format = "human";
  std::vector<std::string> grid_overrides;
  std::vector<std::string> tol_overrides;
  std::string out_path;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"human", "machine"}))
      ->capture_default_str();
  cmd->add_option("--grid", opt.grid_overrides,
                  "Override a grid axis, AXIS=min:max:steps (repeatable)");
  cmd->add_option("--tol", opt.tol_overrides,
                  "Override a tolerance, NAME=value (repeatable)");
  cmd->add_option("--out", opt.out_path, "Write the report to a file");
}

int emit(const slantcheck::Report& report, const Options& opt) {
  const std::string text = opt.format == "machine"
                               ? slantcheck::emit_machine(report)
                               : slantcheck::emit_human(report);
  if (opt.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << opt.out_path << "'\n";
      return 2;
    }
    out << text;
  }
  return report.pass ? 0 : 1;
}

int run_config(slantcheck::ScenarioConfig cfg, const Options& opt,
               bool structure_only) {
  for (const std::string& spec : opt.grid_overrides)
    slantcheck::override_grid_axis(cfg, spec);
  for (const std::string& spec : opt.tol_overrides)
    slantcheck::override_tolerance(cfg, spec);
  return emit(slantcheck::run_scenario(cfg, structure_only), opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verifier for slant submanifold geometry"};
  app.set_version_flag("--version", slantcheck::kEngineVersion);
  app.require_subcommand(1);

  Options opt;
  std::string file_arg;
  std::string example_arg;

  CLI::App* run = app.add_subcommand("run", "Run every check in a scenario file");
  run->add_option("file", file_arg, "Scenario file")->required();
  add_common(run, opt);

  CLI::App* example =
      app.add_subcommand("example", "Run a bundled example scenario");
  example->add_option("name", example_arg, "One of e1, e2, e3, e4")
      ->required()
      ->check(CLI::IsMember({"e1", "e2", "e3", "e4"}));
  add_common(example, opt);

  CLI::App* check_structure = app.add_subcommand(
      "check-structure",
      "Run only the ambient-structure checks of a scenario file");
  check_structure->add_option("file", file_arg, "Scenario file")->required();
  add_common(check_structure, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 uses 0 for help and its own codes otherwise; fold errors to 2.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed())
      return run_config(slantcheck::load_scenario(file_arg), opt, false);
    if (example->parsed())
      return run_config(slantcheck::builtin_config(example_arg), opt, false);
    return run_config(slantcheck::load_scenario(file_arg), opt, true);
  } catch (const slantcheck::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const slantcheck::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const slantcheck::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
