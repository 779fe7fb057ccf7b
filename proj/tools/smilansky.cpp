#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "smilansky/commands.hpp"
#include "smilansky/config.hpp"
#include "smilansky/error.hpp"
#include "smilansky/parallel.hpp"

#ifndef SMILANSKY_FIXTURE_DIR
#define SMILANSKY_FIXTURE_DIR "fixtures"
#endif

int main(int argc, char** argv) {
  using namespace smilansky;

  CLI::App app{"Spectral analysis of the Smilansky model"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::string fixture_dir = SMILANSKY_FIXTURE_DIR;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  bool dump = false;
  unsigned threads = 1;

  std::string commands_help;
  for (const auto& name : command_names()) commands_help += (commands_help.empty() ? "" : ", ") + name;
  app.add_option("command", command, commands_help)->required()->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--out", out_dir, "directory for CSV, JSON and plot files");
  app.add_option("--seed", seed, "Lanczos start vector seed (overrides eigen.seed)");
  app.add_flag("--strict", strict, "escalate resolution warnings to errors");
  app.add_option("--threads", threads, "worker threads for independent evaluations")->check(CLI::Range(1u, 256u));
  app.add_flag("--dump-matrix", dump, "write assembled matrices in coordinate format to --out");
  app.add_option("--fixtures", fixture_dir, "fixture directory for the report command");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      config = load_config(config_path);
    } else if (command != "report") {
      throw ConfigError("--config is required for " + command);
    }
    apply_environment(config);
    if (seed) config.eigen_seed = *seed;
    if (strict) config.strict = true;
    set_thread_count(threads);

    RunOptions options;
    options.out_dir = out_dir;
    options.dump_matrix = dump;
    options.fixture_dir = fixture_dir;
    const auto result = run_command(command, config, options);
    std::cout << result.bundle.text;
    if (!out_dir.empty()) std::cout << "wrote " << out_dir << " (config " << config.hash_hex() << ")\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
