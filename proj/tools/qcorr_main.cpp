// qcorr: run or validate photon-correlation experiment configs.
//
// Exit codes: 0 success, 2 configuration error (parse, unknown field,
// domain check), 3 numerical-invariant violation while running (the run
// aborts instead of writing suspect data). Diagnostics go to stderr.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcorr/config.hpp"
#include "qcorr/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

int do_validate(const std::string& config_path) {
  try {
    const qcorr::cli::ExperimentConfig config = qcorr::cli::load_config_file(config_path);
    std::cerr << "valid: " << qcorr::cli::to_string(config.kind) << " config, hash 0x"
              << std::hex << config.config_hash << std::dec << "\n";
    return 0;
  } catch (const qcorr::Error& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return kExitConfig;
  }
}

int do_run(const std::string& config_path, const std::string& out_dir, int threads) {
  qcorr::cli::ExperimentConfig config;
  try {
    config = qcorr::cli::load_config_file(config_path);
  } catch (const qcorr::Error& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const qcorr::cli::RunArtifacts artifacts =
        qcorr::cli::run_experiment(config, out_dir, threads);
    for (const auto& file : artifacts.files) std::cerr << "wrote " << file.string() << "\n";
    return 0;
  } catch (const qcorr::Error& e) {
    // Anything the core rejects mid-run means the numbers cannot be trusted.
    std::cerr << "qcorr: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qcorr: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of photon-interference experiments"};
  app.set_version_flag("--version", std::string(qcorr::kVersion));

  bool print_defaults = false;
  app.add_flag("--print-config-defaults", print_defaults,
               "Print the full default config to stdout and exit");

  std::string out_dir = ".";
  int threads = 1;
  int seed = 0;
  app.add_option("--out-dir", out_dir, "Directory for result files")
      ->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for sweep evaluation")
      ->capture_default_str();
  app.add_option("--seed", seed,
                 "Reserved; current computations are expectation-valued and seed-free")
      ->capture_default_str();

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->fallthrough();
  run->add_option("config", run_config, "JSON config file")->required();

  std::string validate_config;
  CLI::App* validate = app.add_subcommand("validate", "Parse and check a config");
  validate->fallthrough();
  validate->add_option("config", validate_config, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (print_defaults) {
    std::cout << qcorr::cli::default_config_text();
    return 0;
  }

  if (threads < 1) {
    std::cerr << "qcorr: --threads must be positive\n";
    return kExitConfig;
  }

  if (run->parsed()) return do_run(run_config, out_dir, threads);
  if (validate->parsed()) return do_validate(validate_config);

  std::cerr << app.help();
  return kExitConfig;
}
