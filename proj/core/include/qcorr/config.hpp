#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qcorr/experiments.hpp"
#include "qcorr/thermal.hpp"

namespace qcorr::cli {

enum class ExperimentKind { hom, mz, gedanken, thermal_g2 };
std::string to_string(ExperimentKind kind);

struct ThermalScanConfig {
  std::shared_ptr<const ModeGrid> q_grid;
  double x1 = 0.0;
  int points = 0;  // 0 picks eight scan points per source mode
};

// Output file names, interpreted relative to the run's output directory.
struct OutputSpec {
  std::string csv;  // empty selects the per-experiment default name
  std::string summary = "summary.json";
  std::string manifest = "run_manifest.json";
  std::string antistokes_csv = "antistokes_readout.csv";
};

// Fully validated run description. Loading fills every field (config files
// only override defaults), resolves shortcuts, and rejects unknown keys, so
// a constructed value is always runnable.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::hom;
  HomConfig hom;
  MzConfig mz;
  ThermalScanConfig thermal;
  OutputSpec output;
  std::string effective_json;  // the fully-defaulted config, pretty-printed
  std::uint64_t config_hash = 0;  // FNV-1a over the compact effective config
};

// The complete default configuration (what --print-config-defaults emits).
std::string default_config_text();

// Parse + validate. Throws ConfigError naming the offending field, or the
// domain error produced by constructing the configured elements (a
// non-unitary splitter, a degenerate grid, a non-unit environment...).
ExperimentConfig load_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Comma-separated, header row, every number %.15e. Probability-like columns
// (p_*, pass/herald probabilities, purity, concurrence, visibility) are
// bounds-checked against [0, 1] within kNormTol, then clamped for emission;
// a genuine violation throws InvariantViolation.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

struct RunArtifacts {
  std::vector<std::filesystem::path> files;
  std::map<std::string, double> metrics;
};

// Runs the configured experiment and writes the CSV(s), the JSON summary and
// the run manifest into out_dir. File bytes are independent of the thread
// count and of repetition, except for the manifest's wall-clock duration.
RunArtifacts run_experiment(const ExperimentConfig& config,
                            const std::filesystem::path& out_dir, int threads);

}  // namespace qcorr::cli
