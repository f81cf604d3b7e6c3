#pragma once

// Batch experiments: JSON configs in, pattern/sweep tables and JSON metadata
// out. Used by the `multislit` command-line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "multislit/duality.hpp"
#include "multislit/fringe.hpp"
#include "multislit/quantum_core.hpp"
#include "multislit/wavepacket.hpp"

namespace multislit {

inline constexpr int kSchemaVersion = 1;

/// Schema violation; `path()` is a JSON pointer to the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TableFormat { kCsv, kJson };

struct ExperimentConfig {
  int n_slits = 3;
  std::vector<double> priors;  // empty: uniform
  std::optional<std::string> preset;
  std::vector<std::vector<Complex>> states;  // used when no preset
  double l1 = kDefaultSpacing;
  double l2 = kDefaultSpacing;
  PhysicalConstants constants{};
  std::optional<double> time;
  std::optional<double> sigma_over_d;
  int samples_per_period = kDefaultSamplesPerPeriod;
  double window_lo_periods = 0.25;
  double window_hi_periods = 3.25;
  int fringe_index = 1;
  std::uint64_t seed = 0;

  bool equally_spaced() const { return n_slits == 2 || l1 == l2; }
  SlitGeometry geometry() const;
  DetectorConfig detector() const;
};

struct SweepConfig {
  SweepOptions options;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);
SweepConfig parse_sweep_config(const nlohmann::json& j);

/// Reads and parses a JSON file; I/O failures raise IoError, malformed JSON
/// raises ConfigError at path "".
nlohmann::json load_json(const std::filesystem::path& path);

/// Detector for one of the named presets: "camera", "symmetric-overlap"
/// (three slits only), "identical", "orthogonal", "random".
std::vector<DetectorState> preset_states(const std::string& name, int n_slits,
                                         std::uint64_t seed);

struct PatternRun {
  IntensityPattern pattern;
  std::optional<VisibilityReport> visibility;  // empty: no fringes
  DualityReport duality;
  double bound = 0.0;
  nlohmann::json meta;
};

PatternRun run_pattern(const ExperimentConfig& config);

struct SweepRun {
  std::vector<DualityReport> reports;
  GeometryMode mode = GeometryMode::kEqual;
  std::size_t violation_count = 0;
  std::size_t strict_failures = 0;  // unequal mode: rows with v >= v_equal
  nlohmann::json summary;

  bool all_checks_passed() const {
    return violation_count == 0 && strict_failures == 0;
  }
};

SweepRun run_sweep(const SweepConfig& config);

/// 17 significant digits, independent of the C locale.
std::string format_number(double value);

std::string pattern_csv(const IntensityPattern& pattern);
nlohmann::json pattern_json(const IntensityPattern& pattern);
std::string sweep_csv(const SweepRun& run);
nlohmann::json sweep_json(const SweepRun& run);

/// Writes pattern.{csv,json} and meta.json into `out_dir`.
void write_pattern_outputs(const PatternRun& run,
                           const std::filesystem::path& out_dir,
                           TableFormat format);
/// Writes sweep.{csv,json} and summary.json into `out_dir`.
void write_sweep_outputs(const SweepRun& run,
                         const std::filesystem::path& out_dir,
                         TableFormat format);

}  // namespace multislit
