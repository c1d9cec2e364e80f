#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixgeom/pullback.hpp"

namespace mixgeom::cli {

/// Inclusive linear range written as `min:max:steps`.
struct Range {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  std::vector<double> values() const;
};

Range parse_range(const std::string& text, const std::string& key);

enum class OutputFormat { Csv, Json };

struct OutputTarget {
  std::string path;
  OutputFormat format;
};

struct ScanConfig {
  std::string model = "dirac";
  Range m{-1.0, 1.0, 41};
  Range t{0.5, 0.5, 1};
  int bz_grid = 201;
  std::vector<OutputTarget> outputs;
  /// Prefix for SVG plots; empty disables them.
  std::string svg_prefix;
  bool emit_chern = false;
  bool emit_convergence_pair = false;
  std::uint64_t seed = 0;

  /// Throws UsageError naming the offending key.
  void validate() const;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `scan` arguments (without the program name and subcommand) plus an
/// optional `--config FILE` of `key = value` lines. Flags override file values.
ScanConfig parse_config(const std::vector<std::string>& args);

/// One CSV/JSON row: a metric sample plus the optional columns.
struct ScanRow {
  MetricSample sample;
  std::optional<int> chern;
  std::optional<MetricSample> refined;
};

std::vector<ScanRow> compute_rows(const ScanConfig& config, const ScanOptions& opts = {});

std::string csv_header(const ScanConfig& config);
void write_csv(std::ostream& os, const ScanConfig& config, const std::vector<ScanRow>& rows);
void write_json(std::ostream& os, const ScanConfig& config, const std::vector<ScanRow>& rows);

/// Heatmap of one quantity over the (M, T) plane.
void write_heatmap_svg(std::ostream& os, const ScanConfig& config,
                       const std::vector<ScanRow>& rows, bool bures);
/// g_interf and g_bures totals against M, one pair of curves per temperature.
void write_cuts_svg(std::ostream& os, const ScanConfig& config, const std::vector<ScanRow>& rows);

/// Computes the scan and writes every requested output. Returns the process
/// exit code: 0 on success, 1 on I/O failure or invalid model.
int run_scan(const ScanConfig& config, std::ostream& log);

/// Entry point shared by the executable: argv[1] is the subcommand.
int main_entry(int argc, char** argv);

}  // namespace mixgeom::cli
