#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wigrav/observables.hpp"
#include "wigrav/params.hpp"
#include "wigrav/quadrature.hpp"

namespace wigrav {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);

/// One checked quantity of an experiment.
struct MetricRow {
  std::string name;
  double value = 0.0;
  std::string expected;    // human-readable target, e.g. "[0.0014, 0.0020]"
  std::string provenance;  // "published", "derived" or "exact"
  bool pass = false;
};

struct ExperimentReport {
  std::string experiment;
  RawParams params;
  std::vector<MetricRow> rows;
  std::vector<std::string> outputs;

  bool all_pass() const;
  nlohmann::json to_json() const;
  /// One line per row: PASS/FAIL, name, value, expected, provenance.
  std::string summary() const;
};

/// Columns plus numeric rows; metadata is carried into the JSON mirror.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata = nlohmann::json::object();
};

/// CSV: header line, "%.17g" fields, "\n" line endings. JSON: an object with
/// "metadata" and "rows" (array of row objects).
std::string render(const DataTable& table, OutputFormat format);

/// Writes through a temporary file and renames; nothing is left behind on
/// failure. Throws std::runtime_error on I/O errors.
void write_output(const std::string& content, const std::filesystem::path& path);

/// Uniform grid on [0, t_max] with `steps` points; 2.5 s is inserted when it
/// lies inside the range and is not already a node. t_max = 0 gives {0}.
std::vector<double> time_grid(double t_max, int steps);

/// Worker cap from WIGNER_GRAV_THREADS, else the hardware concurrency.
unsigned thread_cap();

struct RunOptions {
  std::optional<std::filesystem::path> params_file;
  double t_max = 10.0;
  int steps = 21;
  std::string output;  // empty: print the table to stdout
  OutputFormat format = OutputFormat::Csv;
  QuadratureSettings quadrature;
  std::vector<std::string> kinds{"qt", "taylor", "fit"};
  PurityMethod method = PurityMethod::GaussianAnalytic;
  double d_over_threshold = 1.0;
  unsigned threads = 0;  // 0: thread_cap()
};

/// Table plus report, before anything is written.
struct ExperimentResult {
  DataTable table;
  ExperimentReport report;
};

ExperimentResult run_purity_curve(const RunOptions& options);
ExperimentResult run_negativity(const RunOptions& options);
ExperimentResult run_diffusion_purities(const RunOptions& options);
ExperimentResult run_trajectories(const RunOptions& options);
ExperimentResult run_potentials(const RunOptions& options);

/// Runs an experiment and writes its table to options.output (or stdout).
ExperimentReport cmd_purity_curve(const RunOptions& options);
ExperimentReport cmd_negativity(const RunOptions& options);
ExperimentReport cmd_diffusion_purities(const RunOptions& options);
ExperimentReport cmd_trajectories(const RunOptions& options);
ExperimentReport cmd_potentials(const RunOptions& options);

}  // namespace wigrav
