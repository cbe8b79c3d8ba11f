#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levy/sectors.hpp"

namespace levy::harness {

/// Schema version written into every report.
inline constexpr int kSchemaVersion = 1;

/// Exit codes of the CLI.
enum ExitCode : int { exit_pass = 0, exit_check_failure = 1, exit_config_error = 2, exit_nonconvergence = 3 };

/// Malformed or inconsistent campaign configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing, unreadable or corrupt report files given to `report` (exit code 2).
class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldSpec {
  std::string name;
  CatalogParams params;
};

struct CurveEnsemble {
  int count = 4;
  std::uint64_t seed = 1;
  RandomCurveSpec shape;
  int cells = 1024;
};

/// Synthetic kernel triple for the trace comparison: volterra, levy, singular or mixed.
struct SyntheticSpec {
  std::string kind = "mixed";
};

/// Everything a campaign needs.  Defaults give a small, fast run.
///
/// INI layout (JSON uses the same sections as objects):
///   [campaign]   metric = euclidean|minkowski, expect_solution, nested_curves, threads,
///                nonconvergence = error|warn
///   [connection] name = <catalog name>, other keys are catalog parameters
///   [higgs]      name, m, l, other keys are field parameters
///   [dirac]      name, mass, other keys are field parameters
///   [curves]     count, seed, kind = fourier|piecewise_linear, modes, scale, drift, cells
///   [trace]      n_max, basis = sin|f, weight = none|number|scaled_number
///   [synthetic]  kind = volterra|levy|singular|mixed
///   [checks]     enabled = comma separated ids, or all
///   [tolerances] <check id> = value
///   [output]     report = file name, csv = bool, svg = bool
struct CampaignConfig {
  FieldSpec connection{"zero", {}};
  /// Defaults to the metric of the catalog entry.
  std::optional<Metric::Kind> metric;
  FieldSpec higgs{"random_polynomial", {}};
  HiggsParams higgs_params;
  FieldSpec dirac{"random_polynomial", {}};
  Real dirac_mass = 0.0;
  /// Also assert the raw field-equation residuals (the pair solves the equations).
  bool expect_solution = false;
  /// Curves on which the nested endpoint derivation (the costly part) is evaluated.
  int nested_curves = 1;
  int threads = 1;
  /// When false, non-convergence is recorded but does not change the status.
  bool nonconvergence_is_error = true;
  CurveEnsemble curves;
  int n_max = 256;
  BasisKind basis = BasisKind::sin;
  std::string weight = "none";
  SyntheticSpec synthetic;
  std::vector<std::string> checks;
  std::map<std::string, Real> tolerances;
  std::string report_name = "report.json";
  bool csv = true;
  bool svg = false;

  Real tolerance(const std::string& id) const;
  Metric resolved_metric() const;
  TraceConfig trace_config() const;
};

/// Curve i of the ensemble: random_curve(seed + i, shape, dim, cells).
Curve campaign_curve(const CampaignConfig& cfg, int dim, int i);

/// Fixed synthetic kernels on R^2 with fiber 2 (kinds as in SyntheticSpec).
SyntheticKernel synthetic_kernel(const std::string& kind);

/// Reads INI (default) or JSON (by .json extension or a leading '{').
CampaignConfig load_config(const std::filesystem::path& path);
CampaignConfig parse_config(const std::string& text, bool json);
/// Throws ConfigError when a tolerance is not positive, a name is unknown or a size is invalid.
void validate(const CampaignConfig& cfg);
/// The configuration as JSON, echoed into reports.
nlohmann::json to_json(const CampaignConfig& cfg);

struct CheckInfo {
  std::string id;
  /// Result the check verifies.
  std::string tag;
  std::string description;
  Real default_tolerance;
};

/// All check ids in run order.
const std::vector<CheckInfo>& check_registry();
const CheckInfo& check_info(const std::string& id);

enum class Status { pass, fail, nonconverged };
std::string to_string(Status s);

struct CurveResult {
  int curve = 0;
  Real residual = 0.0;
  bool converged = true;
  /// Named sub-residuals (max-norms).
  std::map<std::string, Real> parts;
  /// Set when a qualitative requirement failed, e.g. an error that did not decrease.
  std::string violation;
  /// Convergence series in CSV form (columns of CesaroSeries::write_csv), curve 0 only.
  std::string series_csv;
  std::vector<Real> series_n, series_error;
};

struct CheckReport {
  std::string id;
  std::string tag;
  Real tolerance = 0.0;
  Real max_residual = 0.0;
  Status status = Status::pass;
  std::vector<CurveResult> curves;
  /// Check-specific extras (fitted exponents, series summaries).
  nlohmann::json details = nlohmann::json::object();
  std::string error;
  Real wall_time = 0.0;
};

struct CampaignReport {
  std::string command;
  nlohmann::json config;
  std::vector<CheckReport> checks;

  int exit_code() const;
  /// wall_time fields are the only run-dependent entries.
  nlohmann::json to_json(bool with_timing = true) const;
};

/// Runs every enabled check; writes the JSON report and per-check CSV files into `out`.
CampaignReport run_verify(const CampaignConfig& cfg, const std::filesystem::path& out);

/// Cesaro series of the configured synthetic kernel against its integral trace.
/// Writes trace_series.csv (and trace_series.svg when enabled) plus the report.
CampaignReport run_trace_convergence(const CampaignConfig& cfg, const std::filesystem::path& out);

struct SummaryRow {
  std::string id;
  std::string tag;
  Real max_residual = 0.0;
  Real tolerance = 0.0;
  std::string status;
  std::string source;
};

/// Collects rows from report files and directories (*.json), FAIL rows first.
std::vector<SummaryRow> collect_reports(const std::vector<std::filesystem::path>& inputs);
std::string format_summary(const std::vector<SummaryRow>& rows);

/// Self-contained SVG line plot of y against x, log-log.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::vector<Real>& x,
                    const std::vector<Real>& y);

/// Thread count: LEVY_THREADS beats the command line, which beats the config.
int resolve_threads(std::optional<int> cli, int config);

}  // namespace levy::harness
