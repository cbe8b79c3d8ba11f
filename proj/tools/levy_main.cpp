#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "levy/harness.hpp"

using namespace levy;
using namespace levy::harness;

namespace {

std::string checks_help() {
  std::ostringstream out;
  out << "Checks (id: verified result):\n";
  for (const CheckInfo& c : check_registry()) out << "  " << c.id << ": " << c.tag << "\n";
  out << "\nExit codes: 0 pass, 1 check failure, 2 configuration error, 3 numerical non-convergence.\n"
      << "LEVY_THREADS overrides --threads and the config.";
  return out.str();
}

CampaignConfig prepare(const std::string& config_path, std::optional<int> threads, std::optional<std::uint64_t> seed) {
  CampaignConfig cfg = config_path.empty() ? parse_config("", false) : load_config(config_path);
  cfg.threads = resolve_threads(threads, cfg.threads);
  if (seed) cfg.curves.seed = *seed;
  validate(cfg);
  return cfg;
}

void print_report(const CampaignReport& report) {
  for (const CheckReport& c : report.checks) {
    std::cout << to_string(c.status) << "  " << c.id << "  max_residual=" << c.max_residual
              << "  tolerance=" << c.tolerance;
    if (!c.error.empty()) std::cout << "  error=" << c.error;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy operators on parallel-transport functionals: verification campaigns"};
  app.footer(checks_help());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "levy_out";
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "campaign file (INI, or JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads");
    sub->add_option("--seed", seed, "curve ensemble seed (overrides the config)");
  };
  CLI::App* verify = app.add_subcommand("verify", "run the enabled checks over the curve ensemble");
  add_common(verify);
  CLI::App* trace = app.add_subcommand("trace-convergence", "Cesaro series of a synthetic kernel against its integral trace");
  add_common(trace);
  CLI::App* report = app.add_subcommand("report", "summarise JSON reports, failures first; exits with the worst status");
  report->add_option("inputs", inputs, "report files or directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? 0 : (code == 0 ? 0 : exit_config_error);
  }

  try {
    if (verify->parsed() || trace->parsed()) {
      const CampaignConfig cfg = prepare(config_path, threads, seed);
      const CampaignReport r = verify->parsed() ? run_verify(cfg, out_dir) : run_trace_convergence(cfg, out_dir);
      print_report(r);
      std::cout << "report: " << (std::filesystem::path(out_dir) / cfg.report_name).string() << "\n";
      return r.exit_code();
    }
    std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
    const std::vector<SummaryRow> rows = collect_reports(paths);
    std::cout << format_summary(rows);
    // Rows are sorted failures first, so the first row decides the exit code.
    if (rows.front().status == "FAIL") return exit_check_failure;
    if (rows.front().status == "NONCONVERGED") return exit_nonconvergence;
    return exit_pass;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return exit_config_error;
  } catch (const ReportError& e) {
    std::cerr << e.what() << "\n";
    return exit_config_error;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return exit_config_error;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_nonconvergence;
  }
}
