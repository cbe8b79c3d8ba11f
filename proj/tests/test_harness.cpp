#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "levy/harness.hpp"

using namespace levy;
using namespace levy::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("levy_test_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSmall = R"(
[connection]
name = random_polynomial
[curves]
count = 2
seed = 3
cells = 256
[checks]
enabled = transport_unitarity, first_derivative, LLYM, divB
)";

}  // namespace

TEST_CASE("INI and JSON configurations agree") {
  const CampaignConfig ini = parse_config(R"(
[campaign]
metric = minkowski
expect_solution = true
[connection]
name = abelian_linear
scale = 0.3
[higgs]
name = constant_vacuum
m = 0.4
l = 0.5
[curves]
count = 3
kind = piecewise_linear
modes = 8
[trace]
n_max = 64
basis = f
weight = scaled_number
[checks]
enabled = LLYM, divB
[tolerances]
LLYM = 1e-7
[output]
svg = true
)",
                                          false);
  const CampaignConfig json = parse_config(R"({
  "campaign": {"metric": "minkowski", "expect_solution": true},
  "connection": {"name": "abelian_linear", "scale": 0.3},
  "higgs": {"name": "constant_vacuum", "m": 0.4, "l": 0.5},
  "curves": {"count": 3, "kind": "piecewise_linear", "modes": 8},
  "trace": {"n_max": 64, "basis": "f", "weight": "scaled_number"},
  "checks": {"enabled": "LLYM, divB"},
  "tolerances": {"LLYM": 1e-7},
  "output": {"svg": true}
})",
                                           true);
  CHECK(to_json(ini) == to_json(json));
  CHECK(ini.resolved_metric().kind() == Metric::Kind::minkowski);
  CHECK(ini.tolerance("LLYM") == 1e-7);
  CHECK(ini.tolerance("divB") == check_info("divB").default_tolerance);
  CHECK(ini.connection.params.at("scale") == 0.3);
  CHECK(ini.higgs_params.l == 0.5);
  CHECK(ini.svg);
  CHECK(ini.checks == std::vector<std::string>{"LLYM", "divB"});
  CHECK_NOTHROW(validate(ini));
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(parse_config("[nonsense]\nx = 1\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[curves]\ncount = 2\ncolour = red\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[curves]\ncount = two\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[curves]\nseed = -1\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[higgs]\nm = -1\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[campaign]\nnonconvergence = maybe\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[campaign\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"curves\": [1, 2]}", true), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json", true), ConfigError);

  auto invalid = [](const std::string& text) { return [text] { validate(parse_config(text, false)); }; };
  CHECK_THROWS_AS(invalid("[tolerances]\nLLYM = 0\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[tolerances]\nLLYM = -1e-3\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[tolerances]\nno_such_check = 1e-3\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[checks]\nenabled = no_such_check\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[connection]\nname = nothing\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[curves]\ncells = 100\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[curves]\ncount = 0\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[trace]\nn_max = 8\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[trace]\nweight = number\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[connection]\nname = random_polynomial\n[checks]\nenabled = LLYM_current\n")(), ConfigError);
  CHECK_NOTHROW(invalid("[campaign]\nmetric = minkowski\n[connection]\nname = abelian_planted_current\n"
                        "[checks]\nenabled = LLYM_current\n")());
  CHECK_THROWS_AS(invalid("[connection]\nname = pure_gauge\ndim = 3\n[higgs]\ndim = 3\n[checks]\nenabled = QCD_path\n")(),
                  ConfigError);
  CHECK_THROWS_AS(invalid("[connection]\nname = pure_gauge\ndim = 3\n")(), ConfigError);
  CHECK_THROWS_AS(invalid("[output]\nreport = ../x.json\n")(), ConfigError);
}

TEST_CASE("'all' leaves out checks that cannot apply") {
  const CampaignConfig poly = parse_config("[connection]\nname = random_polynomial\n", false);
  CHECK(std::find(poly.checks.begin(), poly.checks.end(), "LLYM_current") == poly.checks.end());
  CHECK(std::find(poly.checks.begin(), poly.checks.end(), "QCD_path") != poly.checks.end());
  const CampaignConfig zero = parse_config("[connection]\nname = zero\n", false);
  CHECK(zero.checks.size() == check_registry().size());
  const CampaignConfig planted = parse_config("[connection]\nname = abelian_planted_current\n", false);
  CHECK(std::find(planted.checks.begin(), planted.checks.end(), "LLYM_current") != planted.checks.end());
  const CampaignConfig three = parse_config("[connection]\nname = pure_gauge\ndim = 3\n[higgs]\ndim = 3\n", false);
  CHECK(std::find(three.checks.begin(), three.checks.end(), "QCD_B") == three.checks.end());
  CHECK(poly.checks.size() + 1 == check_registry().size());
  CHECK_NOTHROW(validate(three));
}

TEST_CASE("thread count resolution") {
  unsetenv("LEVY_THREADS");
  CHECK(resolve_threads(std::nullopt, 3) == 3);
  CHECK(resolve_threads(2, 3) == 2);
  CHECK_THROWS_AS(resolve_threads(0, 3), ConfigError);
  setenv("LEVY_THREADS", "5", 1);
  CHECK(resolve_threads(2, 3) == 5);
  setenv("LEVY_THREADS", "x", 1);
  CHECK_THROWS_AS(resolve_threads(2, 3), ConfigError);
  unsetenv("LEVY_THREADS");
}

TEST_CASE("verify writes reports and is deterministic across thread counts") {
  CampaignConfig cfg = parse_config(kSmall, false);
  const fs::path a = scratch_dir("a"), b = scratch_dir("b");
  const CampaignReport r1 = run_verify(cfg, a);
  cfg.threads = 2;
  const CampaignReport r2 = run_verify(cfg, b);
  CHECK(r1.exit_code() == exit_pass);
  CHECK(r1.to_json(false) == r2.to_json(false));
  CHECK(r1.to_json(false).dump() == r2.to_json(false).dump());
  CHECK(r1.checks.size() == 4);
  for (const CheckReport& c : r1.checks) {
    CHECK(c.status == Status::pass);
    CHECK(c.curves.size() == 2);
    CHECK(fs::exists(a / (c.id + ".csv")));
  }
  const nlohmann::json doc = nlohmann::json::parse(slurp(a / "report.json"));
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["status"] == "PASS");
  CHECK(doc["checks"][0].contains("wall_time"));
  CHECK_FALSE(r1.to_json(false)["checks"][0].contains("wall_time"));
  const std::string csv = slurp(a / "first_derivative.csv");
  CHECK(csv.rfind("curve,residual,converged", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("a tolerance below the attainable residual fails the campaign") {
  CampaignConfig cfg = parse_config(std::string(kSmall) + "[tolerances]\nfirst_derivative = 1e-30\n", false);
  const CampaignReport r = run_verify(cfg, scratch_dir("fail"));
  CHECK(r.exit_code() == exit_check_failure);
  CHECK(r.checks[1].status == Status::fail);
  CHECK(r.to_json()["status"] == "FAIL");
}

TEST_CASE("exit codes rank failure above non-convergence") {
  CampaignReport r;
  r.checks.resize(2);
  CHECK(r.exit_code() == exit_pass);
  r.checks[0].status = Status::nonconverged;
  CHECK(r.exit_code() == exit_nonconvergence);
  r.checks[1].status = Status::fail;
  CHECK(r.exit_code() == exit_check_failure);
}

TEST_CASE("trace convergence writes the series") {
  CampaignConfig cfg = parse_config("[trace]\nn_max = 64\n[synthetic]\nkind = levy\n[output]\nsvg = true\n", false);
  const fs::path out = scratch_dir("trace");
  const CampaignReport r = run_trace_convergence(cfg, out);
  CHECK(r.exit_code() == exit_pass);
  CHECK(fs::exists(out / "trace_series.csv"));
  CHECK(slurp(out / "trace_series.svg").find("<svg") != std::string::npos);
  CHECK(r.checks.front().curves.front().series_n.size() > 10);
}

TEST_CASE("report collection orders failures first") {
  const fs::path dir = scratch_dir("collect");
  CampaignReport pass, fail;
  pass.command = fail.command = "verify";
  pass.checks.push_back({"LLYM", "tag a", 1e-6, 1e-9, Status::pass});
  fail.checks.push_back({"divB", "tag b", 1e-9, 1e-3, Status::fail});
  fail.checks.push_back({"endpoint", "tag c", 1e-6, 1e-5, Status::nonconverged});
  std::ofstream(dir / "a.json") << pass.to_json().dump();
  std::ofstream(dir / "b.json") << fail.to_json().dump();
  std::ofstream(dir / "notes.txt") << "ignored";
  const std::vector<SummaryRow> rows = collect_reports({dir});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].status == "FAIL");
  CHECK(rows[1].status == "NONCONVERGED");
  CHECK(rows[2].status == "PASS");
  CHECK(rows[2].source == "a.json");
  const std::string table = format_summary(rows);
  CHECK(table.find("divB") < table.find("LLYM"));

  CHECK_THROWS_AS(collect_reports({scratch_dir("empty")}), ReportError);
  CHECK_THROWS_AS(collect_reports({dir / "missing.json"}), ReportError);
  std::ofstream(dir / "c.json") << "{\"checks\": 3";
  CHECK_THROWS_AS(collect_reports({dir}), ReportError);
}

TEST_CASE("svg plot is self-contained") {
  const fs::path p = scratch_dir("svg") / "plot.svg";
  write_svg_plot(p, "series", {1, 10, 100}, {1e-1, 1e-3, 0.0});
  const std::string s = slurp(p);
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("polyline") != std::string::npos);
  CHECK(s.find("http://www.w3.org/2000/svg") != std::string::npos);
}
