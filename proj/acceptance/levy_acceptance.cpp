// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "levy/harness.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

namespace tol {
constexpr Real agv_relative = 5e-2;        // Cesaro against integral mode, n_max = 256
constexpr Real grid_stability = 1e-8;      // integral mode under M -> 2M
constexpr Real vacuum = 1e-6;              // Levy operator on U for Yang-Mills connections
constexpr Real planted_current = 1e-8;     // Levy operator against the transported current
constexpr Real div_identity = 1e-9;        // div B against U_{0,1} times the Levy operator
constexpr Real trace_match = 1e-3;         // synthetic Cesaro limit against the integral trace
constexpr Real exponent_lo = 0.8, exponent_hi = 1.2;
constexpr Real closedness = 1e-6;
constexpr Real planted_closedness = 1e-8;  // detected residual against the planted term
constexpr Real endpoint = 1e-6;
constexpr Real endpoint_nested = 1e-5;
constexpr Real compatibility = 1e-6;
constexpr Real dirac_source = 1e-12;
constexpr Real drift = 1e-10;
constexpr Real fd_order = 1.8;
constexpr Real suite_seconds = 900.0;
}  // namespace tol

constexpr int kCells = 1024;

struct Outcome {
  bool pass = true;
  std::string detail;
  nlohmann::json values = nlohmann::json::object();
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> run;
};

std::string sci(Real x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << x;
  return s.str();
}

Real relative(const Matrix& a, const Matrix& b) { return max_norm(a - b) / (1.0 + max_norm(b)); }

Curve test_curve(int i) { return random_curve(1000 + static_cast<std::uint64_t>(i), {}, 4, kCells); }

Vector unit(int d, int mu) {
  Vector e = Vector::Zero(d);
  e(mu) = 1.0;
  return e;
}

/// Variation with components sqrt(2) sin(n_mu pi t) c_mu.
Variation mixed_sin(const std::vector<std::pair<int, Real>>& modes, int dim, int cells) {
  PathFunction f;
  f.dim = dim;
  f.position = [modes, dim](Real t) {
    Vector x = Vector::Zero(dim);
    if (t <= 0.0 || t >= 1.0) return x;
    for (std::size_t mu = 0; mu < modes.size(); ++mu)
      x(static_cast<Eigen::Index>(mu)) = modes[mu].second * std::sqrt(2.0) * std::sin(modes[mu].first * std::numbers::pi * t);
    return x;
  };
  f.velocity = [modes, dim](Real t, Side) {
    Vector x = Vector::Zero(dim);
    for (std::size_t mu = 0; mu < modes.size(); ++mu) {
      const Real w = modes[mu].first * std::numbers::pi;
      x(static_cast<Eigen::Index>(mu)) = modes[mu].second * std::sqrt(2.0) * w * std::cos(w * t);
    }
    return x;
  };
  return Variation(f, cells);
}

// Cesaro and integral Levy operators agree, the error falls with n_max, integral mode is grid-stable.
Outcome ac1() {
  Outcome o;
  Real worst = 0.0, worst_grid = 0.0;
  int not_decreasing = 0;
  for (const char* name : {"random_polynomial", "bpst_instanton", "null_plane_wave"}) {
    const CatalogEntry e = catalog(name);
    TraceConfig tc;
    tc.metric = e.metric;
    tc.n_max = 256;
    Real conn_worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Curve sigma = test_curve(i);
      const Matrix integral = levy_operator_integral(PathKernels(e.connection, sigma), e.metric);
      const Matrix fine = levy_operator_integral(PathKernels(e.connection, sigma.resampled(2 * kCells)), e.metric);
      worst_grid = std::max(worst_grid, relative(fine, integral));
      const OperatorResult c = levy_operator_on_transport(e.connection, sigma, OperatorMode::cesaro, tc);
      std::vector<Real> err;
      for (int n : {64, 128, 256}) err.push_back(relative(fit_tail(c.series->means, n / 2, n).limit, integral));
      // a floor keeps rounding-level errors from counting as growth
      const Real floor = 1e-10;
      if (!((err[1] <= err[0] || err[1] <= floor) && (err[2] <= err[1] || err[2] <= floor))) ++not_decreasing;
      conn_worst = std::max(conn_worst, err[2]);
    }
    o.values[name] = conn_worst;
    worst = std::max(worst, conn_worst);
  }
  o.values["relative_error"] = worst;
  o.values["grid_change"] = worst_grid;
  o.values["not_decreasing"] = not_decreasing;
  o.pass = worst <= tol::agv_relative && worst_grid <= tol::grid_stability && not_decreasing == 0;
  o.detail = "3 connections x 10 curves, max relative error " + sci(worst) + " at n_max = 256 (tol " +
             sci(tol::agv_relative) + "), " + std::to_string(not_decreasing) + " non-decreasing series, M -> 2M change " +
             sci(worst_grid) + " (tol " + sci(tol::grid_stability) + ")";
  return o;
}

// Yang-Mills vacua have vanishing Levy operator; a planted current is reproduced.
Outcome ac2() {
  Outcome o;
  Real vac = 0.0, cur = 0.0;
  for (const char* name : {"bpst_instanton", "null_plane_wave"}) {
    const CatalogEntry e = catalog(name);
    for (int i = 0; i < 10; ++i) vac = std::max(vac, max_norm(levy_operator_integral(PathKernels(e.connection, test_curve(i)), e.metric)));
  }
  for (const Metric g : {Metric::euclidean(4), Metric::minkowski(4)}) {
    const CatalogEntry e = catalog("abelian_planted_current", {}, g);
    for (int i = 0; i < 10; ++i) {
      const PathKernels k(e.connection, test_curve(i));
      cur = std::max(cur, max_norm(levy_operator_integral(k, g) + k.table().final() * transported_current(k, *e.current)));
    }
  }
  o.values = {{"vacuum", vac}, {"planted_current", cur}};
  o.pass = vac <= tol::vacuum && cur <= tol::planted_current;
  o.detail = "bpst (delta) and null wave (eta) max " + sci(vac) + " (tol " + sci(tol::vacuum) +
             "); planted current residual " + sci(cur) + " (tol " + sci(tol::planted_current) + ")";
  return o;
}

// div_L B against U_{0,1} times the Levy operator on U, normalised by 1 + |D^2 U|.
Outcome ac3() {
  Outcome o;
  Real worst = 0.0;
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    for (int i = 0; i < 5; ++i) {
      const PathKernels k(e.connection, test_curve(i));
      for (const Metric g : {Metric::euclidean(4), Metric::minkowski(4)}) {
        const Matrix op = levy_operator_integral(k, g);
        worst = std::max(worst, max_norm(levy_divergence_integral(k, g) - k.table().inverse(k.cells()) * op) / (1.0 + max_norm(op)));
      }
    }
  }
  o.values["identity"] = worst;
  o.pass = worst <= tol::div_identity;
  o.detail = "all catalog connections, 5 curves, both metrics: " + sci(worst) + " (tol " + sci(tol::div_identity) + ")";
  return o;
}

struct TraceRun {
  Real error = 0.0;
  Real exponent = 0.0;
  bool trivial = false;
  Real limit_norm = 0.0;
  Real integral_norm = 0.0;
};

TraceRun trace_run(const std::string& kind, BasisKind basis, std::optional<WeightOperator> weight) {
  const SyntheticKernel k = harness::synthetic_kernel(kind);
  TraceConfig tc;
  tc.metric = Metric::euclidean(k.dim());
  tc.n_max = 512;
  tc.basis = basis;
  tc.weight = std::move(weight);
  const CesaroSeries s = levy_trace_cesaro([&k](const BasisElement& b, int mu) { return k.diagonal(b, mu); }, tc);
  const Matrix integral = k.integral_trace(tc.metric);
  TraceRun r;
  r.error = max_norm(s.limit - integral);
  r.exponent = s.exponent;
  r.trivial = max_norm(s.means.back() - integral) <= 1e-12;
  r.limit_norm = max_norm(s.limit);
  r.integral_norm = max_norm(integral);
  return r;
}

bool in_band(const TraceRun& r) {
  return r.error <= tol::trace_match && (r.trivial || (r.exponent >= tol::exponent_lo && r.exponent <= tol::exponent_hi));
}

// Cesaro trace of synthetic kernel triples against the integral trace, sin basis.
Outcome ac4() {
  Outcome o;
  Real worst = 0.0;
  std::string exps;
  for (const char* kind : {"levy", "volterra", "singular", "mixed"}) {
    const TraceRun r = trace_run(kind, BasisKind::sin, std::nullopt);
    o.values[kind] = {{"error", r.error}, {"exponent", r.exponent}};
    o.pass = o.pass && in_band(r);
    worst = std::max(worst, r.error);
    if (!r.trivial) exps += std::string(exps.empty() ? "" : ", ") + kind + " " + sci(r.exponent);
  }
  o.detail = "n = 512, max error " + sci(worst) + " (tol " + sci(tol::trace_match) + "), exponents " + exps +
             " (band [0.8, 1.2])";
  return o;
}

// Same band for the weighted f basis with R = N.  Expected to fail: R f_n = e_{n-1} / pi, so the
// weighted series converges to the integral trace over pi^2.  R = pi N is reported alongside.
Outcome ac4w() {
  Outcome o;
  const TraceRun lit = trace_run("mixed", BasisKind::f, number_operator());
  const TraceRun scaled = trace_run("mixed", BasisKind::f, scaled_number_operator(std::numbers::pi));
  const Real ratio = lit.limit_norm / lit.integral_norm;
  o.values = {{"error", lit.error}, {"exponent", lit.exponent}, {"ratio", ratio},
              {"scaled_error", scaled.error}, {"scaled_exponent", scaled.exponent}};
  o.pass = in_band(lit);
  o.detail = "R = N: error " + sci(lit.error) + ", limit/integral " + std::to_string(ratio) + " (1/pi^2 = " +
             std::to_string(1.0 / (std::numbers::pi * std::numbers::pi)) + "); R = pi N: error " + sci(scaled.error) +
             ", exponent " + sci(scaled.exponent) + (in_band(scaled) ? " (in band)" : " (out of band)");
  return o;
}

// B^A is closed; a planted non-closed form is detected with the exact defect.
Outcome ac5() {
  Outcome o;
  Real worst = 0.0;
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    const OneForm b = transport_one_form(e.connection);
    for (int i = 0; i < 3; ++i) {
      const Variation u = sin_basis(1 + i, i % 4, 4, kCells), v = sin_basis(2 + i, (i + 1) % 4, 4, kCells);
      worst = std::max(worst, max_norm(closedness_residual(b, test_curve(i), u, v)));
    }
  }
  // B(sigma) u = (int sigma^0 u^1 dt) X has d_u B v - d_v B u = int (u^0 v^1 - v^0 u^1) dt X.
  const Matrix x = su2_generator(2);
  const OneForm planted = [x](const Curve& s, const Variation& u) -> Matrix {
    std::vector<Real> f;
    for (int i = 0; i <= s.cells(); ++i) f.push_back(s.positions()(0, i) * u.positions()(1, i));
    return simpson(f, s.step()) * x;
  };
  const Variation u = mixed_sin({{1, 1.0}, {2, 1.0}}, 4, kCells);
  const Variation v = mixed_sin({{2, 1.0}, {1, 0.5}}, 4, kCells);
  // int (u^0 v^1 - v^0 u^1) = 0.5 - 1
  const Matrix expected = -0.5 * x;
  const Matrix detected = closedness_residual(planted, test_curve(0), u, v);
  const Real planted_err = max_norm(detected - expected);
  o.values = {{"closedness", worst}, {"planted_error", planted_err}, {"planted_norm", max_norm(detected)}};
  o.pass = worst <= tol::closedness && planted_err <= tol::planted_closedness && max_norm(detected) > tol::closedness;
  o.detail = "catalog closedness " + sci(worst) + " (tol " + sci(tol::closedness) + "); planted residual " +
             sci(max_norm(detected)) + " matches its term to " + sci(planted_err) + " (tol " +
             sci(tol::planted_closedness) + ")";
  return o;
}

// Endpoint derivations of the Higgs functional against their closed forms.
Outcome ac6() {
  Outcome o;
  const PathspaceOptions opts;
  Real first = 0.0, nested = 0.0;
  bool converged = true;
  struct Pair {
    const char* connection;
    const char* higgs;
    int curves;
    std::vector<std::pair<int, int>> nested;
  };
  const std::vector<Pair> pairs{{"random_polynomial", "random_polynomial", 3, {{0, 0}, {1, 1}, {0, 1}, {2, 3}}},
                                {"bpst_instanton", "random_polynomial", 2, {{3, 3}}},
                                {"null_plane_wave", "null_wave", 2, {{2, 2}}}};
  for (const Pair& p : pairs) {
    const CatalogEntry e = catalog(p.connection);
    const MatterField phi = higgs_catalog(p.higgs);
    const Connection a = e.connection;
    const CurveFunctional f = [a, phi](const Curve& s) { return higgs_functional(a, phi, s); };
    for (int i = 0; i < p.curves; ++i) {
      const Curve sigma = test_curve(i);
      const TransportTable tab = parallel_transport(a, sigma);
      const Vector end = sigma.position(1.0);
      const MatrixList grad = covariant_gradient(a.jet(end, 1), phi, end);
      for (int nu = 0; nu < 4; ++nu) {
        const EndpointResult r = endpoint_derivation(f, sigma, unit(4, nu), opts.first);
        first = std::max(first, max_norm(r.value - tab.inverse(kCells) * grad[static_cast<std::size_t>(nu)] * tab.final()));
        converged = converged && r.converged;
      }
      if (i > 0) continue;
      const Curve fine = sigma.resampled(2 * opts.inner.ks.back());
      const TransportTable ft = parallel_transport(a, fine);
      const MatrixList hess = covariant_hessian(a.jet(end, 1), phi, end);
      for (const auto& [mu, nu] : p.nested) {
        const EndpointResult r = nested_endpoint_derivation(f, fine, unit(4, mu), unit(4, nu), opts.outer, opts.inner);
        nested = std::max(nested, max_norm(r.value - ft.inverse(ft.cells()) * hess[idx2(mu, nu, 4)] * ft.final()));
        converged = converged && r.converged;
      }
    }
  }
  o.values = {{"first", first}, {"nested", nested}, {"converged", converged}};
  o.pass = first <= tol::endpoint && nested <= tol::endpoint_nested && converged;
  o.detail = "D_nu max " + sci(first) + " (tol " + sci(tol::endpoint) + "), D_mu D_nu max " + sci(nested) + " (tol " +
             sci(tol::endpoint_nested) + ")" + (converged ? "" : ", extrapolation flagged");
  return o;
}

// Compatibility identities for arbitrary fields; the Dirac source is anti-Hermitian and covariant.
Outcome ac7() {
  Outcome o;
  Real higgs = 0.0, dirac = 0.0, source = 0.0;
  PathspaceOptions opts;
  opts.field_equation = false;
  for (const char* name : {"random_polynomial", "bpst_instanton", "abelian_linear"}) {
    const CatalogEntry e = catalog(name);
    const MatterField phi = higgs_catalog("random_polynomial");
    const MatterField psi = dirac_catalog("random_polynomial");
    for (int i = 0; i < 3; ++i) {
      const Curve sigma = test_curve(i);
      const Variation u = sin_basis(1 + i, i % 4, 4, kCells), v = sin_basis(2, (i + 1) % 4, 4, kCells);
      higgs = std::max(higgs, ymh_system_B(e.connection, phi, {0.5, 0.3}, sigma, u, v, opts).norm("compatibility"));
      dirac = std::max(dirac, qcd_residual_pathspace(e.connection, psi, 0.4, sigma, u, opts).norm("compatibility"));
    }
  }
  const GammaSet gamma;
  const MatterField psi = dirac_catalog("random_polynomial");
  const CatalogEntry e = catalog("random_polynomial");
  for (int s = 0; s < 20; ++s) {
    std::srand(static_cast<unsigned>(s + 1));
    const Vector x = Vector::Random(4);
    const Spinor p(psi.value(x));
    const Matrix b = expm(random_su(2, 100 + static_cast<std::uint64_t>(s)));
    for (int mu = 0; mu < 4; ++mu) {
      const Matrix j = dirac_current(p, mu, gamma);
      source = std::max({source, max_norm(j + j.adjoint()), std::abs(j.trace()),
                         max_norm(dirac_current(Spinor(b.adjoint() * p.block()), mu, gamma) - b.adjoint() * j * b)});
    }
  }
  const Matrix b = expm(random_su(2, 77));
  const MatterField rotated(MatterField::Kind::dirac, 4, 2, [psi, b](const Vector& x) { return Matrix(b.adjoint() * psi.value(x)); });
  const Curve sigma = test_curve(0);
  const Matrix j = dirac_current_integral(PathKernels(e.connection, sigma, 1), psi);
  const Matrix jr = dirac_current_integral(PathKernels(gauge_rotate(e.connection, b), sigma, 1), rotated);
  source = std::max({source, max_norm(jr - b.adjoint() * j * b), max_norm(j + j.adjoint())});
  o.values = {{"higgs_compatibility", higgs}, {"dirac_compatibility", dirac}, {"dirac_source", source}};
  o.pass = higgs <= tol::compatibility && dirac <= tol::compatibility && source <= tol::dirac_source;
  o.detail = "d_u Phi + [Bu, Phi] " + sci(higgs) + ", d_u Psi + (Bu) Psi " + sci(dirac) + " (tol " +
             sci(tol::compatibility) + "); Dirac source anti-Hermiticity and covariance " + sci(source) + " (tol " +
             sci(tol::dirac_source) + ")";
  return o;
}

// Unitarity drift and observed finite-difference order of the analytic derivatives.
Outcome ac8() {
  Outcome o;
  Real drift = 0.0;
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    for (int i = 0; i < 10; ++i) drift = std::max(drift, parallel_transport(e.connection, test_curve(i)).drift());
  }
  Real first_order = 1e9, second_order = 1e9;
  for (const char* name : {"random_polynomial", "bpst_instanton"}) {
    const CatalogEntry e = catalog(name);
    const Connection a = e.connection;
    const CurveFunctional u_of = [a](const Curve& c) { return parallel_transport(a, c).final(); };
    for (int i = 0; i < 3; ++i) {
      const Curve sigma = test_curve(i);
      const PathKernels k(a, sigma);
      const Variation u = sin_basis(1 + i, i % 4, 4, kCells), v = sin_basis(2, (i + 2) % 4, 4, kCells);
      const Variation free_end = f_basis(1, (i + 1) % 4, 4, kCells);
      const Matrix d1 = k.first_derivative(free_end), d2 = k.second_derivative(u, v);
      const FiniteDifference coarse{2e-2, false}, fine{1e-2, false};
      const Real e1 = max_norm(directional_derivative(u_of, sigma, free_end, coarse) - d1);
      const Real e2 = max_norm(directional_derivative(u_of, sigma, free_end, fine) - d1);
      const Real s1 = max_norm(mixed_derivative(u_of, sigma, u, v, coarse) - d2);
      const Real s2 = max_norm(mixed_derivative(u_of, sigma, u, v, fine) - d2);
      first_order = std::min(first_order, std::log2(e1 / e2));
      second_order = std::min(second_order, std::log2(s1 / s2));
    }
  }
  o.values = {{"drift", drift}, {"first_order", first_order}, {"second_order", second_order}};
  o.pass = drift <= tol::drift && first_order >= tol::fd_order && second_order >= tol::fd_order;
  std::ostringstream d;
  d << "drift " << sci(drift) << " (tol " << sci(tol::drift) << "); observed FD order first " << std::fixed
    << std::setprecision(2) << first_order << ", second " << second_order << " (min " << tol::fd_order << ")";
  o.detail = d.str();
  return o;
}

// Identical seeds give identical reports; the whole suite fits the time budget.
Outcome ac9(const std::function<Real()>& elapsed, const fs::path& scratch) {
  Outcome o;
  harness::CampaignConfig cfg = harness::parse_config(R"(
[connection]
name = random_polynomial
[higgs]
m = 0.5
l = 0.3
[dirac]
mass = 0.4
[curves]
count = 2
seed = 21
[trace]
n_max = 64
[checks]
enabled = transport_unitarity, first_derivative, second_derivative, AGV1, LLYM, divB, closedness, endpoint, YMH_B, QCD_B, trace_kernels
)",
                                                      false);
  const harness::CampaignReport a = harness::run_verify(cfg, scratch / "run_a");
  cfg.threads = 2;
  const harness::CampaignReport b = harness::run_verify(cfg, scratch / "run_b");
  const bool same = a.to_json(false).dump() == b.to_json(false).dump();
  const Real seconds = elapsed();
  o.values = {{"identical", same}, {"seconds", seconds}};
  o.pass = same && seconds <= tol::suite_seconds;
  std::ostringstream d;
  d << "two campaigns (1 and 2 threads) " << (same ? "identical" : "DIFFER") << " without timing; suite time "
    << std::fixed << std::setprecision(0) << seconds << " s (limit " << tol::suite_seconds << " s)";
  o.detail = d.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levy acceptance suite"};
  std::vector<std::string> only, expect_fail;
  std::string out = "acceptance_out";
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',');
  app.add_option("--expect-fail", expect_fail, "criteria whose failure is documented and expected")->delimiter(',');
  app.add_option("--out", out, "directory for acceptance.json and scratch reports");
  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [t0] { return std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count(); };
  fs::create_directories(out);

  const std::vector<Criterion> criteria{
      {"AC1", "Cesaro and integral Levy operators agree", ac1},
      {"AC2", "vacuum and planted-current Levy equations", ac2},
      {"AC3", "divergence of B against the Levy operator on U", ac3},
      {"AC4", "Cesaro trace of synthetic kernels", ac4},
      {"AC4w", "weighted f basis with R = N", ac4w},
      {"AC5", "closedness of B and a planted defect", ac5},
      {"AC6", "endpoint derivations", ac6},
      {"AC7", "sector identities for all fields", ac7},
      {"AC8", "transport numerics", ac8},
      {"AC9", "determinism and runtime", [&] { return ac9(elapsed, out); }},
  };
  const std::set<std::string> selected(only.begin(), only.end());
  const std::set<std::string> expected(expect_fail.begin(), expect_fail.end());
  for (const std::string& id : selected)
    if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.id == id; })) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }

  nlohmann::json summary = nlohmann::json::object();
  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const Real seconds = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
    const bool xfail = expected.count(c.id) > 0;
    if (o.pass == xfail) ++unexpected;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.title << ": " << o.detail
              << (xfail ? (o.pass ? "  [expected to fail, passed]" : "  [expected failure]") : "") << "  ("
              << std::fixed << std::setprecision(1) << seconds << " s)" << std::endl;
    summary[c.id] = {{"title", c.title}, {"pass", o.pass}, {"expected_failure", xfail}, {"values", o.values}};
  }
  std::ofstream(fs::path(out) / "acceptance.json") << summary.dump(2) << '\n';
  return unexpected == 0 ? 0 : 1;
}
