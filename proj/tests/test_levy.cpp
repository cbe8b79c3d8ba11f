#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levy/catalog.hpp"
#include "levy/levy.hpp"

using namespace levy;

namespace {

Real relative(const Matrix& a, const Matrix& b) { return max_norm(a - b) / (1.0 + max_norm(b)); }

/// Levy-only synthetic kernel on R^2 with a known integral trace.
SyntheticKernel levy_kernel() {
  SyntheticKernel k(2, 2, 1024, 6);
  k.add_levy(0, 0, [](Real t) { return 1.0 + t * t; }, su2_generator(0));
  k.add_levy(1, 1, [](Real t) { return std::cos(t); }, su2_generator(2));
  k.add_levy(0, 1, [](Real t) { return t; }, su2_generator(1));
  return k;
}

}  // namespace

TEST_CASE("basis profiles") {
  const auto [v, d] = basis_profile({BasisKind::sin, 3, 2.0}, 0.25);
  CHECK(v == doctest::Approx(2.0 * std::sqrt(2.0) * std::sin(0.75 * std::numbers::pi)));
  CHECK(d == doctest::Approx(2.0 * std::sqrt(2.0) * 3.0 * std::numbers::pi * std::cos(0.75 * std::numbers::pi)));
  CHECK(basis_profile({BasisKind::f, 1, 1.0}, 0.4).first == doctest::Approx(0.4));
  CHECK_THROWS_AS(basis_profile({BasisKind::sin, 0, 1.0}, 0.4), InvalidInput);
  CHECK(cesaro_cells(1024, 256) == 4096);
  CHECK(cesaro_cells(8192, 256) == 8192);
  CHECK(cesaro_cells(1024, 48) == 1024);
}

TEST_CASE("tail fit recovers a planted limit and exponent") {
  std::vector<Matrix> means;
  Matrix limit(1, 1), amp(1, 1);
  limit << Complex(0.7, -0.2);
  amp << Complex(1.5, 0.5);
  for (int n = 1; n <= 200; ++n) means.push_back(limit + amp * std::pow(n, -1.3));
  const TailFit f = fit_tail(means, 50, 200);
  CHECK(max_norm(f.limit - limit) < 1e-8);
  CHECK(f.exponent == doctest::Approx(1.3).epsilon(1e-4));
  CHECK(f.residual < 1e-6);
  CHECK(decay_exponent(means, limit, 10, 200) == doctest::Approx(1.3).epsilon(1e-6));
  CHECK_THROWS_AS(fit_tail(means, 10, 11), InvalidInput);
}

TEST_CASE("Cesaro trace of synthetic kernels") {
  const SyntheticKernel k = levy_kernel();
  const Metric g = Metric::euclidean(2);
  const Matrix exact = k.integral_trace(g);
  TraceConfig cfg;
  cfg.metric = g;
  cfg.n_max = 256;
  const DiagonalForm q = [&](const BasisElement& b, int mu) { return k.diagonal(b, mu); };

  SUBCASE("sin basis reaches the integral trace") {
    const CesaroSeries s = levy_trace_cesaro(q, cfg);
    CHECK(s.converged);
    CHECK(relative(s.limit, exact) < 1e-5);
    CHECK(s.exponent > 0.8);
  }
  SUBCASE("unweighted f basis gives zero") {
    cfg.basis = BasisKind::f;
    CHECK(max_norm(levy_trace_cesaro(q, cfg).limit) < 1e-4);
  }
  SUBCASE("weight pi N on the f basis reaches the integral trace") {
    cfg.basis = BasisKind::f;
    cfg.weight = scaled_number_operator(std::numbers::pi);
    CHECK(relative(levy_trace_cesaro(q, cfg).limit, exact) < 1e-5);
  }
  SUBCASE("weight N on the f basis gives the trace over pi^2") {
    cfg.basis = BasisKind::f;
    cfg.weight = number_operator();
    const Matrix m = levy_trace_cesaro(q, cfg).limit;
    CHECK(relative(m, exact / (std::numbers::pi * std::numbers::pi)) < 1e-5);
  }
  SUBCASE("diagonal and bilinear evaluators agree") {
    const Variation u = sin_basis(5, 1, 2, 1024);
    CHECK(max_norm(k.bilinear(u.function(), u.function()) - k.diagonal({BasisKind::sin, 5, 1.0}, 1)) < 1e-10);
  }
}

TEST_CASE("synthetic Volterra and singular parts have zero trace") {
  SyntheticKernel k(2, 2, 1024, 6);
  k.add_volterra(0, 1, [](Real t) { return t; }, [](Real s) { return 1.0 - s; }, su2_generator(0));
  k.add_volterra(1, 1, [](Real t) { return std::sin(t); }, [](Real s) { return s * s; }, su2_generator(1));
  k.add_singular(0, 1, [](Real t) { return 1.0 + t; }, su2_generator(2));
  CHECK_THROWS_AS(k.add_singular(1, 1, [](Real) { return 1.0; }, su2_generator(2)), InvalidInput);
  TraceConfig cfg;
  cfg.metric = Metric::euclidean(2);
  cfg.n_max = 256;
  const CesaroSeries s = levy_trace_cesaro([&](const BasisElement& b, int mu) { return k.diagonal(b, mu); }, cfg);
  CHECK(max_norm(s.limit) < 1e-4);
  CHECK(max_norm(k.integral_trace(cfg.metric)) == 0.0);
}

TEST_CASE("Cesaro Levy operator converges to the integral form") {
  const Curve sigma = random_curve(3, {}, 4, 1024);
  const CatalogEntry e = catalog("random_polynomial");
  TraceConfig cfg;
  cfg.n_max = 128;
  const Matrix integral = levy_operator_on_transport(e.connection, sigma, OperatorMode::integral, cfg).value;
  const OperatorResult c = levy_operator_on_transport(e.connection, sigma, OperatorMode::cesaro, cfg);
  REQUIRE(c.series);
  CHECK(relative(c.value, integral) < 5e-3);
  CHECK(c.series->means.size() == 128);
  CHECK(max_norm(integral) > 1.0);
}

TEST_CASE("Levy Laplacian vanishes on Yang-Mills connections") {
  const Curve sigma = random_curve(7, {}, 4, 1024);
  for (const char* name : {"bpst_instanton", "null_plane_wave", "pure_gauge", "abelian_linear"}) {
    const CatalogEntry e = catalog(name);
    CAPTURE(name);
    const PathKernels k(e.connection, sigma);
    CHECK(max_norm(levy_operator_integral(k, e.metric)) < 1e-8);
    CHECK(max_norm(levy_divergence_integral(k, e.metric)) < 1e-8);
  }
  // the null wave solves the Minkowski equations only
  const CatalogEntry w = catalog("null_plane_wave");
  CHECK(max_norm(levy_operator_integral(PathKernels(w.connection, sigma), Metric::euclidean(4))) > 1e-3);
}

TEST_CASE("divergence of B and the Levy operator on U agree") {
  const Curve sigma = random_curve(2, {}, 4, 1024);
  const CatalogEntry e = catalog("random_polynomial");
  const PathKernels k(e.connection, sigma);
  for (const Metric g : {Metric::euclidean(4), Metric::minkowski(4)}) {
    const Matrix box = levy_operator_integral(k, g);
    CHECK(max_norm(k.table().inverse(k.cells()) * box - levy_divergence_integral(k, g)) < 1e-10);
  }
  TraceConfig cfg;
  cfg.n_max = 64;
  const OperatorResult d = levy_divergence_B(e.connection, sigma, OperatorMode::cesaro, cfg);
  CHECK(relative(d.value, levy_divergence_integral(k, cfg.metric)) < 2e-2);
}

TEST_CASE("endpoint derivation of the transport") {
  // Moving the endpoint along h changes U_{1,0} by -A(sigma(1)) h U_{1,0}.
  const Curve sigma = random_curve(5, {}, 4, 1024);
  const CatalogEntry e = catalog("random_polynomial");
  const CurveFunctional u = [&](const Curve& c) { return parallel_transport(e.connection, c).final(); };
  const Matrix u1 = parallel_transport(e.connection, sigma).final();
  const MatrixList a = e.connection.values(sigma.position(1.0));
  Vector h(4);
  h << 0.3, -1.0, 0.5, 0.2;
  Matrix expected = Matrix::Zero(2, 2);
  for (int mu = 0; mu < 4; ++mu) expected -= h(mu) * a[mu] * u1;
  const EndpointResult r = endpoint_derivation(u, sigma, h);
  CHECK(r.converged);
  CHECK(r.samples.size() == 5);
  CHECK(max_norm(r.value - expected) < 1e-6);

  EndpointOptions wide;
  wide.ks = {32, 64, 128, 256, 1024};
  CHECK_THROWS_AS(endpoint_derivation(u, sigma, h, wide), InvalidInput);
  CHECK_THROWS_AS(endpoint_derivation(u, sigma, Vector::Ones(3)), InvalidInput);
  EndpointOptions inner;
  inner.ks = {64, 128};
  CHECK_THROWS_AS(nested_endpoint_derivation(u, sigma, h, h, EndpointOptions{}, inner), InvalidInput);
}

TEST_CASE("series form of the endpoint functional picks out the endpoint value") {
  // T(u) = (c . u(1) + int w . u) X: the series keeps only c . h.
  const int cells = 4096;
  Vector c(2), h(2);
  c << 0.7, -0.4;
  h << 1.0, 2.0;
  const Matrix x = su2_generator(1);
  const auto t = [&](const Variation& u) -> Matrix {
    Real integral = 0.0;
    for (int i = 0; i <= cells; ++i) {
      const Real s = u.node(i);
      const Real w = (i == 0 || i == cells) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      integral += w * (std::cos(s) * u.positions()(0, i) + s * u.positions()(1, i));
    }
    return (c.dot(u.position(1.0)) + integral / (3.0 * cells)) * x;
  };
  CHECK(max_norm(endpoint_series(t, h, 256, cells) - c.dot(h) * x) < 1e-4);
  CHECK_THROWS_AS(endpoint_series(t, h, 12, cells), InvalidInput);
}
