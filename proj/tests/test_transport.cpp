#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/catalog.hpp"
#include "levy/quadrature.hpp"
#include "levy/transport.hpp"

using namespace levy;

namespace {

CurveFunctional transport_of(const Connection& a) {
  return [a](const Curve& c) { return parallel_transport(a, c).final(); };
}

}  // namespace

TEST_CASE("transport stays unitary on every catalog connection") {
  const Curve sigma = random_curve(11, {}, 4, 1024);
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    CAPTURE(name);
    const TransportTable t = parallel_transport(e.connection, sigma);
    CHECK(t.drift() <= 1e-10);
    CHECK(max_norm(t.at(0) - Matrix::Identity(2, 2)) == 0.0);
    CHECK(max_norm(t.between(700, 300) * t.between(300, 100) - t.between(700, 100)) < 1e-12);
    CHECK(max_norm(t.inverse(500) * t.at(500) - Matrix::Identity(2, 2)) < 1e-12);
  }
}

TEST_CASE("abelian transport is the exponential of the line integral") {
  const CatalogEntry e = catalog("abelian_linear");
  const Curve sigma = random_curve(2, {}, 4, 1024);
  const Curve fine = sigma.resampled(16384);
  std::vector<Matrix> integrand;
  for (int i = 0; i <= 16384; ++i) {
    const MatrixList a = e.connection.values(fine.positions().col(i));
    Matrix s = Matrix::Zero(2, 2);
    for (int mu = 0; mu < 4; ++mu) s += a[mu] * fine.velocities(Side::right)(mu, i);
    integrand.push_back(s);
  }
  const Matrix exact = expm(Matrix(-simpson(integrand, 1.0 / 16384)));
  CHECK(max_norm(parallel_transport(e.connection, sigma).final() - exact) < 1e-10);
}

TEST_CASE("RK4 converges at fourth order") {
  const CatalogEntry e = catalog("random_polynomial");
  const Curve sigma = random_curve(4, {}, 4, 64);
  const Matrix ref = parallel_transport(e.connection, sigma.resampled(4096)).final();
  const Real e1 = max_norm(parallel_transport(e.connection, sigma.resampled(64)).final() - ref);
  const Real e2 = max_norm(parallel_transport(e.connection, sigma.resampled(128)).final() - ref);
  CHECK(std::log2(e1 / e2) > 3.5);
}

TEST_CASE("transport is gauge covariant") {
  const CatalogEntry e = catalog("random_polynomial");
  const Matrix b = expm(random_su(2, 5));
  const Curve sigma = random_curve(5, {}, 4, 512);
  const Matrix u = parallel_transport(e.connection, sigma).final();
  const Matrix r = parallel_transport(gauge_rotate(e.connection, b), sigma).final();
  CHECK(max_norm(r - b.adjoint() * u * b) < 1e-12);
}

TEST_CASE("excessive drift is rejected") {
  const Connection big(1, 2, [](const Vector& x) { return MatrixList{Matrix(200.0 * (1.0 + x(0) * x(0)) * su2_generator(0))}; });
  CHECK_THROWS_AS(parallel_transport(big, linear_curve(Vector::Ones(1), 16)), NumericalError);
  CHECK_THROWS_AS(parallel_transport(big, random_curve(1, {}, 2, 16)), InvalidInput);
}

TEST_CASE("first and second derivatives agree with finite differences") {
  const Curve sigma = random_curve(11, {}, 4, 1024);
  const Variation u = sin_basis(2, 1, 4, 1024), v = sin_basis(3, 2, 4, 1024);
  const Variation w = needle(Vector::Ones(4), 8, 1024);
  for (const char* name : {"random_polynomial", "bpst_instanton"}) {
    const CatalogEntry e = catalog(name);
    CAPTURE(name);
    const PathKernels k(e.connection, sigma);
    const CurveFunctional f = transport_of(e.connection);
    CHECK(max_norm(k.first_derivative(w) - directional_derivative(f, sigma, w)) < 1e-7);
    CHECK(max_norm(k.first_derivative(u) - first_derivative(e.connection, sigma, u)) < 1e-14);
    CHECK(max_norm(k.second_derivative(u, v) - mixed_derivative(f, sigma, u, v)) < 1e-6);
    CHECK(max_norm(k.second_derivative(u, v) - k.second_derivative(v, u)) < 1e-10);
    CHECK(max_norm(k.one_form(u) - k.one_form_e0(u)) < 1e-10);
    CHECK(max_norm(k.one_form(w) - one_form_B(e.connection, sigma, w)) < 1e-14);
    // B^A(sigma) = U_{0,1} U' takes values in su(N)
    CHECK(is_anti_hermitian(k.one_form(w), 1e-12));
    const CurveFunctional bv = [&](const Curve& c) { return PathKernels(e.connection, c, 1).one_form(v); };
    CHECK(max_norm(k.one_form_derivative(u, v) - directional_derivative(bv, sigma, u)) < 1e-6);
  }
}

TEST_CASE("kernel decomposition reproduces the second derivative") {
  const CatalogEntry e = catalog("random_polynomial");
  const Curve sigma = random_curve(6, {}, 4, 256);
  const PathKernels k(e.connection, sigma);
  const Variation u = sin_basis(1, 0, 4, 256), v = sin_basis(2, 3, 4, 256);
  CHECK(max_norm(k.kernels().bilinear(u, v) - k.second_derivative(u, v)) < 1e-10);
  // K^S is antisymmetric, K^L symmetric
  CHECK(max_norm(k.kernels().singular(1, 2, 40) + k.kernels().singular(2, 1, 40)) < 1e-14);
  CHECK(max_norm(k.kernels().levy(1, 2, 40) - k.kernels().levy(2, 1, 40)) < 1e-14);
}

TEST_CASE("transport one-form is closed and matches the 2-form route") {
  const Curve sigma = random_curve(11, {}, 4, 1024);
  const Variation u = sin_basis(2, 1, 4, 1024), v = sin_basis(3, 2, 4, 1024);
  const CatalogEntry e = catalog("random_polynomial");
  CHECK(max_norm(closedness_residual(transport_one_form(e.connection), sigma, u, v)) < 1e-6);
  const Curve s64 = sigma.resampled(64);
  const Variation u64 = u.resampled(64);
  CHECK(max_norm(one_form_B_two_form(e.connection, s64, u64) - PathKernels(e.connection, s64, 1).one_form(u64)) < 1e-5);
}

TEST_CASE("flat connections have vanishing one-form on E_0") {
  const CatalogEntry e = catalog("pure_gauge");
  const Curve sigma = random_curve(8, {}, 4, 512);
  const PathKernels k(e.connection, sigma);
  CHECK(max_norm(k.one_form_e0(sin_basis(2, 1, 4, 512))) < 1e-12);
  CHECK(max_norm(k.second_derivative(sin_basis(1, 0, 4, 512), sin_basis(2, 3, 4, 512))) < 1e-10);
}

TEST_CASE("tag and order requirements") {
  const CatalogEntry e = catalog("random_polynomial");
  const Curve sigma = random_curve(1, {}, 4, 64);
  const PathKernels first(e.connection, sigma, 1);
  const Variation u = sin_basis(1, 0, 4, 64);
  const Variation f1 = f_basis(1, 0, 4, 64);
  CHECK_THROWS_AS(first.second_derivative(u, u), InvalidInput);
  const PathKernels k(e.connection, sigma);
  CHECK_THROWS_AS(k.second_derivative(f1, u), InvalidInput);
  CHECK_THROWS_AS(k.one_form_e0(f1), InvalidInput);
  CHECK_THROWS_AS(k.first_derivative(sin_basis(1, 0, 4, 128)), InvalidInput);
  CHECK_THROWS_AS(PathKernels(e.connection, sigma, 3), InvalidInput);
}
