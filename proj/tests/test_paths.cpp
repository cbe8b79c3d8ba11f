#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "levy/paths.hpp"
#include "levy/quadrature.hpp"

using namespace levy;

TEST_CASE("grid sizes are powers of two") {
  CHECK(valid_cells(16));
  CHECK(valid_cells(1024));
  CHECK_FALSE(valid_cells(8));
  CHECK_FALSE(valid_cells(48));
  CHECK_THROWS_AS(linear_curve(Vector::Ones(2), 24), InvalidInput);
}

TEST_CASE("curves start at the origin and variations vanish at zero") {
  PathFunction shifted{2, [](Real t) { return Vector::Constant(2, 1.0 + t); },
                       [](Real, Side) { return Vector::Ones(2); }};
  CHECK_THROWS_AS(Curve(shifted, 16), InvalidInput);
  CHECK_THROWS_AS(Variation(shifted, 16), InvalidInput);
}

TEST_CASE("E_0 membership") {
  CHECK(sin_basis(3, 1, 4, 64).in_e0());
  CHECK(f_basis(2, 0, 4, 64).in_e0());
  CHECK_FALSE(f_basis(1, 0, 4, 64).in_e0());
  CHECK_FALSE(needle(Vector::Ones(4), 8, 64).in_e0());
}

TEST_CASE("sin basis is orthonormal in L^2 and f_n' is a cosine") {
  const int cells = 256;
  const Variation a = sin_basis(2, 0, 1, cells), b = sin_basis(5, 0, 1, cells);
  std::vector<Real> aa, ab;
  for (int i = 0; i <= cells; ++i) {
    aa.push_back(a.positions()(0, i) * a.positions()(0, i));
    ab.push_back(a.positions()(0, i) * b.positions()(0, i));
  }
  CHECK(simpson(aa, 1.0 / cells) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(simpson(ab, 1.0 / cells)) < 1e-8);
  const Variation f = f_basis(4, 0, 1, cells);
  for (Real t : {0.1, 0.37, 0.9})
    CHECK(f.velocity(t)(0) == doctest::Approx(std::sqrt(2.0) * std::cos(3.0 * std::numbers::pi * t)).epsilon(1e-14));
  CHECK(f_basis(1, 0, 1, cells).position(0.3)(0) == doctest::Approx(0.3));
}

TEST_CASE("needles ramp over the last 1/k with one-sided slopes at the kink") {
  Vector h(2);
  h << 1.0, -2.0;
  const Variation u = needle(h, 8, 64);
  CHECK(max_norm(u.position(1.0) - h) < 1e-15);
  CHECK(max_norm(u.position(0.8)) == 0.0);
  CHECK(max_norm(u.velocity(0.875, Side::left)) == 0.0);
  CHECK(max_norm(u.velocity(0.875, Side::right) - 8.0 * h) < 1e-14);
  CHECK(max_norm(u.velocities(Side::right).col(56) - 8.0 * h) < 1e-14);
}

TEST_CASE("displacement and restriction") {
  const Curve sigma = random_curve(3, {}, 3, 64);
  const Variation u = sin_basis(1, 2, 3, 64);
  const Curve moved = displaced(sigma, u, 0.25);
  CHECK(max_norm(moved.position(0.4) - sigma.position(0.4) - 0.25 * u.position(0.4)) < 1e-15);
  const Curve half = restrict(sigma, 0.5);
  CHECK(max_norm(half.position(1.0) - sigma.position(0.5)) < 1e-15);
  CHECK(max_norm(half.velocity(0.3) - 0.5 * sigma.velocity(0.15)) < 1e-14);
  CHECK_THROWS_AS(restrict(sigma, 1.5), InvalidInput);
}

TEST_CASE("random curves are deterministic in the seed") {
  const Curve a = random_curve(42, {}, 4, 64), b = random_curve(42, {}, 4, 64), c = random_curve(43, {}, 4, 64);
  CHECK(max_norm(a.positions() - b.positions()) == 0.0);
  CHECK(max_norm(a.positions() - c.positions()) > 0.0);
  RandomCurveSpec pl;
  pl.kind = RandomCurveSpec::Kind::piecewise_linear;
  pl.modes = 8;
  const Curve p = random_curve(5, pl, 2, 64);
  CHECK(max_norm(p.velocity(0.25, Side::left) - p.velocity(0.24, Side::right)) < 1e-14);
  pl.modes = 3;
  CHECK_THROWS_AS(random_curve(5, pl, 2, 64), InvalidInput);
}

TEST_CASE("Fourier velocity norm matches quadrature") {
  const FourierCoefficients c = random_fourier_coefficients(9, 3, 4, 0.5, true);
  const Curve sigma = fourier_curve(c, 1024);
  std::vector<Real> v2;
  for (int i = 0; i <= 1024; ++i) v2.push_back(sigma.velocities(Side::right).col(i).squaredNorm());
  CHECK(simpson(v2, 1.0 / 1024) == doctest::Approx(fourier_velocity_norm2(c)).epsilon(1e-10));
}

TEST_CASE("PCHIP reproduces samples, stays monotone and round-trips through CSV") {
  RealMatrix s(1, 5);
  s << 0.0, 0.1, 0.1, 0.5, 2.0;
  const PathFunction p = pchip_path(s);
  for (int i = 0; i < 5; ++i) CHECK(p.position(i / 4.0)(0) == doctest::Approx(s(0, i)));
  Real prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const Real x = p.position(i / 100.0)(0);
    CHECK(x >= prev - 1e-15);
    prev = x;
  }
  CHECK(p.position(0.3)(0) == doctest::Approx(0.1));  // flat segment stays flat

  const Curve sigma = random_curve(1, {}, 2, 32);
  std::stringstream buf;
  write_curve_csv(sigma, buf);
  const Curve back = read_curve_csv(buf);
  CHECK(back.cells() == 32);
  CHECK(max_norm(back.positions() - sigma.positions()) < 1e-14);

  std::stringstream bad("t,x0\n0,0\n0.7,1\n1,2\n");
  CHECK_THROWS_AS(read_curve_csv(bad), InvalidInput);
  std::stringstream garbage("t,x0\n0,abc\n");
  CHECK_THROWS_AS(read_curve_csv(garbage), InvalidInput);
}
