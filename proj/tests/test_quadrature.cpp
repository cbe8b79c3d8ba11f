#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levy/quadrature.hpp"

using namespace levy;

namespace {

std::vector<Real> samples(int cells, const std::function<Real(Real)>& f) {
  std::vector<Real> out;
  for (int i = 0; i <= cells; ++i) out.push_back(f(static_cast<Real>(i) / cells));
  return out;
}

}  // namespace

TEST_CASE("Simpson is exact for cubics and fourth order otherwise") {
  const auto cubic = [](Real t) { return 1.0 - 2.0 * t + 3.0 * t * t + 4.0 * t * t * t; };
  CHECK(simpson(samples(16, cubic), 1.0 / 16) == doctest::Approx(1.0 - 1.0 + 1.0 + 1.0).epsilon(1e-14));
  const auto f = [](Real t) { return std::exp(t); };
  const Real e1 = std::abs(simpson(samples(16, f), 1.0 / 16) - (std::numbers::e - 1.0));
  const Real e2 = std::abs(simpson(samples(32, f), 1.0 / 32) - (std::numbers::e - 1.0));
  CHECK(std::log2(e1 / e2) > 3.8);
  CHECK_THROWS_AS(simpson(samples(3, f), 1.0 / 3), InvalidInput);
}

TEST_CASE("Simpson weights sum to the interval length") {
  Real sum = 0.0;
  for (Real w : simpson_weights(64, 0.0, 2.0)) sum += w;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("sided rules keep full order across a kink at an even node") {
  // f jumps at t = 1/2, node 8 of 16.
  const int cells = 16;
  std::vector<Real> left, right;
  for (int i = 0; i <= cells; ++i) {
    const Real t = static_cast<Real>(i) / cells;
    left.push_back(t <= 0.5 ? t * t : 1.0 + t);
    right.push_back(t < 0.5 ? t * t : 1.0 + t);
  }
  const Real exact = 1.0 / 24.0 + 0.5 + (0.5 - 0.125);
  CHECK(sided_simpson(left, right, 1.0 / cells) == doctest::Approx(exact).epsilon(1e-14));
  const std::vector<Real> run = sided_cumulative(left, right, 1.0 / cells);
  CHECK(run.back() == doctest::Approx(exact).epsilon(1e-14));
  CHECK(run[8] == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  // odd nodes: the half-panel rule is exact for quadratics
  CHECK(run[3] == doctest::Approx(std::pow(3.0 / 16, 3) / 3).epsilon(1e-13));
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
  const GaussRule g = gauss_legendre(5);
  Real s = 0.0;
  for (int i = 0; i < 5; ++i) s += g.weights(i) * std::pow(g.nodes(i), 8);
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  const GaussRule c = composite_gauss(8, 4);
  CHECK(c.nodes.size() == 32);
  Real t = 0.0;
  for (int i = 0; i < c.nodes.size(); ++i) t += c.weights(i) * std::sin(std::numbers::pi * c.nodes(i));
  CHECK(t == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("Neville extrapolation removes polynomial error terms") {
  const std::vector<Real> h{0.4, 0.2, 0.1, 0.05};
  std::vector<Real> v;
  for (Real x : h) v.push_back(3.0 + 2.0 * x - 5.0 * x * x + x * x * x);
  const auto [value, change] = richardson_to_zero<Real>(h, v);
  CHECK(value == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(change < 1e-2);
  CHECK_THROWS_AS(richardson_to_zero<Real>(std::vector<Real>{0.1}, std::vector<Real>{}), InvalidInput);
}
