#include "levy/quadrature.hpp"

#include <cmath>

namespace levy {

std::vector<Real> simpson_weights(int cells, Real a, Real b) {
  if (cells < 2 || cells % 2 != 0) throw InvalidInput("simpson_weights: need an even number of cells");
  const Real h = (b - a) / cells;
  std::vector<Real> w(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) {
    const Real c = (i == 0 || i == cells) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[static_cast<std::size_t>(i)] = c * h / 3.0;
  }
  return w;
}

GaussRule gauss_legendre(int points) {
  if (points < 1) throw InvalidInput("gauss_legendre: need at least one point");
  // Jacobi matrix of the Legendre recurrence; eigenvalues are the nodes.
  RealMatrix jacobi = RealMatrix::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const Real beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(jacobi);
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

GaussRule composite_gauss(int panels, int points) {
  const GaussRule base = gauss_legendre(points);
  GaussRule rule;
  rule.nodes.resize(panels * points);
  rule.weights.resize(panels * points);
  const Real width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    for (int k = 0; k < points; ++k) {
      rule.nodes(p * points + k) = (p + 0.5 * (base.nodes(k) + 1.0)) * width;
      rule.weights(p * points + k) = 0.5 * width * base.weights(k);
    }
  }
  return rule;
}

}  // namespace levy
