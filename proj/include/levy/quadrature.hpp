#pragma once

#include <functional>
#include <span>
#include <vector>

#include "levy/types.hpp"

namespace levy {

/// Composite Simpson weights for M (even) uniform cells on [a, b].
std::vector<Real> simpson_weights(int cells, Real a = 0.0, Real b = 1.0);

/// Composite Simpson rule over uniformly spaced samples f_0..f_M, M even.
/// T is any vector-space value type (double, Eigen matrices).
template <class T>
T simpson(std::span<const T> samples, Real h) {
  const auto cells = static_cast<int>(samples.size()) - 1;
  if (cells < 2 || cells % 2 != 0) throw InvalidInput("simpson: need an even number of cells");
  T sum = samples[0] + samples[static_cast<std::size_t>(cells)];
  for (int i = 1; i < cells; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * samples[static_cast<std::size_t>(i)];
  return (h / 3.0) * sum;
}

template <class T>
T simpson(const std::vector<T>& samples, Real h) {
  return simpson(std::span<const T>(samples), h);
}

/// Composite Simpson over samples with one-sided values at nodes, so integrands with
/// jumps at even nodes keep full order.  Odd nodes use the mean of both sides.
template <class T>
T sided_simpson(const std::vector<T>& left, const std::vector<T>& right, Real h) {
  const auto cells = static_cast<int>(left.size()) - 1;
  if (cells < 2 || cells % 2 != 0 || right.size() != left.size())
    throw InvalidInput("sided_simpson: need an even number of cells");
  T sum = right[0] + left[static_cast<std::size_t>(cells)];
  for (int i = 1; i < cells; ++i) {
    const auto k = static_cast<std::size_t>(i);
    sum += (i % 2 == 1 ? 2.0 : 1.0) * (left[k] + right[k]);
  }
  return (h / 3.0) * sum;
}

/// Running integrals I_i = int_0^{t_i} f, Simpson at even nodes and the matching
/// three-point half-panel rule at odd nodes.  Same sided convention as sided_simpson.
template <class T>
std::vector<T> sided_cumulative(const std::vector<T>& left, const std::vector<T>& right, Real h) {
  const auto cells = static_cast<int>(left.size()) - 1;
  if (cells < 2 || cells % 2 != 0 || right.size() != left.size())
    throw InvalidInput("sided_cumulative: need an even number of cells");
  std::vector<T> out(left.size());
  out[0] = T(0.0 * right[0]);
  for (int j = 0; j < cells; j += 2) {
    const auto a = static_cast<std::size_t>(j);
    const T& f0 = right[a];
    const T f1 = T(0.5 * (left[a + 1] + right[a + 1]));
    const T& f2 = left[a + 2];
    out[a + 1] = T(out[a] + (h / 12.0) * (5.0 * f0 + 8.0 * f1 - f2));
    out[a + 2] = T(out[a] + (h / 3.0) * (f0 + 4.0 * f1 + f2));
  }
  return out;
}

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
struct GaussRule {
  Vector nodes;
  Vector weights;
};
GaussRule gauss_legendre(int points);

/// Composite Gauss-Legendre rule on [0, 1]: `panels` equal panels, `points` nodes each.
GaussRule composite_gauss(int panels, int points);

/// Extrapolates values f(h_i) to h -> 0 assuming a polynomial in h (Neville).
/// Returns the extrapolated value and the change contributed by the last level.
template <class T>
std::pair<T, Real> richardson_to_zero(std::span<const Real> steps, std::span<const T> values) {
  if (steps.size() != values.size() || steps.empty()) throw InvalidInput("richardson_to_zero: size mismatch");
  const std::size_t n = values.size();
  std::vector<T> row(values.begin(), values.end());
  T before_last = row[n - 1];
  for (std::size_t level = 1; level < n; ++level) {
    if (level == n - 1) before_last = row[n - 1];
    for (std::size_t i = n - 1; i >= level; --i)
      row[i] = T((steps[i - level] * row[i] - steps[i] * row[i - 1]) / (steps[i - level] - steps[i]));
  }
  Real change = 0.0;
  if constexpr (std::is_arithmetic_v<T>) change = std::abs(row[n - 1] - before_last);
  else change = max_norm(row[n - 1] - before_last);
  return {row[n - 1], change};
}

}  // namespace levy
