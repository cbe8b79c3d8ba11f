#include "levy/paths.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace levy {

bool valid_cells(int cells) { return cells >= 16 && (cells & (cells - 1)) == 0; }

GridPath::GridPath(PathFunction fn, int cells) : fn_(std::move(fn)), cells_(cells) {
  if (!valid_cells(cells)) throw InvalidInput("grid size must be a power of two >= 16");
  if (fn_.dim < 1 || !fn_.position || !fn_.velocity) throw InvalidInput("incomplete path function");
  positions_.resize(fn_.dim, cells + 1);
  left_.resize(fn_.dim, cells + 1);
  right_.resize(fn_.dim, cells + 1);
  for (int i = 0; i <= cells; ++i) {
    const Real t = node(i);
    positions_.col(i) = fn_.position(t);
    left_.col(i) = fn_.velocity(t, Side::left);
    right_.col(i) = fn_.velocity(t, Side::right);
  }
  if (!positions_.allFinite() || !left_.allFinite() || !right_.allFinite())
    throw InvalidInput("path has non-finite samples");
}

Curve::Curve(PathFunction fn, int cells) : GridPath(std::move(fn), cells) {
  if (max_norm(positions().col(0)) != 0.0) throw InvalidInput("curve must start at the origin");
}

Variation::Variation(PathFunction fn, int cells) : GridPath(std::move(fn), cells) {
  if (max_norm(positions().col(0)) != 0.0) throw InvalidInput("variation must vanish at t = 0");
  in_e0_ = max_norm(positions().col(cells)) == 0.0;
}

namespace {

PathFunction combine(const PathFunction& a, const PathFunction& b, Real wb) {
  if (a.dim != b.dim) throw InvalidInput("path dimension mismatch");
  PathFunction out;
  out.dim = a.dim;
  out.position = [a, b, wb](Real t) -> Vector { return a.position(t) + wb * b.position(t); };
  out.velocity = [a, b, wb](Real t, Side s) -> Vector { return a.velocity(t, s) + wb * b.velocity(t, s); };
  return out;
}

PathFunction zero_path(int dim) {
  PathFunction out;
  out.dim = dim;
  out.position = [dim](Real) -> Vector { return Vector::Zero(dim); };
  out.velocity = [dim](Real, Side) -> Vector { return Vector::Zero(dim); };
  return out;
}

}  // namespace

Curve displaced(const Curve& sigma, const Variation& u, Real eps) {
  return Curve(combine(sigma.function(), u.function(), eps), sigma.cells());
}

Curve displaced(const Curve& sigma, const Variation& u, Real a, const Variation& v, Real b) {
  return Curve(combine(combine(sigma.function(), u.function(), a), v.function(), b), sigma.cells());
}

Curve restrict(const Curve& sigma, Real r) {
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidInput("restrict: r must lie in [0, 1]");
  if (r == 1.0) return sigma;
  if (r == 0.0) return Curve(zero_path(sigma.dim()), sigma.cells());
  const PathFunction f = sigma.function();
  PathFunction out;
  out.dim = f.dim;
  out.position = [f, r](Real t) -> Vector { return f.position(r * t); };
  out.velocity = [f, r](Real t, Side s) -> Vector { return r * f.velocity(r * t, s); };
  return Curve(out, sigma.cells());
}

PathFunction scaled_profile(const Vector& direction, std::function<Real(Real)> value,
                            std::function<Real(Real, Side)> slope) {
  PathFunction out;
  out.dim = static_cast<int>(direction.size());
  out.position = [direction, value](Real t) -> Vector { return value(t) * direction; };
  out.velocity = [direction, slope](Real t, Side s) -> Vector { return slope(t, s) * direction; };
  return out;
}

namespace {

Vector unit(int mu, int dim) {
  if (mu < 0 || mu >= dim) throw InvalidInput("direction index out of range");
  return Vector::Unit(dim, mu);
}

}  // namespace

PathFunction sin_basis_function(int n, int mu, int dim) {
  if (n < 1) throw InvalidInput("sin_basis: n must be >= 1");
  const Real w = n * std::numbers::pi;
  return scaled_profile(
      unit(mu, dim), [w](Real t) { return (t == 0.0 || t == 1.0) ? 0.0 : std::numbers::sqrt2 * std::sin(w * t); },
      [w](Real t, Side) { return std::numbers::sqrt2 * w * std::cos(w * t); });
}

Variation sin_basis(int n, int mu, int dim, int cells) { return Variation(sin_basis_function(n, mu, dim), cells); }

PathFunction f_basis_function(int n, int mu, int dim) {
  if (n < 1) throw InvalidInput("f_basis: n must be >= 1");
  if (n == 1) return scaled_profile(unit(mu, dim), [](Real t) { return t; }, [](Real, Side) { return 1.0; });
  const Real w = (n - 1) * std::numbers::pi;
  return scaled_profile(
      unit(mu, dim), [w](Real t) { return (t == 0.0 || t == 1.0) ? 0.0 : std::numbers::sqrt2 * std::sin(w * t) / w; },
      [w](Real t, Side) { return std::numbers::sqrt2 * std::cos(w * t); });
}

Variation f_basis(int n, int mu, int dim, int cells) { return Variation(f_basis_function(n, mu, dim), cells); }

Variation needle(const Vector& h, int k, int cells) {
  if (k < 1) throw InvalidInput("needle: k must be positive");
  const Real kink = 1.0 - 1.0 / k;
  const Real kr = k;
  return Variation(scaled_profile(
                       h, [kr, kink](Real t) { return t <= kink ? 0.0 : kr * (t - kink); },
                       [kr, kink](Real t, Side s) {
                         if (t < kink || (t == kink && s == Side::left)) return 0.0;
                         return kr;
                       }),
                   cells);
}

Curve linear_curve(const Vector& v, int cells) {
  return Curve(scaled_profile(v, [](Real t) { return t; }, [](Real, Side) { return 1.0; }), cells);
}

FourierCoefficients random_fourier_coefficients(std::uint64_t seed, int dim, int modes, Real scale, bool drift) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);
  FourierCoefficients out;
  out.c.resize(dim, modes);
  for (int k = 1; k <= modes; ++k)
    for (int mu = 0; mu < dim; ++mu) out.c(mu, k - 1) = scale * normal(rng) / k;
  out.b = Vector::Zero(dim);
  if (drift)
    for (int mu = 0; mu < dim; ++mu) out.b(mu) = scale * normal(rng);
  return out;
}

Curve fourier_curve(const FourierCoefficients& coeffs, int cells) {
  PathFunction f;
  f.dim = static_cast<int>(coeffs.b.size());
  f.position = [coeffs](Real t) -> Vector {
    Vector x = t * coeffs.b;
    if (t == 0.0) return Vector::Zero(coeffs.b.size());
    for (int k = 1; k <= coeffs.c.cols(); ++k) x += std::sin(k * std::numbers::pi * t) * coeffs.c.col(k - 1);
    return x;
  };
  f.velocity = [coeffs](Real t, Side) -> Vector {
    Vector v = coeffs.b;
    for (int k = 1; k <= coeffs.c.cols(); ++k) {
      const Real w = k * std::numbers::pi;
      v += w * std::cos(w * t) * coeffs.c.col(k - 1);
    }
    return v;
  };
  return Curve(f, cells);
}

Real fourier_velocity_norm2(const FourierCoefficients& coeffs) {
  Real s = coeffs.b.squaredNorm();
  for (int k = 1; k <= coeffs.c.cols(); ++k) {
    const Real w = k * std::numbers::pi;
    s += 0.5 * w * w * coeffs.c.col(k - 1).squaredNorm();
  }
  return s;
}

namespace {

Curve piecewise_linear_curve(std::uint64_t seed, int pieces, Real scale, int dim, int cells) {
  if (pieces < 1 || (pieces & (pieces - 1)) != 0 || 2 * pieces > cells)
    throw InvalidInput("piecewise_linear: pieces must be a power of two dividing cells / 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);
  RealMatrix slopes(dim, pieces);
  for (int j = 0; j < pieces; ++j)
    for (int mu = 0; mu < dim; ++mu) slopes(mu, j) = scale * normal(rng);
  RealMatrix knots = RealMatrix::Zero(dim, pieces + 1);
  for (int j = 0; j < pieces; ++j) knots.col(j + 1) = knots.col(j) + slopes.col(j) / pieces;
  PathFunction f;
  f.dim = dim;
  auto piece_of = [pieces](Real t, Side s) {
    const Real x = t * pieces;
    int j = static_cast<int>(std::floor(x));
    if (s == Side::left && x == j) --j;
    return std::clamp(j, 0, pieces - 1);
  };
  f.position = [=](Real t) -> Vector {
    const int j = piece_of(t, Side::right);
    return knots.col(j) + (t - static_cast<Real>(j) / pieces) * slopes.col(j);
  };
  f.velocity = [=](Real t, Side s) -> Vector { return slopes.col(piece_of(t, s)); };
  return Curve(f, cells);
}

}  // namespace

Curve random_curve(std::uint64_t seed, const RandomCurveSpec& spec, int dim, int cells) {
  if (spec.kind == RandomCurveSpec::Kind::piecewise_linear)
    return piecewise_linear_curve(seed, spec.modes, spec.scale, dim, cells);
  return fourier_curve(random_fourier_coefficients(seed, dim, spec.modes, spec.scale, spec.drift), cells);
}

PathFunction pchip_path(const RealMatrix& samples) {
  const auto cells = static_cast<int>(samples.cols()) - 1;
  if (cells < 1) throw InvalidInput("pchip_path: need at least two samples");
  const Real h = 1.0 / cells;
  const auto d = static_cast<int>(samples.rows());
  RealMatrix slope(d, cells + 1);
  for (int mu = 0; mu < d; ++mu) {
    Vector delta(cells);
    for (int i = 0; i < cells; ++i) delta(i) = (samples(mu, i + 1) - samples(mu, i)) / h;
    for (int i = 1; i < cells; ++i) {
      const Real a = delta(i - 1), b = delta(i);
      slope(mu, i) = (a * b <= 0.0) ? 0.0 : 2.0 / (1.0 / a + 1.0 / b);
    }
    auto end_slope = [](Real d0, Real d1) {
      Real s = 1.5 * d0 - 0.5 * d1;
      if (s * d0 <= 0.0) return 0.0;
      if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) s = 3.0 * d0;
      return s;
    };
    slope(mu, 0) = cells > 1 ? end_slope(delta(0), delta(1)) : delta(0);
    slope(mu, cells) = cells > 1 ? end_slope(delta(cells - 1), delta(cells - 2)) : delta(0);
  }
  auto locate = [cells](Real t) {
    const int i = std::clamp(static_cast<int>(std::floor(t * cells)), 0, cells - 1);
    return i;
  };
  PathFunction f;
  f.dim = d;
  f.position = [=](Real t) -> Vector {
    const int i = locate(t);
    const Real s = (t - static_cast<Real>(i) / cells) / h;
    const Real h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const Real h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * samples.col(i) + h10 * h * slope.col(i) + h01 * samples.col(i + 1) + h11 * h * slope.col(i + 1);
  };
  f.velocity = [=](Real t, Side) -> Vector {
    const int i = locate(t);
    const Real s = (t - static_cast<Real>(i) / cells) / h;
    const Real d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
    const Real d01 = -d00, d11 = 3 * s * s - 2 * s;
    return (d00 * samples.col(i) + d01 * samples.col(i + 1)) / h + d10 * slope.col(i) + d11 * slope.col(i + 1);
  };
  return f;
}

void write_curve_csv(const Curve& sigma, std::ostream& out) {
  out << "t";
  for (int mu = 0; mu < sigma.dim(); ++mu) out << ",x" << mu;
  out << '\n';
  out.precision(17);
  for (int i = 0; i <= sigma.cells(); ++i) {
    out << sigma.node(i);
    for (int mu = 0; mu < sigma.dim(); ++mu) out << ',' << sigma.positions()(mu, i);
    out << '\n';
  }
}

Curve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("curve csv: empty input");
  std::vector<std::vector<Real>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Real> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidInput("curve csv: bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw InvalidInput("curve csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2 || rows.front().size() < 2) throw InvalidInput("curve csv: too few rows or columns");
  const auto cells = static_cast<int>(rows.size()) - 1;
  const auto d = static_cast<int>(rows.front().size()) - 1;
  RealMatrix samples(d, cells + 1);
  for (int i = 0; i <= cells; ++i) {
    if (std::abs(rows[static_cast<std::size_t>(i)][0] - static_cast<Real>(i) / cells) > 1e-12)
      throw InvalidInput("curve csv: nodes must be uniform on [0, 1]");
    for (int mu = 0; mu < d; ++mu) samples(mu, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(mu + 1)];
  }
  return Curve(pchip_path(samples), cells);
}

}  // namespace levy
