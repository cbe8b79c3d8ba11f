#include "levy/levy.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "levy/parallel.hpp"

namespace levy {

std::pair<Real, Real> basis_profile(const BasisElement& b, Real t) {
  constexpr Real pi = std::numbers::pi;
  constexpr Real r2 = std::numbers::sqrt2;
  if (b.index < 1) throw InvalidInput("basis index must be >= 1");
  if (b.kind == BasisKind::sin) {
    const Real w = b.index * pi;
    const Real v = (t == 0.0 || t == 1.0) ? 0.0 : r2 * std::sin(w * t);
    return {b.scale * v, b.scale * r2 * w * std::cos(w * t)};
  }
  if (b.index == 1) return {b.scale * t, b.scale};
  const Real w = (b.index - 1) * pi;
  const Real v = (t == 0.0 || t == 1.0) ? 0.0 : r2 * std::sin(w * t) / w;
  return {b.scale * v, b.scale * r2 * std::cos(w * t)};
}

Variation basis_variation(const BasisElement& b, int mu, int dim, int cells) {
  if (mu < 0 || mu >= dim) throw InvalidInput("basis_variation: direction out of range");
  return Variation(scaled_profile(
                       Vector::Unit(dim, mu), [b](Real t) { return basis_profile(b, t).first; },
                       [b](Real t, Side) { return basis_profile(b, t).second; }),
                   cells);
}

WeightOperator number_operator() {
  return {"N", [](int n) { return static_cast<Real>(n - 1); }};
}

WeightOperator scaled_number_operator(Real c) {
  return {std::to_string(c) + "N", [c](int n) { return c * (n - 1); }};
}

void CesaroSeries::write_csv(std::ostream& out, const std::optional<Matrix>& reference) const {
  out << "n,mean_norm,limit_norm";
  if (reference) out << ",error_norm";
  out << '\n';
  out.precision(12);
  const Real ln = limit.size() ? max_norm(limit) : 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    out << i + 1 << ',' << max_norm(means[i]) << ',' << ln;
    if (reference) out << ',' << max_norm(means[i] - *reference);
    out << '\n';
  }
}

namespace {

Real sq_norm(const Matrix& m) { return m.squaredNorm(); }

struct LinearFit {
  Matrix limit, amplitude;
  Real residual2 = 0.0;
};

LinearFit fit_fixed_exponent(const std::vector<Matrix>& means, int first, int last, Real p) {
  const int count = last - first + 1;
  Real xbar = 0.0;
  Matrix mbar = Matrix::Zero(means.front().rows(), means.front().cols());
  for (int n = first; n <= last; ++n) {
    xbar += std::pow(n, -p);
    mbar += means[static_cast<std::size_t>(n - 1)];
  }
  xbar /= count;
  mbar /= static_cast<Real>(count);
  Real sxx = 0.0;
  Matrix sxm = Matrix::Zero(mbar.rows(), mbar.cols());
  for (int n = first; n <= last; ++n) {
    const Real dx = std::pow(n, -p) - xbar;
    sxx += dx * dx;
    sxm += dx * (means[static_cast<std::size_t>(n - 1)] - mbar);
  }
  LinearFit fit;
  fit.amplitude = sxx > 0.0 ? Matrix(sxm / sxx) : Matrix(Matrix::Zero(mbar.rows(), mbar.cols()));
  fit.limit = mbar - xbar * fit.amplitude;
  for (int n = first; n <= last; ++n)
    fit.residual2 += sq_norm(means[static_cast<std::size_t>(n - 1)] - fit.limit - std::pow(n, -p) * fit.amplitude);
  return fit;
}

}  // namespace

TailFit fit_tail(const std::vector<Matrix>& means, int first, int last) {
  if (first < 1 || last > static_cast<int>(means.size()) || last - first < 2)
    throw InvalidInput("fit_tail: need at least three points in range");
  const int count = last - first + 1;
  Real scale2 = 0.0, spread2 = 0.0;
  Matrix mbar = Matrix::Zero(means.front().rows(), means.front().cols());
  for (int n = first; n <= last; ++n) {
    scale2 += sq_norm(means[static_cast<std::size_t>(n - 1)]);
    mbar += means[static_cast<std::size_t>(n - 1)];
  }
  mbar /= static_cast<Real>(count);
  for (int n = first; n <= last; ++n) spread2 += sq_norm(means[static_cast<std::size_t>(n - 1)] - mbar);
  TailFit out;
  const Real scale = std::sqrt(scale2 / count);
  if (spread2 <= 1e-28 * scale2 || scale == 0.0) {
    out.limit = mbar;
    out.amplitude = Matrix::Zero(mbar.rows(), mbar.cols());
    return out;
  }
  // Golden-section search on the exponent.
  const Real g = (std::sqrt(5.0) - 1.0) / 2.0;
  Real a = 0.05, b = 4.0;
  Real c = b - g * (b - a), d = a + g * (b - a);
  Real fc = fit_fixed_exponent(means, first, last, c).residual2;
  Real fd = fit_fixed_exponent(means, first, last, d).residual2;
  for (int it = 0; it < 80 && b - a > 1e-10; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fit_fixed_exponent(means, first, last, c).residual2;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fit_fixed_exponent(means, first, last, d).residual2;
    }
  }
  const Real p = 0.5 * (a + b);
  const LinearFit fit = fit_fixed_exponent(means, first, last, p);
  out.limit = fit.limit;
  out.amplitude = fit.amplitude;
  out.exponent = p;
  out.residual = std::sqrt(fit.residual2 / count) / scale;
  return out;
}

Real decay_exponent(const std::vector<Matrix>& means, const Matrix& reference, int lo, int hi) {
  if (lo < 1 || hi > static_cast<int>(means.size()) || hi <= lo) throw InvalidInput("decay_exponent: bad range");
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = lo; n <= hi; ++n) {
    const Real e = max_norm(means[static_cast<std::size_t>(n - 1)] - reference);
    if (e <= 0.0) continue;
    const Real x = std::log(static_cast<Real>(n)), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<Real>::infinity();
  return -(count * sxy - sx * sy) / (count * sxx - sx * sx);
}

CesaroSeries levy_trace_cesaro(const DiagonalForm& q, const TraceConfig& cfg) {
  if (cfg.n_max < 8) throw InvalidInput("levy_trace_cesaro: n_max must be >= 8");
  const int d = cfg.metric.dim();
  const std::vector<Matrix> terms = parallel_map<Matrix>(cfg.n_max, cfg.threads, [&](int i) -> Matrix {
    const int k = i + 1;
    const Real w = cfg.weight ? cfg.weight->factor(k) : 1.0;
    const BasisElement b{cfg.basis, k, w};
    Matrix sum = cfg.metric.diag(0) * q(b, 0);
    for (int mu = 1; mu < d; ++mu) sum += cfg.metric.diag(mu) * q(b, mu);
    return sum;
  });
  CesaroSeries s;
  s.means.reserve(terms.size());
  Matrix running = Matrix::Zero(terms.front().rows(), terms.front().cols());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    running += terms[i];
    s.means.push_back(running / static_cast<Real>(i + 1));
  }
  if (cfg.extrapolation == TraceConfig::Extrapolation::none) {
    s.limit = s.means.back();
    return s;
  }
  const TailFit fit = fit_tail(s.means, cfg.n_max / 2, cfg.n_max);
  s.limit = fit.limit;
  s.exponent = fit.exponent;
  s.fit_residual = fit.residual;
  s.converged = fit.residual <= cfg.fit_tolerance && (fit.exponent > 0.1 || max_norm(fit.amplitude) == 0.0);
  return s;
}

CesaroSeries levy_trace_cesaro(const BilinearForm& q, const TraceConfig& cfg, int cells) {
  const int d = cfg.metric.dim();
  const DiagonalForm diag = [&](const BasisElement& b, int mu) {
    const Variation u = basis_variation(b, mu, d, cells);
    return q(u, u);
  };
  return levy_trace_cesaro(diag, cfg);
}

Matrix levy_trace_integral(const KernelTriple& k, const Metric& g) {
  if (g.dim() != k.dim()) throw InvalidInput("levy_trace_integral: metric dimension mismatch");
  const int m = k.cells();
  MatrixList left(static_cast<std::size_t>(m) + 1), right(static_cast<std::size_t>(m) + 1);
  const BodyFrame& fr = k.frame();
  for (int i = 0; i <= m; ++i) {
    Matrix l = Matrix::Zero(fr.u_final.rows(), fr.u_final.cols());
    Matrix r = l;
    for (int mu = 0; mu < k.dim(); ++mu) {
      l += g.diag(mu) * fr.l_at(i, mu, mu, Side::left);
      r += g.diag(mu) * fr.l_at(i, mu, mu, Side::right);
    }
    left[static_cast<std::size_t>(i)] = std::move(l);
    right[static_cast<std::size_t>(i)] = std::move(r);
  }
  return k.prefix() * sided_simpson(left, right, 1.0 / m);
}

SyntheticKernel::SyntheticKernel(int dim, int fiber, int panels, int points)
    : dim_(dim), fiber_(fiber), rule_(composite_gauss(panels, points)) {
  if (dim < 1 || fiber < 1) throw InvalidInput("SyntheticKernel: bad shape");
}

Vector SyntheticKernel::sample(const Profile& f) const {
  Vector out(rule_.nodes.size());
  for (Eigen::Index q = 0; q < out.size(); ++q) out(q) = f(rule_.nodes(q));
  return out;
}

void SyntheticKernel::add_volterra(int mu, int nu, Profile a, Profile b, const Matrix& x) {
  volterra_.push_back({mu, nu, sample(a), sample(b), x});
}

void SyntheticKernel::add_levy(int mu, int nu, Profile l, const Matrix& x) {
  levy_.push_back({mu, nu, sample(l), Vector(), x});
}

void SyntheticKernel::add_singular(int mu, int nu, Profile s, const Matrix& x) {
  if (mu == nu) throw InvalidInput("SyntheticKernel: singular part is antisymmetric, mu must differ from nu");
  singular_.push_back({mu, nu, sample(s), Vector(), x});
}

Matrix SyntheticKernel::bilinear(const PathFunction& u, const PathFunction& v) const {
  const Eigen::Index nq = rule_.nodes.size();
  RealMatrix uu(dim_, nq), vv(dim_, nq), du(dim_, nq), dv(dim_, nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const Real t = rule_.nodes(q);
    uu.col(q) = u.position(t);
    vv.col(q) = v.position(t);
    du.col(q) = u.velocity(t, Side::right);
    dv.col(q) = v.velocity(t, Side::right);
  }
  const Vector& w = rule_.weights;
  Matrix out = Matrix::Zero(fiber_, fiber_);
  for (const Term& k : volterra_) {
    const Real ia = (w.array() * k.a.array() * uu.row(k.mu).transpose().array()).sum();
    const Real ib = (w.array() * k.b.array() * vv.row(k.nu).transpose().array()).sum();
    out += ia * ib * k.x;
  }
  for (const Term& k : levy_) {
    Vector f = (uu.row(k.mu).array() * vv.row(k.nu).array()).transpose();
    if (k.mu != k.nu) f += (uu.row(k.nu).array() * vv.row(k.mu).array()).matrix().transpose();
    out += (w.array() * k.a.array() * f.array()).sum() * k.x;
  }
  for (const Term& k : singular_) {
    const Vector f = 0.5 * ((du.row(k.mu).array() * vv.row(k.nu).array() + dv.row(k.mu).array() * uu.row(k.nu).array()) -
                            (du.row(k.nu).array() * vv.row(k.mu).array() + dv.row(k.nu).array() * uu.row(k.mu).array()))
                               .matrix()
                               .transpose();
    out += (w.array() * k.a.array() * f.array()).sum() * k.x;
  }
  return out;
}

Matrix SyntheticKernel::diagonal(const BasisElement& b, int mu) const {
  const Eigen::Index nq = rule_.nodes.size();
  Vector p(nq);
  for (Eigen::Index q = 0; q < nq; ++q) p(q) = basis_profile(b, rule_.nodes(q)).first;
  const Vector& w = rule_.weights;
  Matrix out = Matrix::Zero(fiber_, fiber_);
  for (const Term& k : volterra_) {
    if (k.mu != mu || k.nu != mu) continue;
    const Real ia = (w.array() * k.a.array() * p.array()).sum();
    const Real ib = (w.array() * k.b.array() * p.array()).sum();
    out += ia * ib * k.x;
  }
  for (const Term& k : levy_) {
    if (k.mu != mu || k.nu != mu) continue;
    out += (w.array() * k.a.array() * p.array().square()).sum() * k.x;
  }
  // Singular terms have mu != nu and contribute nothing on the diagonal.
  return out;
}

Matrix SyntheticKernel::integral_trace(const Metric& g) const {
  Matrix out = Matrix::Zero(fiber_, fiber_);
  for (const Term& k : levy_)
    if (k.mu == k.nu) out += g.diag(k.mu) * rule_.weights.dot(k.a) * k.x;
  return out;
}

int cesaro_cells(int cells, int n_max) {
  int m = 16;
  while (m < 16 * n_max) m *= 2;
  return std::max(cells, m);
}

namespace {

// Q(p_mu b, p_mu b) from body-frame data; the singular part vanishes on the diagonal.
DiagonalForm frame_diagonal(std::shared_ptr<const BodyFrame> frame, KernelTriple::Form form) {
  return [frame, form](const BasisElement& b, int mu) -> Matrix {
    const BodyFrame& fr = *frame;
    const int m = fr.cells;
    const Real h = 1.0 / m;
    const auto size = static_cast<std::size_t>(m) + 1;
    std::vector<Real> e(size);
    for (int i = 0; i <= m; ++i) e[static_cast<std::size_t>(i)] = basis_profile(b, static_cast<Real>(i) / m).first;
    MatrixList gl(size), gr(size);
    for (int i = 0; i <= m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      gl[k] = e[k] * fr.w_at(i, mu, Side::left);
      gr[k] = e[k] * fr.w_at(i, mu, Side::right);
    }
    const MatrixList c = sided_cumulative(gl, gr, h);
    MatrixList il(size), ir(size);
    for (int i = 0; i <= m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const Real e2 = e[k] * e[k];
      if (form == KernelTriple::Form::transport) {
        il[k] = 2.0 * gl[k] * c[k] + e2 * fr.l_at(i, mu, mu, Side::left);
        ir[k] = 2.0 * gr[k] * c[k] + e2 * fr.l_at(i, mu, mu, Side::right);
      } else {
        il[k] = gl[k] * c[k] - c[k] * gl[k] + e2 * fr.l_at(i, mu, mu, Side::left);
        ir[k] = gr[k] * c[k] - c[k] * gr[k] + e2 * fr.l_at(i, mu, mu, Side::right);
      }
    }
    const Matrix integral = sided_simpson(il, ir, h);
    return form == KernelTriple::Form::transport ? Matrix(fr.u_final * integral) : integral;
  };
}

OperatorResult cesaro_on_frame(const Connection& a, const Curve& sigma, const TraceConfig& cfg,
                               KernelTriple::Form form) {
  const int cells = cesaro_cells(sigma.cells(), cfg.n_max);
  const PathKernels k(a, cells == sigma.cells() ? sigma : sigma.resampled(cells), 2);
  const KernelTriple triple = form == KernelTriple::Form::transport ? k.kernels() : k.one_form_kernels();
  auto frame = std::shared_ptr<const BodyFrame>(std::make_shared<BodyFrame>(k.frame()));
  OperatorResult out;
  out.series = levy_trace_cesaro(frame_diagonal(frame, form), cfg);
  out.value = out.series->limit;
  return out;
}

}  // namespace

Matrix levy_operator_integral(const PathKernels& k, const Metric& g) { return levy_trace_integral(k.kernels(), g); }

Matrix levy_divergence_integral(const PathKernels& k, const Metric& g) {
  if (g.dim() != k.dim()) throw InvalidInput("levy_divergence_integral: metric dimension mismatch");
  // R^L_{mu mu}(t) = U_{0,t} (-nabla_mu F_{mu lam} sigma'^lam) U_{t,0}, assembled from the table.
  const int m = k.cells();
  const int d = k.dim();
  const TransportTable& tab = k.table();
  const BodyFrame& fr = k.frame();
  MatrixList left(static_cast<std::size_t>(m) + 1), right(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    const Matrix u0t = tab.between(0, i);
    for (Side side : {Side::left, Side::right}) {
      Matrix x = Matrix::Zero(fr.u_final.rows(), fr.u_final.cols());
      for (int mu = 0; mu < d; ++mu) x += g.diag(mu) * (tab.at(i) * fr.l_at(i, mu, mu, side) * tab.inverse(i));
      (side == Side::left ? left : right)[static_cast<std::size_t>(i)] = u0t * x * tab.at(i);
    }
  }
  return sided_simpson(left, right, 1.0 / m);
}

OperatorResult levy_operator_on_transport(const Connection& a, const Curve& sigma, OperatorMode mode,
                                          const TraceConfig& cfg) {
  if (mode == OperatorMode::integral) return {levy_operator_integral(PathKernels(a, sigma, 2), cfg.metric), {}};
  return cesaro_on_frame(a, sigma, cfg, KernelTriple::Form::transport);
}

OperatorResult levy_divergence_B(const Connection& a, const Curve& sigma, OperatorMode mode, const TraceConfig& cfg) {
  if (mode == OperatorMode::integral) return {levy_divergence_integral(PathKernels(a, sigma, 2), cfg.metric), {}};
  return cesaro_on_frame(a, sigma, cfg, KernelTriple::Form::one_form);
}

EndpointResult endpoint_derivation(const CurveFunctional& phi, const Curve& sigma, const Vector& h,
                                   const EndpointOptions& opts) {
  if (opts.ks.empty()) throw InvalidInput("endpoint_derivation: no needle widths");
  if (h.size() != sigma.dim()) throw InvalidInput("endpoint_derivation: direction has wrong dimension");
  EndpointResult out;
  std::vector<Real> steps;
  for (int k : opts.ks) {
    if (2 * k > sigma.cells() || sigma.cells() % k != 0)
      throw InvalidInput("endpoint_derivation: grid too coarse for needle width 1/" + std::to_string(k));
    out.samples.push_back(directional_derivative(phi, sigma, needle(h, k, sigma.cells()), opts.fd));
    steps.push_back(1.0 / k);
  }
  const auto [value, change] = richardson_to_zero<Matrix>(steps, out.samples);
  out.value = value;
  out.change = change;
  out.converged = change <= opts.tolerance;
  return out;
}

EndpointResult nested_endpoint_derivation(const CurveFunctional& phi, const Curve& sigma, const Vector& h_outer,
                                          const Vector& h_inner, const EndpointOptions& outer,
                                          const EndpointOptions& inner) {
  if (inner.ks.empty() || outer.ks.empty() ||
      *std::min_element(inner.ks.begin(), inner.ks.end()) < *std::max_element(outer.ks.begin(), outer.ks.end()))
    throw InvalidInput("nested_endpoint_derivation: inner needles must be no wider than outer ones");
  bool inner_ok = true;
  const CurveFunctional first = [&](const Curve& c) {
    const EndpointResult r = endpoint_derivation(phi, c, h_inner, inner);
    inner_ok = inner_ok && r.converged;
    return r.value;
  };
  EndpointResult out = endpoint_derivation(first, sigma, h_outer, outer);
  out.converged = out.converged && inner_ok;
  return out;
}

Matrix endpoint_series(const std::function<Matrix(const Variation&)>& t, const Vector& h, int terms, int cells) {
  if (terms < 8 || terms % 8 != 0) throw InvalidInput("endpoint_series: terms must be a positive multiple of 8");
  auto along = [&](int n) {
    const BasisElement b{BasisKind::f, n, 1.0};
    return Variation(scaled_profile(
                         h, [b](Real s) { return basis_profile(b, s).first; },
                         [b](Real s, Side) { return basis_profile(b, s).second; }),
                     cells);
  };
  Matrix sum = t(along(1));
  std::vector<Real> steps;
  std::vector<Matrix> partial;
  for (int n = 1; n <= terms; ++n) {
    sum += std::numbers::sqrt2 * (n % 2 == 0 ? 1.0 : -1.0) * t(along(n + 1));
    if (n % (terms / 8) == 0 && (n == terms || n == terms / 2 || n == terms / 4 || n == terms / 8)) {
      steps.push_back(1.0 / n);
      partial.push_back(sum);
    }
  }
  return richardson_to_zero<Matrix>(steps, partial).first;
}

}  // namespace levy
