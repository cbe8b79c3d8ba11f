#include "levy/sectors.hpp"

#include <algorithm>
#include <sstream>

namespace levy {

namespace {

Vector unit(int dim, int mu) {
  Vector e = Vector::Zero(dim);
  e(mu) = 1.0;
  return e;
}

std::string point_label(const Vector& x) {
  std::ostringstream out;
  out.precision(6);
  out << "x=(";
  for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? "," : "") << x(i);
  out << ")";
  return out.str();
}

Real trace_norm2(const Matrix& phi) { return (phi.adjoint() * phi).trace().real(); }

void require_e0(const Variation& u, const char* what) {
  if (!u.in_e0()) throw InvalidInput(std::string(what) + ": variation must vanish at t = 1");
}

/// Smallest grid that carries every needle in `opts`.
int needle_cells(const EndpointOptions& opts) {
  int k = 0;
  for (int v : opts.ks) k = std::max(k, v);
  return 2 * k;
}

Curve at_least(const Curve& sigma, int cells) { return sigma.cells() >= cells ? sigma : sigma.resampled(cells); }

CurveFunctional higgs_functional_of(const Connection& a, const MatterField& phi) {
  return [a, phi](const Curve& c) { return higgs_functional(a, phi, c); };
}

CurveFunctional dirac_functional_of(const Connection& a, const MatterField& psi) {
  return [a, psi](const Curve& c) { return dirac_functional(a, psi, c).block(); };
}

/// g^{mu nu} D_mu D_nu Phi by nested endpoint derivations, and its closed form
/// U_{0,1} (g^{mu nu} nabla_mu nabla_nu phi)(sigma(1)) U_{1,0}.
std::pair<Matrix, Matrix> higgs_box(const Connection& a, const MatterField& phi, const Curve& sigma,
                                    const PathspaceOptions& opts) {
  const Curve fine = at_least(sigma, std::max(needle_cells(opts.inner), needle_cells(opts.outer)));
  const CurveFunctional f = higgs_functional_of(a, phi);
  const TransportTable tab = parallel_transport(a, fine);
  const Vector end = fine.position(1.0);
  const ConnectionJet jet = a.jet(end, 1);
  const MatrixList hess = covariant_hessian(jet, phi, end);
  const int d = fine.dim();
  Matrix nested = Matrix::Zero(a.fiber(), a.fiber());
  Matrix closed = nested;
  for (int mu = 0; mu < d; ++mu) {
    const Vector e = unit(d, mu);
    nested += opts.metric.diag(mu) * nested_endpoint_derivation(f, fine, e, e, opts.outer, opts.inner).value;
    closed += opts.metric.diag(mu) * hess[idx2(mu, mu, d)];
  }
  return {nested, tab.inverse(tab.cells()) * closed * tab.final()};
}

Matrix higgs_potential_term(const Matrix& phi, const HiggsParams& p) {
  return (p.m * p.m - p.l * trace_norm2(phi)) * phi;
}

}  // namespace

HiggsParams::HiggsParams(Real mass, Real coupling) : m(mass), l(coupling) {
  if (!(m >= 0.0) || !(l >= 0.0)) throw InvalidInput("HiggsParams: m and l must be non-negative");
}

void SectorResidual::add(std::string name, Matrix value) {
  if (!value.allFinite()) throw NumericalError("SectorResidual: non-finite component " + name);
  components.emplace_back(std::move(name), std::move(value));
}

const Matrix& SectorResidual::at(const std::string& name) const {
  for (const auto& [n, value] : components)
    if (n == name) return value;
  throw InvalidInput("SectorResidual: no component " + name);
}

Real SectorResidual::max_norm() const {
  Real out = 0.0;
  for (const auto& c : components) out = std::max(out, levy::max_norm(c.second));
  return out;
}

nlohmann::json to_json(const SectorResidual& r) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [name, m] : r.components) {
    std::vector<Real> re, im;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        re.push_back(m(i, j).real());
        im.push_back(m(i, j).imag());
      }
    comps.push_back({{"name", name},
                     {"norm", max_norm(m)},
                     {"rows", m.rows()},
                     {"cols", m.cols()},
                     {"re", re},
                     {"im", im}});
  }
  return {{"location", r.location}, {"components", comps}};
}

Matrix transported_current(const PathKernels& k, const CurrentFn& j) {
  const Curve& sigma = k.curve();
  const TransportTable& tab = k.table();
  const int m = sigma.cells();
  const auto n = tab.final().rows();
  std::vector<Matrix> left(static_cast<std::size_t>(m + 1)), right(left.size());
  for (int i = 0; i <= m; ++i) {
    const MatrixList ji = j(sigma.positions().col(i));
    Matrix l = Matrix::Zero(n, n);
    Matrix r = l;
    for (int nu = 0; nu < sigma.dim(); ++nu) {
      l += sigma.velocities(Side::left)(nu, i) * ji[static_cast<std::size_t>(nu)];
      r += sigma.velocities(Side::right)(nu, i) * ji[static_cast<std::size_t>(nu)];
    }
    left[static_cast<std::size_t>(i)] = tab.inverse(i) * l * tab.at(i);
    right[static_cast<std::size_t>(i)] = tab.inverse(i) * r * tab.at(i);
  }
  return sided_simpson(left, right, sigma.step());
}

Matrix higgs_functional(const TransportTable& tab, const MatterField& phi, const Curve& sigma) {
  return tab.inverse(tab.cells()) * phi.value(sigma.position(1.0)) * tab.final();
}

Matrix higgs_functional(const Connection& a, const MatterField& phi, const Curve& sigma) {
  return higgs_functional(parallel_transport(a, sigma), phi, sigma);
}

SectorResidual ymh_residual_pointwise(const Connection& a, const MatterField& phi, const HiggsParams& p,
                                      const Vector& x, const Metric& g) {
  const int d = a.dim();
  const ConnectionJet jet = a.jet(x, 2);
  const Matrix value = phi.value(x);
  const MatrixList grad = covariant_gradient(jet, phi, x);
  const MatrixList hess = covariant_hessian(jet, phi, x);
  const MatrixList div = ym_divergence(jet, g);

  SectorResidual out;
  out.location = point_label(x);
  Matrix eq1 = -higgs_potential_term(value, p);
  for (int mu = 0; mu < d; ++mu) eq1 += g.diag(mu) * hess[idx2(mu, mu, d)];
  out.add("higgs_eq1", eq1);
  for (int nu = 0; nu < d; ++nu)
    out.add("higgs_eq2_" + std::to_string(nu), div[static_cast<std::size_t>(nu)] - commutator(value, grad[nu]));
  return out;
}

Matrix higgs_current_integral(const PathKernels& k, const Connection& a, const MatterField& phi) {
  const Curve& sigma = k.curve();
  const TransportTable& tab = k.table();
  const int d = sigma.dim();
  const int m = sigma.cells();
  std::vector<Matrix> left(static_cast<std::size_t>(m + 1)), right(left.size());
  for (int i = 0; i <= m; ++i) {
    const Vector x = sigma.positions().col(i);
    const MatrixList grad = covariant_gradient(a.jet(x, 1), phi, x);
    const Matrix& u = tab.at(i);
    const Matrix& ui = tab.inverse(i);
    const Matrix body = ui * phi.value(x) * u;
    Matrix l = Matrix::Zero(a.fiber(), a.fiber());
    Matrix r = l;
    for (int nu = 0; nu < d; ++nu) {
      const Matrix c = commutator(body, ui * grad[static_cast<std::size_t>(nu)] * u);
      l += sigma.velocities(Side::left)(nu, i) * c;
      r += sigma.velocities(Side::right)(nu, i) * c;
    }
    left[static_cast<std::size_t>(i)] = l;
    right[static_cast<std::size_t>(i)] = r;
  }
  return sided_simpson(left, right, sigma.step());
}

SectorResidual ymh_residual_pathspace(const Connection& a, const MatterField& phi, const HiggsParams& p,
                                      const Curve& sigma, const PathspaceOptions& opts) {
  SectorResidual out;
  out.location = "curve";
  const PathKernels k(a, sigma, 2);
  const Matrix big_phi = higgs_functional(k.table(), phi, sigma);
  if (opts.field_equation) {
    const auto [nested, closed] = higgs_box(a, phi, sigma, opts);
    out.add("higgs_eq1", nested - higgs_potential_term(big_phi, p));
    out.add("endpoint_closed_form", nested - closed);
  }
  const Matrix box = levy_operator_integral(k, opts.metric);
  out.add("higgs_eq2", box + k.table().final() * higgs_current_integral(k, a, phi));
  return out;
}

SectorResidual ymh_system_B(const Connection& a, const MatterField& phi, const HiggsParams& p, const Curve& sigma,
                            const Variation& u, const Variation& v, const PathspaceOptions& opts) {
  require_e0(u, "ymh_system_B");
  require_e0(v, "ymh_system_B");
  SectorResidual out;
  out.location = "curve";
  const PathKernels k(a, sigma, 2);
  out.add("closedness", closedness_residual(transport_one_form(a), sigma, u, v, opts.fd));
  out.add("divergence", levy_divergence_integral(k, opts.metric) + higgs_current_integral(k, a, phi));
  const Matrix big_phi = higgs_functional(k.table(), phi, sigma);
  if (opts.field_equation) {
    const auto [nested, closed] = higgs_box(a, phi, sigma, opts);
    out.add("field", nested - higgs_potential_term(big_phi, p));
  }
  const Matrix d_phi = directional_derivative(higgs_functional_of(a, phi), sigma, u, opts.fd);
  out.add("compatibility", d_phi + commutator(k.one_form(u), big_phi));
  return out;
}

Spinor dirac_functional(const Connection& a, const MatterField& psi, const Curve& sigma) {
  const TransportTable tab = parallel_transport(a, sigma);
  return Spinor(tab.inverse(tab.cells()) * psi.value(sigma.position(1.0)));
}

SectorResidual qcd_residual_pointwise(const Connection& a, const MatterField& psi, Real mass, const Vector& x) {
  const int d = a.dim();
  if (d != 4) throw InvalidInput("qcd_residual_pointwise: the Dirac sector needs d = 4");
  static const GammaSet gamma;
  const ConnectionJet jet = a.jet(x, 2);
  const Matrix value = psi.value(x);
  const MatrixList dpsi = psi.first_partials(x);
  const MatrixList div = ym_divergence(jet, Metric::minkowski(d));

  SectorResidual out;
  out.location = point_label(x);
  Matrix dirac = kI * mass * value;
  for (int mu = 0; mu < d; ++mu) {
    const auto k = static_cast<std::size_t>(mu);
    dirac += act_on_spin(dpsi[k] + jet.a[k] * value, gamma.upper(mu));
  }
  out.add("dirac", dirac);
  const Spinor s(value);
  for (int nu = 0; nu < d; ++nu)
    out.add("source_" + std::to_string(nu), div[static_cast<std::size_t>(nu)] + dirac_current(s, nu, gamma));
  return out;
}

Matrix dirac_current_integral(const PathKernels& k, const MatterField& psi) {
  static const GammaSet gamma;
  const Curve& sigma = k.curve();
  const TransportTable& tab = k.table();
  const int d = sigma.dim();
  const int m = sigma.cells();
  const auto n = tab.final().rows();
  std::vector<Matrix> left(static_cast<std::size_t>(m + 1)), right(left.size());
  for (int i = 0; i <= m; ++i) {
    const Spinor body(tab.inverse(i) * psi.value(sigma.positions().col(i)));
    Matrix l = Matrix::Zero(n, n);
    Matrix r = l;
    for (int nu = 0; nu < d; ++nu) {
      const Matrix c = dirac_current(body, nu, gamma);
      l += sigma.velocities(Side::left)(nu, i) * c;
      r += sigma.velocities(Side::right)(nu, i) * c;
    }
    left[static_cast<std::size_t>(i)] = l;
    right[static_cast<std::size_t>(i)] = r;
  }
  return sided_simpson(left, right, sigma.step());
}

SectorResidual qcd_residual_pathspace(const Connection& a, const MatterField& psi, Real mass, const Curve& sigma,
                                      const Variation& u, const PathspaceOptions& opts) {
  require_e0(u, "qcd_residual_pathspace");
  if (sigma.dim() != 4) throw InvalidInput("qcd_residual_pathspace: the Dirac sector needs d = 4");
  static const GammaSet gamma;
  SectorResidual out;
  out.location = "curve";
  const PathKernels k(a, sigma, 2);
  const Matrix big_psi = k.table().inverse(k.cells()) * psi.value(sigma.position(1.0));

  const Curve fine = at_least(sigma, needle_cells(opts.first));
  const CurveFunctional f = dirac_functional_of(a, psi);
  Matrix dirac = kI * mass * big_psi;
  for (int mu = 0; mu < 4; ++mu)
    dirac += act_on_spin(endpoint_derivation(f, fine, unit(4, mu), opts.first).value, gamma.upper(mu));
  out.add("dirac", dirac);

  const Matrix current = dirac_current_integral(k, psi);
  const Matrix box = levy_operator_integral(k, opts.metric) - k.table().final() * current;
  const Matrix div = levy_divergence_integral(k, opts.metric) - current;
  out.add("box", box);
  out.add("divergence", div);
  out.add("consistency", k.table().inverse(k.cells()) * box - div);

  const Matrix d_psi = directional_derivative(f, sigma, u, opts.fd);
  out.add("compatibility", d_psi + k.one_form(u) * big_psi);
  return out;
}

}  // namespace levy
