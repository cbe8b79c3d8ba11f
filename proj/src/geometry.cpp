#include "levy/geometry.hpp"

#include <cmath>

namespace levy {

Metric::Metric(Kind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim < 1) throw InvalidInput("Metric: dimension must be positive");
}

SmoothMatrixField::SmoothMatrixField(int dim, int components, Fn value, Fn first, Fn second)
    : dim_(dim), components_(components), value_(std::move(value)), first_(std::move(first)), second_(std::move(second)) {
  if (dim < 1 || components < 1) throw InvalidInput("SmoothMatrixField: bad shape");
  if (!value_) throw InvalidInput("SmoothMatrixField: value evaluator required");
}

namespace {

// Centered difference of `fn` along every axis with one Richardson pass.
MatrixList centered_gradient(const SmoothMatrixField::Fn& fn, const Vector& x, Real step) {
  const auto d = static_cast<int>(x.size());
  MatrixList out;
  for (int lam = 0; lam < d; ++lam) {
    auto diff = [&](Real h) {
      Vector xp = x, xm = x;
      xp(lam) += h;
      xm(lam) -= h;
      const MatrixList fp = fn(xp);
      const MatrixList fm = fn(xm);
      MatrixList dv(fp.size());
      for (std::size_t c = 0; c < fp.size(); ++c) dv[c] = (fp[c] - fm[c]) / (2.0 * h);
      return dv;
    };
    const MatrixList coarse = diff(step);
    const MatrixList fine = diff(0.5 * step);
    for (std::size_t c = 0; c < coarse.size(); ++c) out.push_back((4.0 * fine[c] - coarse[c]) / 3.0);
  }
  return out;
}

}  // namespace

MatrixList SmoothMatrixField::first(const Vector& x) const { return first_ ? first_(x) : fd_first(x); }

MatrixList SmoothMatrixField::second(const Vector& x) const { return second_ ? second_(x) : fd_second(x); }

MatrixList SmoothMatrixField::fd_first(const Vector& x) const {
  return centered_gradient(value_, x, 1e-4 * (1.0 + x.norm()));
}

MatrixList SmoothMatrixField::fd_second(const Vector& x) const {
  // Gradient of the first partials: layout [kap][lam * k + c] = [(kap * d + lam) * k + c].
  auto first_fn = [this](const Vector& y) { return first(y); };
  return centered_gradient(first_fn, x, 1e-3 * (1.0 + x.norm()));
}

Curvature::Curvature(int dim, Eigen::Index fiber)
    : dim_(dim), f_(static_cast<std::size_t>(dim * dim), Matrix::Zero(fiber, fiber)) {}

void Curvature::set(int mu, int nu, const Matrix& value) {
  f_[idx2(mu, nu, dim_)] = value;
  f_[idx2(nu, mu, dim_)] = -value;
}

Connection::Connection(int dim, int fiber, Fn value, Fn first, Fn second)
    : fiber_(fiber), field_(dim, dim, std::move(value), std::move(first), std::move(second)) {
  if (fiber < 1) throw InvalidInput("Connection: fiber dimension must be positive");
}

ConnectionJet Connection::jet(const Vector& x, int order) const {
  if (x.size() != dim()) throw InvalidInput("Connection::jet: point has wrong dimension");
  ConnectionJet j;
  j.dim = dim();
  j.a = values(x);
  if (order >= 1) j.da = first_partials(x);
  if (order >= 2) j.dda = second_partials(x);
  return j;
}

bool Connection::in_algebra_at(const Vector& x, bool traceless, Real tol) const {
  for (const Matrix& m : values(x)) {
    if (!is_anti_hermitian(m, tol)) return false;
    if (traceless && !is_traceless(m, tol)) return false;
  }
  return true;
}

Curvature curvature(const ConnectionJet& jet) {
  const int d = jet.dim;
  Curvature f(d, jet.a.front().rows());
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      const Matrix& amu = jet.a[static_cast<std::size_t>(mu)];
      const Matrix& anu = jet.a[static_cast<std::size_t>(nu)];
      f.set(mu, nu, jet.da[idx2(mu, nu, d)] - jet.da[idx2(nu, mu, d)] + amu * anu - anu * amu);
    }
  }
  return f;
}

Curvature curvature(const Connection& a, const Vector& x) { return curvature(a.jet(x, 1)); }

MatrixList curvature_partials(const ConnectionJet& jet) {
  const int d = jet.dim;
  const Eigen::Index n = jet.a.front().rows();
  MatrixList out(static_cast<std::size_t>(d * d * d), Matrix::Zero(n, n));
  for (int lam = 0; lam < d; ++lam) {
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = mu + 1; nu < d; ++nu) {
        const Matrix& amu = jet.a[static_cast<std::size_t>(mu)];
        const Matrix& anu = jet.a[static_cast<std::size_t>(nu)];
        const Matrix& damu = jet.da[idx2(lam, mu, d)];
        const Matrix& danu = jet.da[idx2(lam, nu, d)];
        Matrix v = jet.dda[idx3(lam, mu, nu, d)] - jet.dda[idx3(lam, nu, mu, d)] + damu * anu - anu * damu +
                   amu * danu - danu * amu;
        out[idx3(lam, nu, mu, d)] = -v;
        out[idx3(lam, mu, nu, d)] = std::move(v);
      }
    }
  }
  return out;
}

MatrixList covariant_curvature(const ConnectionJet& jet, const Curvature& f) {
  const int d = jet.dim;
  MatrixList out = curvature_partials(jet);
  for (int lam = 0; lam < d; ++lam) {
    const Matrix& al = jet.a[static_cast<std::size_t>(lam)];
    for (int mu = 0; mu < d; ++mu)
      for (int nu = 0; nu < d; ++nu) out[idx3(lam, mu, nu, d)] += al * f(mu, nu) - f(mu, nu) * al;
  }
  return out;
}

MatrixList ym_divergence(const ConnectionJet& jet, const Metric& g) {
  const int d = jet.dim;
  const Curvature f = curvature(jet);
  const MatrixList nf = covariant_curvature(jet, f);
  const Eigen::Index n = jet.a.front().rows();
  MatrixList out(static_cast<std::size_t>(d), Matrix::Zero(n, n));
  for (int nu = 0; nu < d; ++nu)
    for (int lam = 0; lam < d; ++lam) out[static_cast<std::size_t>(nu)] += g.diag(lam) * nf[idx3(lam, lam, nu, d)];
  return out;
}

Matrix ym_residual(const Connection& a, const Metric& g, const Vector& x, int nu,
                   const std::optional<MatrixList>& current) {
  if (nu < 0 || nu >= a.dim()) throw InvalidInput("ym_residual: index out of range");
  if (g.dim() != a.dim()) throw InvalidInput("ym_residual: metric dimension mismatch");
  Matrix r = ym_divergence(a.jet(x, 2), g)[static_cast<std::size_t>(nu)];
  if (current) r -= current->at(static_cast<std::size_t>(nu));
  return r;
}

Connection gauge_rotate(const Connection& a, const Matrix& b) {
  const Matrix binv = b.inverse();
  auto conj = [b, binv](MatrixList list) {
    for (Matrix& m : list) m = binv * m * b;
    return list;
  };
  Connection::Fn value = [a, conj](const Vector& x) { return conj(a.values(x)); };
  Connection::Fn first = [a, conj](const Vector& x) { return conj(a.first_partials(x)); };
  Connection::Fn second = [a, conj](const Vector& x) { return conj(a.second_partials(x)); };
  return Connection(a.dim(), a.fiber(), value, first, second);
}

MatterField::MatterField(Kind kind, int dim, int fiber, Fn value, ListFn first, ListFn second)
    : kind_(kind),
      fiber_(fiber),
      field_(dim, 1, [value](const Vector& x) { return MatrixList{value(x)}; }, std::move(first), std::move(second)) {}

Matrix covariant_derivative(const Connection& a, const MatterField& phi, const Vector& x, int mu) {
  if (phi.kind() != MatterField::Kind::higgs) throw InvalidInput("covariant_derivative: Higgs field required");
  if (mu < 0 || mu >= a.dim()) throw InvalidInput("covariant_derivative: index out of range");
  return covariant_gradient(a.jet(x, 0), phi, x)[static_cast<std::size_t>(mu)];
}

MatrixList covariant_gradient(const ConnectionJet& jet, const MatterField& phi, const Vector& x) {
  const Matrix p = phi.value(x);
  MatrixList grad = phi.first_partials(x);
  for (int mu = 0; mu < jet.dim; ++mu) {
    const Matrix& am = jet.a[static_cast<std::size_t>(mu)];
    grad[static_cast<std::size_t>(mu)] += am * p - p * am;
  }
  return grad;
}

MatrixList covariant_hessian(const ConnectionJet& jet, const MatterField& phi, const Vector& x) {
  const int d = jet.dim;
  const Matrix p = phi.value(x);
  const MatrixList dp = phi.first_partials(x);
  const MatrixList ddp = phi.second_partials(x);
  const MatrixList cov = covariant_gradient(jet, phi, x);
  MatrixList out(static_cast<std::size_t>(d * d));
  for (int mu = 0; mu < d; ++mu) {
    const Matrix& amu = jet.a[static_cast<std::size_t>(mu)];
    for (int nu = 0; nu < d; ++nu) {
      const Matrix& anu = jet.a[static_cast<std::size_t>(nu)];
      const Matrix& dmu_anu = jet.da[idx2(mu, nu, d)];
      const Matrix& dmu_p = dp[static_cast<std::size_t>(mu)];
      // d_mu (nabla_nu phi) + [A_mu, nabla_nu phi]
      Matrix v = ddp[idx2(mu, nu, d)] + dmu_anu * p - p * dmu_anu + anu * dmu_p - dmu_p * anu;
      const Matrix& cn = cov[static_cast<std::size_t>(nu)];
      v += amu * cn - cn * amu;
      out[idx2(mu, nu, d)] = std::move(v);
    }
  }
  return out;
}

}  // namespace levy
