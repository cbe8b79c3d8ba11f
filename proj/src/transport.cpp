#include "levy/transport.hpp"

#include <array>
#include <iomanip>
#include <sstream>
#include <string>

#include "levy/quadrature.hpp"

namespace levy {

TransportTable::TransportTable(std::vector<Matrix> u, Real drift, const TransportOptions& opts)
    : u_(std::move(u)), drift_(drift) {
  inv_.reserve(u_.size());
  for (const Matrix& m : u_) inv_.push_back(drift_ <= opts.adjoint_drift ? Matrix(m.adjoint()) : Matrix(m.inverse()));
}

namespace {

Matrix contract(const MatrixList& a, const Vector& v) {
  Matrix out = Matrix::Zero(a.front().rows(), a.front().cols());
  for (std::size_t mu = 0; mu < a.size(); ++mu)
    if (v(static_cast<Eigen::Index>(mu)) != 0.0) out += v(static_cast<Eigen::Index>(mu)) * a[mu];
  return out;
}

Real unitarity_defect(const Matrix& u) {
  return max_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

}  // namespace

TransportTable parallel_transport(const Connection& a, const Curve& sigma, const TransportOptions& opts) {
  if (a.dim() != sigma.dim()) throw InvalidInput("parallel_transport: curve and connection dimensions differ");
  const int m = sigma.cells();
  const Real h = sigma.step();
  const int n = a.fiber();
  std::vector<Matrix> u;
  u.reserve(static_cast<std::size_t>(m) + 1);
  u.push_back(Matrix::Identity(n, n));
  Real drift = 0.0;
  MatrixList a_here = a.values(sigma.positions().col(0));
  for (int i = 0; i < m; ++i) {
    const Real tm = sigma.node(i) + 0.5 * h;
    const MatrixList a_mid = a.values(sigma.position(tm));
    MatrixList a_next = a.values(sigma.positions().col(i + 1));
    const Matrix g0 = contract(a_here, sigma.velocities(Side::right).col(i));
    const Matrix gm = contract(a_mid, sigma.velocity(tm));
    const Matrix g1 = contract(a_next, sigma.velocities(Side::left).col(i + 1));
    const Matrix& y = u.back();
    const Matrix k1 = -g0 * y;
    const Matrix k2 = -gm * (y + 0.5 * h * k1);
    const Matrix k3 = -gm * (y + 0.5 * h * k2);
    const Matrix k4 = -g1 * (y + h * k3);
    Matrix next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) throw NumericalError("parallel_transport: non-finite value, refine the grid");
    drift = std::max(drift, unitarity_defect(next));
    u.push_back(std::move(next));
    a_here = std::move(a_next);
  }
  if (drift > opts.drift_bound) {
    std::ostringstream msg;
    msg << std::scientific << std::setprecision(3) << "parallel_transport: unitarity drift " << drift
        << " exceeds bound; refine the grid (M = " << m << ")";
    throw NumericalError(msg.str());
  }
  return TransportTable(std::move(u), drift, opts);
}

PathKernels::PathKernels(const Connection& a, const Curve& sigma, int order, const TransportOptions& opts)
    : a_(a), sigma_(sigma), order_(order), table_(parallel_transport(a, sigma, opts)) {
  if (order != 1 && order != 2) throw InvalidInput("PathKernels: order must be 1 or 2");
  const int d = a.dim();
  const int m = sigma.cells();
  auto frame = std::make_shared<BodyFrame>();
  frame->dim = d;
  frame->cells = m;
  frame->u_final = table_.final();
  frame->u_final_inv = table_.inverse(m);
  frame->a_end = a.values(sigma.positions().col(m));
  frame->w.resize(static_cast<std::size_t>((m + 1) * d * 2));
  if (order == 2) {
    frame->l.resize(static_cast<std::size_t>((m + 1) * d * d * 2));
    frame->s.resize(static_cast<std::size_t>((m + 1) * d * d));
  }
  const std::array<Side, 2> sides{Side::left, Side::right};
  for (int i = 0; i <= m; ++i) {
    const ConnectionJet jet = a.jet(sigma.positions().col(i), order);
    const Curvature f = curvature(jet);
    const Matrix& ui = table_.at(i);
    const Matrix& uinv = table_.inverse(i);
    auto body = [&](const Matrix& x) -> Matrix { return uinv * x * ui; };
    for (Side side : sides) {
      const Vector v = sigma.velocities(side).col(i);
      const int sd = side == Side::right;
      for (int mu = 0; mu < d; ++mu) {
        Matrix x = Matrix::Zero(a.fiber(), a.fiber());
        for (int lam = 0; lam < d; ++lam)
          if (v(lam) != 0.0) x += v(lam) * f(mu, lam);
        frame->w[static_cast<std::size_t>((i * d + mu) * 2 + sd)] = body(x);
      }
    }
    if (order == 2) {
      const MatrixList nf = covariant_curvature(jet, f);
      for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu) frame->s[static_cast<std::size_t>((i * d + mu) * d + nu)] = body(f(mu, nu));
      for (Side side : sides) {
        const Vector v = sigma.velocities(side).col(i);
        const int sd = side == Side::right;
        for (int mu = 0; mu < d; ++mu) {
          for (int nu = mu; nu < d; ++nu) {
            Matrix x = Matrix::Zero(a.fiber(), a.fiber());
            for (int lam = 0; lam < d; ++lam)
              if (v(lam) != 0.0) x += (-0.5 * v(lam)) * (nf[idx3(mu, nu, lam, d)] + nf[idx3(nu, mu, lam, d)]);
            Matrix b = body(x);
            frame->l[static_cast<std::size_t>(((i * d + nu) * d + mu) * 2 + sd)] = b;
            frame->l[static_cast<std::size_t>(((i * d + mu) * d + nu) * 2 + sd)] = std::move(b);
          }
        }
      }
    }
  }
  frame_ = std::move(frame);
}

namespace {

struct Sided {
  MatrixList left;
  MatrixList right;
  MatrixList& operator[](Side s) { return s == Side::left ? left : right; }
};

// G_u(t) = W_mu(t) u^mu(t) with one-sided values at every node.
Sided contract_w(const BodyFrame& fr, const Variation& u) {
  Sided g{MatrixList(static_cast<std::size_t>(fr.cells) + 1), MatrixList(static_cast<std::size_t>(fr.cells) + 1)};
  const Eigen::Index n = fr.u_final.rows();
  for (Side side : {Side::left, Side::right}) {
    for (int i = 0; i <= fr.cells; ++i) {
      Matrix x = Matrix::Zero(n, n);
      for (int mu = 0; mu < fr.dim; ++mu) {
        const Real c = u.positions()(mu, i);
        if (c != 0.0) x += c * fr.w_at(i, mu, side);
      }
      g[side][static_cast<std::size_t>(i)] = std::move(x);
    }
  }
  return g;
}

void check_grid(const BodyFrame& fr, const GridPath& u) {
  if (u.cells() != fr.cells || u.dim() != fr.dim) throw InvalidInput("variation grid does not match the curve grid");
}

}  // namespace

Matrix PathKernels::first_derivative(const Variation& u) const {
  const BodyFrame& fr = *frame_;
  check_grid(fr, u);
  Sided g = contract_w(fr, u);
  const Matrix integral = sided_simpson(g.left, g.right, sigma_.step());
  const Matrix end = contract(fr.a_end, u.positions().col(fr.cells));
  return -fr.u_final * integral - end * fr.u_final;
}

Matrix PathKernels::one_form(const Variation& u) const {
  const BodyFrame& fr = *frame_;
  check_grid(fr, u);
  Sided g = contract_w(fr, u);
  const Matrix integral = sided_simpson(g.left, g.right, sigma_.step());
  const Matrix end = contract(fr.a_end, u.positions().col(fr.cells));
  return -integral - fr.u_final_inv * end * fr.u_final;
}

Matrix PathKernels::one_form_e0(const Variation& u) const {
  check_grid(*frame_, u);
  if (!u.in_e0()) throw InvalidInput("one_form_e0: variation must lie in E_0");
  const int m = cells();
  const int d = dim();
  Sided g{MatrixList(static_cast<std::size_t>(m) + 1), MatrixList(static_cast<std::size_t>(m) + 1)};
  for (int i = 0; i <= m; ++i) {
    const Curvature f = curvature(a_, sigma_.positions().col(i));
    const Matrix u0t = table_.between(0, i);
    for (Side side : {Side::left, Side::right}) {
      const Vector v = sigma_.velocities(side).col(i);
      Matrix x = Matrix::Zero(a_.fiber(), a_.fiber());
      for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu) {
          const Real c = u.positions()(mu, i) * v(nu);
          if (c != 0.0) x += c * f(mu, nu);
        }
      g[side][static_cast<std::size_t>(i)] = u0t * x * table_.at(i);
    }
  }
  return -sided_simpson(g.left, g.right, sigma_.step());
}

void PathKernels::require_second(const char* what) const {
  if (order_ < 2) throw InvalidInput(std::string(what) + ": second-order kernels were not computed");
}

Matrix PathKernels::second_derivative(const Variation& u, const Variation& v) const {
  require_second("second_derivative");
  if (!u.in_e0() || !v.in_e0()) throw InvalidInput("second_derivative: variations must lie in E_0");
  return kernels().bilinear(u, v);
}

Matrix PathKernels::one_form_derivative(const Variation& u, const Variation& v) const {
  require_second("one_form_derivative");
  if (!u.in_e0() || !v.in_e0()) throw InvalidInput("one_form_derivative: variations must lie in E_0");
  return one_form_kernels().bilinear(u, v);
}

KernelTriple::KernelTriple(std::shared_ptr<const BodyFrame> frame, Form form)
    : frame_(std::move(frame)), form_(form) {
  if (frame_->l.empty()) throw InvalidInput("KernelTriple: second-order body-frame data required");
  prefix_ = form == Form::transport ? frame_->u_final
                                    : Matrix(Matrix::Identity(frame_->u_final.rows(), frame_->u_final.cols()));
}

Matrix KernelTriple::volterra(int mu, int nu, int i, int j) const {
  const BodyFrame& fr = *frame_;
  if (form_ == Form::transport) {
    if (i >= j) return prefix_ * fr.w_at(i, mu, Side::right) * fr.w_at(j, nu, Side::right);
    return prefix_ * fr.w_at(j, nu, Side::right) * fr.w_at(i, mu, Side::right);
  }
  if (j > i) return commutator(fr.w_at(j, nu, Side::right), fr.w_at(i, mu, Side::right));
  return Matrix::Zero(prefix_.rows(), prefix_.cols());
}

Matrix KernelTriple::levy(int mu, int nu, int i, Side side) const { return prefix_ * frame_->l_at(i, mu, nu, side); }

Matrix KernelTriple::singular(int mu, int nu, int i) const { return prefix_ * frame_->s_at(i, mu, nu); }

Matrix KernelTriple::bilinear(const Variation& u, const Variation& v) const {
  const BodyFrame& fr = *frame_;
  check_grid(fr, u);
  check_grid(fr, v);
  const int m = fr.cells;
  const Real h = 1.0 / m;
  const int d = fr.dim;
  Sided gu = contract_w(fr, u);
  Sided gv = contract_w(fr, v);
  const MatrixList cu = sided_cumulative(gu.left, gu.right, h);
  const MatrixList cv = sided_cumulative(gv.left, gv.right, h);
  Sided integrand{MatrixList(static_cast<std::size_t>(m) + 1), MatrixList(static_cast<std::size_t>(m) + 1)};
  for (Side side : {Side::left, Side::right}) {
    const RealMatrix& du = u.velocities(side);
    const RealMatrix& dv = v.velocities(side);
    for (int i = 0; i <= m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      Matrix x = form_ == Form::transport ? Matrix(gu[side][k] * cv[k] + gv[side][k] * cu[k])
                                          : commutator(gv[side][k], cu[k]);
      for (int mu = 0; mu < d; ++mu) {
        for (int nu = 0; nu < d; ++nu) {
          const Real cl = u.positions()(mu, i) * v.positions()(nu, i);
          if (cl != 0.0) x += cl * fr.l_at(i, mu, nu, side);
          const Real cs = 0.5 * (du(mu, i) * v.positions()(nu, i) + dv(mu, i) * u.positions()(nu, i));
          if (cs != 0.0 && mu != nu) x += cs * fr.s_at(i, mu, nu);
        }
      }
      integrand[side][k] = std::move(x);
    }
  }
  return prefix_ * sided_simpson(integrand.left, integrand.right, h);
}

Matrix first_derivative(const Connection& a, const Curve& sigma, const Variation& u) {
  return PathKernels(a, sigma, 1).first_derivative(u);
}

Matrix one_form_B(const Connection& a, const Curve& sigma, const Variation& u) {
  return PathKernels(a, sigma, 1).one_form(u);
}

Matrix one_form_B_two_form(const Connection& a, const Curve& sigma, const Variation& u) {
  if (!u.in_e0()) throw InvalidInput("one_form_B_two_form: variation must lie in E_0");
  const int m = sigma.cells();
  const int d = sigma.dim();
  Sided g{MatrixList(static_cast<std::size_t>(m) + 1), MatrixList(static_cast<std::size_t>(m) + 1)};
  for (int i = 0; i <= m; ++i) {
    const Real r = sigma.node(i);
    const TransportTable tr = parallel_transport(a, restrict(sigma, r));
    const Curvature f = curvature(a, sigma.positions().col(i));
    for (Side side : {Side::left, Side::right}) {
      const Vector v = sigma.velocities(side).col(i);
      Matrix x = Matrix::Zero(a.fiber(), a.fiber());
      for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu) {
          const Real c = u.positions()(mu, i) * v(nu);
          if (c != 0.0) x += c * f(mu, nu);
        }
      // h(sigma^r) paired as h_{mu nu} u^mu sigma'^nu
      g[side][static_cast<std::size_t>(i)] = -tr.inverse(m) * x * tr.final();
    }
  }
  return sided_simpson(g.left, g.right, sigma.step());
}

OneForm transport_one_form(const Connection& a, const TransportOptions& opts) {
  return [a, opts](const Curve& sigma, const Variation& u) {
    return PathKernels(a, sigma, 1, opts).one_form(u.cells() == sigma.cells() ? u : u.resampled(sigma.cells()));
  };
}

Matrix directional_derivative(const CurveFunctional& phi, const Curve& sigma, const Variation& u,
                              const FiniteDifference& fd) {
  auto central = [&](Real e) -> Matrix { return (phi(displaced(sigma, u, e)) - phi(displaced(sigma, u, -e))) / (2.0 * e); };
  const Matrix coarse = central(fd.eps);
  if (!fd.richardson) return coarse;
  return (4.0 * central(0.5 * fd.eps) - coarse) / 3.0;
}

Matrix mixed_derivative(const CurveFunctional& phi, const Curve& sigma, const Variation& u, const Variation& v,
                        const FiniteDifference& fd) {
  auto stencil = [&](Real e) -> Matrix {
    return (phi(displaced(sigma, u, e, v, e)) - phi(displaced(sigma, u, e, v, -e)) - phi(displaced(sigma, u, -e, v, e)) +
            phi(displaced(sigma, u, -e, v, -e))) /
           (4.0 * e * e);
  };
  const Matrix coarse = stencil(fd.eps);
  if (!fd.richardson) return coarse;
  return (4.0 * stencil(0.5 * fd.eps) - coarse) / 3.0;
}

Matrix closedness_residual(const OneForm& b, const Curve& sigma, const Variation& u, const Variation& v,
                           const FiniteDifference& fd) {
  if (!u.in_e0() || !v.in_e0()) throw InvalidInput("closedness_residual: variations must lie in E_0");
  const CurveFunctional bv = [&](const Curve& c) { return b(c, v); };
  const CurveFunctional bu = [&](const Curve& c) { return b(c, u); };
  const Matrix du_bv = directional_derivative(bv, sigma, u, fd);
  const Matrix dv_bu = directional_derivative(bu, sigma, v, fd);
  return du_bv - dv_bu + commutator(b(sigma, u), b(sigma, v));
}

}  // namespace levy
