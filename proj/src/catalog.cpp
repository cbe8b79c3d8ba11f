#include "levy/catalog.hpp"

#include <array>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

namespace levy {

namespace {

Real param(const CatalogParams& p, const std::string& key, Real fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

int int_param(const CatalogParams& p, const std::string& key, int fallback) {
  return static_cast<int>(std::lround(param(p, key, fallback)));
}

std::uint64_t seed_param(const CatalogParams& p, std::uint64_t fallback) {
  return static_cast<std::uint64_t>(std::llround(param(p, "seed", static_cast<Real>(fallback))));
}

MatrixList zeros(std::size_t count, int n) { return MatrixList(count, Matrix::Zero(n, n)); }

Connection zero_connection(int d, int n) {
  return Connection(
      d, n, [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d), n); },
      [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d * d), n); },
      [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d * d * d), n); });
}

Connection pure_gauge(int d, int n, const MatrixList& gens) {
  auto values = [d, gens](const Vector& x) {
    MatrixList a(static_cast<std::size_t>(d));
    Matrix r = Matrix::Identity(gens.front().rows(), gens.front().cols());
    for (int mu = d - 1; mu >= 0; --mu) {
      const Matrix& t = gens[static_cast<std::size_t>(mu)];
      a[static_cast<std::size_t>(mu)] = r.inverse() * t * r;
      r = Matrix(x(mu) * t).exp() * r;
    }
    return a;
  };
  // d_lam A_mu = [A_mu, A_lam] for lam > mu, zero otherwise.
  auto first_from = [d](const MatrixList& a) {
    MatrixList da(static_cast<std::size_t>(d * d), Matrix::Zero(a.front().rows(), a.front().cols()));
    for (int lam = 0; lam < d; ++lam)
      for (int mu = 0; mu < lam; ++mu)
        da[idx2(lam, mu, d)] = commutator(a[static_cast<std::size_t>(mu)], a[static_cast<std::size_t>(lam)]);
    return da;
  };
  auto first = [values, first_from](const Vector& x) { return first_from(values(x)); };
  auto second = [d, values, first_from](const Vector& x) {
    const MatrixList a = values(x);
    const MatrixList da = first_from(a);
    MatrixList dda(static_cast<std::size_t>(d * d * d), Matrix::Zero(a.front().rows(), a.front().cols()));
    for (int kap = 0; kap < d; ++kap)
      for (int lam = 0; lam < d; ++lam)
        for (int mu = 0; mu < lam; ++mu)
          dda[idx3(kap, lam, mu, d)] = commutator(da[idx2(kap, mu, d)], a[static_cast<std::size_t>(lam)]) +
                                       commutator(a[static_cast<std::size_t>(mu)], da[idx2(kap, lam, d)]);
    return dda;
  };
  return Connection(d, n, values, first, second);
}

// A_nu = T a_nu(x), a_nu(x) = c_{mu nu} x^mu + x^T Q_nu x / 2.
Connection abelian_quadratic(int d, int n, const Matrix& t, const RealMatrix& c, const std::vector<RealMatrix>& q) {
  auto values = [d, t, c, q](const Vector& x) {
    MatrixList a(static_cast<std::size_t>(d));
    for (int nu = 0; nu < d; ++nu) {
      const Real s = c.col(nu).dot(x) + 0.5 * x.dot(q[static_cast<std::size_t>(nu)] * x);
      a[static_cast<std::size_t>(nu)] = s * t;
    }
    return a;
  };
  auto first = [d, t, c, q](const Vector& x) {
    MatrixList da(static_cast<std::size_t>(d * d));
    for (int nu = 0; nu < d; ++nu) {
      const Vector grad = q[static_cast<std::size_t>(nu)] * x;
      for (int lam = 0; lam < d; ++lam) da[idx2(lam, nu, d)] = (c(lam, nu) + grad(lam)) * t;
    }
    return da;
  };
  auto second = [d, t, q](const Vector&) {
    MatrixList dda(static_cast<std::size_t>(d * d * d));
    for (int kap = 0; kap < d; ++kap)
      for (int lam = 0; lam < d; ++lam)
        for (int nu = 0; nu < d; ++nu) dda[idx3(kap, lam, nu, d)] = q[static_cast<std::size_t>(nu)](kap, lam) * t;
    return dda;
  };
  return Connection(d, n, values, first, second);
}

RealMatrix random_real(int rows, int cols, std::mt19937_64& rng, Real scale) {
  std::normal_distribution<Real> normal(0.0, 1.0);
  RealMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = scale * normal(rng);
  return m;
}

// 't Hooft symbol eta_{a mu nu} with mu, nu in 0..3 standing for 1..4.
Real thooft(int a, int mu, int nu) {
  if (mu == nu) return 0.0;
  if (mu < 3 && nu < 3) {
    // epsilon_{a mu nu}
    if (a == mu || a == nu) return 0.0;
    return ((mu - a + 3) % 3 == 1) ? 1.0 : -1.0;
  }
  if (nu == 3) return a == mu ? 1.0 : 0.0;
  return a == nu ? -1.0 : 0.0;
}

Connection bpst(Real rho, const Vector& center) {
  constexpr int d = 4;
  std::array<Matrix, 16> m;  // M_{mu nu} = -i eta_{a mu nu} tau_a
  for (int mu = 0; mu < d; ++mu)
    for (int nu = 0; nu < d; ++nu) {
      Matrix s = Matrix::Zero(2, 2);
      for (int a = 0; a < 3; ++a) s += -kI * thooft(a, mu, nu) * pauli(a);
      m[idx2(mu, nu, d)] = s;
    }
  auto vfield = [m](const Vector& y) {
    MatrixList v(d, Matrix::Zero(2, 2));
    for (int mu = 0; mu < d; ++mu)
      for (int nu = 0; nu < d; ++nu) v[static_cast<std::size_t>(mu)] += y(nu) * m[idx2(mu, nu, d)];
    return v;
  };
  const Real rho2 = rho * rho;
  auto values = [=](const Vector& x) {
    const Vector y = x - center;
    const Real den = y.squaredNorm() + rho2;
    MatrixList v = vfield(y);
    for (Matrix& a : v) a /= den;
    return v;
  };
  auto first = [=](const Vector& x) {
    const Vector y = x - center;
    const Real den = y.squaredNorm() + rho2;
    const MatrixList v = vfield(y);
    MatrixList da(d * d);
    for (int lam = 0; lam < d; ++lam)
      for (int mu = 0; mu < d; ++mu)
        da[idx2(lam, mu, d)] = m[idx2(mu, lam, d)] / den - 2.0 * y(lam) * v[static_cast<std::size_t>(mu)] / (den * den);
    return da;
  };
  auto second = [=](const Vector& x) {
    const Vector y = x - center;
    const Real den = y.squaredNorm() + rho2;
    const Real den2 = den * den;
    const Real den3 = den2 * den;
    const MatrixList v = vfield(y);
    MatrixList dda(d * d * d);
    for (int kap = 0; kap < d; ++kap)
      for (int lam = 0; lam < d; ++lam)
        for (int mu = 0; mu < d; ++mu) {
          const Matrix& vm = v[static_cast<std::size_t>(mu)];
          Matrix r = -2.0 * y(kap) * m[idx2(mu, lam, d)] / den2 - 2.0 * y(lam) * m[idx2(mu, kap, d)] / den2 +
                     8.0 * y(lam) * y(kap) * vm / den3;
          if (kap == lam) r -= 2.0 * vm / den2;
          dda[idx3(kap, lam, mu, d)] = std::move(r);
        }
    return dda;
  };
  return Connection(d, 2, values, first, second);
}

Connection null_plane_wave(Real amp, Real omega, Real phase, int n) {
  constexpr int d = 4;
  const Matrix t = abelian_generator(n, false);
  const std::array<Real, d> k{1.0, 1.0, 0.0, 0.0};
  const std::array<Real, d> pol{0.0, 0.0, 1.0, 0.0};
  auto arg = [=](const Vector& x) { return omega * (k[0] * x(0) + k[1] * x(1) + k[2] * x(2) + k[3] * x(3)) + phase; };
  auto values = [=](const Vector& x) {
    const Real s = std::sin(arg(x));
    MatrixList a(d);
    for (int mu = 0; mu < d; ++mu) a[static_cast<std::size_t>(mu)] = amp * pol[static_cast<std::size_t>(mu)] * s * t;
    return a;
  };
  auto first = [=](const Vector& x) {
    const Real c = std::cos(arg(x));
    MatrixList da(d * d);
    for (int lam = 0; lam < d; ++lam)
      for (int mu = 0; mu < d; ++mu)
        da[idx2(lam, mu, d)] = amp * pol[static_cast<std::size_t>(mu)] * omega * k[static_cast<std::size_t>(lam)] * c * t;
    return da;
  };
  auto second = [=](const Vector& x) {
    const Real s = std::sin(arg(x));
    MatrixList dda(d * d * d);
    for (int kap = 0; kap < d; ++kap)
      for (int lam = 0; lam < d; ++lam)
        for (int mu = 0; mu < d; ++mu)
          dda[idx3(kap, lam, mu, d)] = -amp * pol[static_cast<std::size_t>(mu)] * omega * omega *
                                       k[static_cast<std::size_t>(kap)] * k[static_cast<std::size_t>(lam)] * s * t;
    return dda;
  };
  return Connection(d, n, values, first, second);
}

// Quadratic polynomial c + b_lam x^lam + q_{lam kap} x^lam x^kap / 2 with matrix coefficients.
struct MatrixPolynomial {
  Matrix c;
  MatrixList b;  // [lam]
  MatrixList q;  // [lam * d + kap], symmetric
  int d = 0;

  Matrix value(const Vector& x) const {
    Matrix v = c;
    for (int l = 0; l < d; ++l) {
      v += x(l) * b[static_cast<std::size_t>(l)];
      for (int k = 0; k < d; ++k) v += 0.5 * x(l) * x(k) * q[idx2(l, k, d)];
    }
    return v;
  }
  Matrix partial(const Vector& x, int l) const {
    Matrix v = b[static_cast<std::size_t>(l)];
    for (int k = 0; k < d; ++k) v += x(k) * q[idx2(l, k, d)];
    return v;
  }
};

template <class Draw>
MatrixPolynomial random_polynomial(int d, Draw draw) {
  MatrixPolynomial p;
  p.d = d;
  p.c = draw();
  for (int l = 0; l < d; ++l) p.b.push_back(draw());
  p.q.resize(static_cast<std::size_t>(d * d));
  for (int l = 0; l < d; ++l)
    for (int k = l; k < d; ++k) {
      p.q[idx2(l, k, d)] = draw();
      p.q[idx2(k, l, d)] = p.q[idx2(l, k, d)];
    }
  return p;
}

Connection polynomial_connection(int d, int n, Real scale, std::uint64_t seed) {
  std::uint64_t counter = seed * 1000003ULL;
  auto draw = [&] { return random_su(n, counter++, scale); };
  std::vector<MatrixPolynomial> polys;
  for (int mu = 0; mu < d; ++mu) polys.push_back(random_polynomial(d, draw));
  auto values = [polys, d](const Vector& x) {
    MatrixList a;
    for (int mu = 0; mu < d; ++mu) a.push_back(polys[static_cast<std::size_t>(mu)].value(x));
    return a;
  };
  auto first = [polys, d](const Vector& x) {
    MatrixList da(static_cast<std::size_t>(d * d));
    for (int lam = 0; lam < d; ++lam)
      for (int mu = 0; mu < d; ++mu) da[idx2(lam, mu, d)] = polys[static_cast<std::size_t>(mu)].partial(x, lam);
    return da;
  };
  auto second = [polys, d](const Vector&) {
    MatrixList dda(static_cast<std::size_t>(d * d * d));
    for (int kap = 0; kap < d; ++kap)
      for (int lam = 0; lam < d; ++lam)
        for (int mu = 0; mu < d; ++mu) dda[idx3(kap, lam, mu, d)] = polys[static_cast<std::size_t>(mu)].q[idx2(kap, lam, d)];
    return dda;
  };
  return Connection(d, n, values, first, second);
}

MatterField polynomial_field(MatterField::Kind kind, int d, int n, const MatrixPolynomial& p) {
  auto value = [p](const Vector& x) { return p.value(x); };
  auto first = [p, d](const Vector& x) {
    MatrixList g;
    for (int l = 0; l < d; ++l) g.push_back(p.partial(x, l));
    return g;
  };
  auto second = [p](const Vector&) { return p.q; };
  return MatterField(kind, d, n, value, first, second);
}

}  // namespace

Matrix random_su(int n, std::uint64_t seed, Real scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  Matrix x = traceless_part(Matrix(g - g.adjoint()));
  const Real norm = x.norm();
  return norm > 0.0 ? Matrix(scale * x / norm) : x;
}

Matrix abelian_generator(int n, bool u1) {
  if (u1 || n == 1) return kI * Matrix::Identity(n, n);
  Matrix t = Matrix::Zero(n, n);
  t(0, 0) = 0.5 * kI;
  t(1, 1) = -0.5 * kI;
  return t;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"zero",           "pure_gauge",      "abelian_linear",
                                              "abelian_planted_current", "bpst_instanton", "null_plane_wave",
                                              "random_polynomial"};
  return names;
}

CatalogEntry catalog(const std::string& name, const CatalogParams& p, std::optional<Metric> metric) {
  const int d = int_param(p, "dim", 4);
  const int n = int_param(p, "fiber", 2);
  if (d < 1 || n < 1) throw InvalidInput("catalog: dim and fiber must be positive");

  if (name == "zero") {
    const Metric g = metric.value_or(Metric::euclidean(d));
    CurrentFn current = [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d), n); };
    return {name, zero_connection(d, n), g, true, current};
  }
  if (name == "pure_gauge") {
    const int axes = int_param(p, "axes", d);
    MatrixList gens;
    for (int mu = 0; mu < d; ++mu)
      gens.push_back(mu < axes ? random_su(n, seed_param(p, 1) * 7919ULL + static_cast<std::uint64_t>(mu),
                                           param(p, "scale", 0.8))
                               : Matrix::Zero(n, n));
    const Metric g = metric.value_or(Metric::euclidean(d));
    return {name, pure_gauge(d, n, gens), g, true, std::nullopt};
  }
  if (name == "abelian_linear" || name == "abelian_planted_current") {
    const bool planted = name == "abelian_planted_current";
    std::mt19937_64 rng(seed_param(p, planted ? 3 : 2));
    const Real scale = param(p, "scale", 0.5);
    const Matrix t = abelian_generator(n, param(p, "u1", 0.0) != 0.0);
    const RealMatrix c = random_real(d, d, rng, scale);
    std::vector<RealMatrix> q(static_cast<std::size_t>(d), RealMatrix::Zero(d, d));
    if (planted)
      for (auto& qn : q) {
        const RealMatrix r = random_real(d, d, rng, scale);
        qn = 0.5 * (r + r.transpose());
      }
    const Metric g = metric.value_or(Metric::euclidean(d));
    if (g.dim() != d) throw InvalidInput("catalog: metric dimension mismatch");
    if (!planted) return {name, abelian_quadratic(d, n, t, c, q), g, true, std::nullopt};
    MatrixList j(static_cast<std::size_t>(d));
    for (int nu = 0; nu < d; ++nu) {
      Real s = 0.0;
      for (int lam = 0; lam < d; ++lam)
        s += g.diag(lam) * (q[static_cast<std::size_t>(nu)](lam, lam) - q[static_cast<std::size_t>(lam)](lam, nu));
      j[static_cast<std::size_t>(nu)] = s * t;
    }
    CurrentFn current = [j](const Vector&) { return j; };
    return {name, abelian_quadratic(d, n, t, c, q), g, false, current};
  }
  if (name == "bpst_instanton") {
    Vector center(4);
    for (int i = 0; i < 4; ++i) center(i) = param(p, "c" + std::to_string(i), 0.0);
    const Metric g = metric.value_or(Metric::euclidean(4));
    const bool exact = g.kind() == Metric::Kind::euclidean;
    return {name, bpst(param(p, "rho", 1.0), center), g, exact, std::nullopt};
  }
  if (name == "null_plane_wave") {
    const Metric g = metric.value_or(Metric::minkowski(4));
    const bool exact = g.kind() == Metric::Kind::minkowski;
    return {name, null_plane_wave(param(p, "amp", 0.7), param(p, "omega", 1.3), param(p, "phase", 0.2), n), g, exact,
            std::nullopt};
  }
  if (name == "random_polynomial") {
    const Metric g = metric.value_or(Metric::euclidean(d));
    return {name, polynomial_connection(d, n, param(p, "scale", 0.4), seed_param(p, 4)), g, false, std::nullopt};
  }
  throw InvalidInput("catalog: unknown connection '" + name + "'");
}

MatterField higgs_catalog(const std::string& name, const CatalogParams& p) {
  const int d = int_param(p, "dim", 4);
  const int n = int_param(p, "fiber", 2);
  if (name == "zero") {
    return MatterField(
        MatterField::Kind::higgs, d, n, [n](const Vector&) { return Matrix(Matrix::Zero(n, n)); },
        [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d), n); },
        [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d * d), n); });
  }
  if (name == "null_wave") {
    if (d != 4) throw InvalidInput("higgs_catalog: null_wave needs dim 4");
    const Real amp = param(p, "amp", 0.6);
    const Real omega = param(p, "omega", 0.9);
    const Matrix t = abelian_generator(n, false);
    const std::array<Real, 4> k{1.0, 1.0, 0.0, 0.0};
    auto arg = [=](const Vector& x) { return omega * (x(0) + x(1)); };
    auto value = [=](const Vector& x) { return Matrix(amp * std::sin(arg(x)) * t); };
    auto first = [=](const Vector& x) {
      MatrixList g;
      for (int mu = 0; mu < 4; ++mu) g.push_back(amp * omega * k[static_cast<std::size_t>(mu)] * std::cos(arg(x)) * t);
      return g;
    };
    auto second = [=](const Vector& x) {
      MatrixList h;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          h.push_back(-amp * omega * omega * k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(b)] *
                      std::sin(arg(x)) * t);
      return h;
    };
    return MatterField(MatterField::Kind::higgs, 4, n, value, first, second);
  }
  if (name == "constant_vacuum") {
    const Matrix phi = param(p, "v", 0.8) * abelian_generator(n, false);
    return MatterField(
        MatterField::Kind::higgs, d, n, [phi](const Vector&) { return phi; },
        [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d), n); },
        [d, n](const Vector&) { return zeros(static_cast<std::size_t>(d * d), n); });
  }
  if (name == "random_polynomial") {
    std::uint64_t counter = seed_param(p, 7) * 1000033ULL;
    const Real scale = param(p, "scale", 0.5);
    auto draw = [&] { return random_su(n, counter++, scale); };
    return polynomial_field(MatterField::Kind::higgs, d, n, random_polynomial(d, draw));
  }
  throw InvalidInput("higgs_catalog: unknown field '" + name + "'");
}

MatterField dirac_catalog(const std::string& name, const CatalogParams& p) {
  const int d = int_param(p, "dim", 4);
  const int n = int_param(p, "fiber", 2);
  if (name == "zero") {
    return MatterField(
        MatterField::Kind::dirac, d, n, [n](const Vector&) { return Matrix(Matrix::Zero(n, 4)); },
        [d, n](const Vector&) { return MatrixList(static_cast<std::size_t>(d), Matrix::Zero(n, 4)); },
        [d, n](const Vector&) { return MatrixList(static_cast<std::size_t>(d * d), Matrix::Zero(n, 4)); });
  }
  if (name == "plane_wave") {
    if (d != 4) throw InvalidInput("dirac_catalog: plane_wave needs dim 4");
    const Real omega = param(p, "omega", 1.1);
    const GammaSet gamma;
    const std::array<Real, 4> k{omega, omega, 0.0, 0.0};
    Matrix slash = Matrix::Zero(4, 4);
    for (int mu = 0; mu < 4; ++mu) slash += k[static_cast<std::size_t>(mu)] * gamma.upper(mu);
    const Eigen::FullPivLU<Matrix> lu(slash);
    Matrix w = lu.kernel().col(0);
    w /= w.norm();
    CVector<Real> c = CVector<Real>::Zero(n);
    c(0) = 1.0;
    if (n > 1) c(1) = 0.5 * kI;
    c /= c.norm();
    const Matrix base = c * w.transpose();
    auto phase = [=](const Vector& x) {
      Real s = 0.0;
      for (int mu = 0; mu < 4; ++mu) s += k[static_cast<std::size_t>(mu)] * x(mu);
      return std::exp(kI * s);
    };
    auto value = [=](const Vector& x) { return Matrix(phase(x) * base); };
    auto first = [=](const Vector& x) {
      MatrixList g;
      for (int mu = 0; mu < 4; ++mu) g.push_back(kI * k[static_cast<std::size_t>(mu)] * phase(x) * base);
      return g;
    };
    auto second = [=](const Vector& x) {
      MatrixList h;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          h.push_back(-k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(b)] * phase(x) * base);
      return h;
    };
    return MatterField(MatterField::Kind::dirac, 4, n, value, first, second);
  }
  if (name == "random_polynomial") {
    std::mt19937_64 rng(seed_param(p, 9));
    std::normal_distribution<Real> normal(0.0, 1.0);
    const Real scale = param(p, "scale", 0.5);
    auto draw = [&] {
      Matrix m(n, 4);
      for (int j = 0; j < 4; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = scale * Complex(normal(rng), normal(rng));
      return m;
    };
    return polynomial_field(MatterField::Kind::dirac, d, n, random_polynomial(d, draw));
  }
  throw InvalidInput("dirac_catalog: unknown field '" + name + "'");
}

}  // namespace levy
