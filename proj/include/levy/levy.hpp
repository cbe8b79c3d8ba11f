#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "levy/quadrature.hpp"
#include "levy/transport.hpp"

namespace levy {

enum class BasisKind { sin, f };

/// One element of a variation basis: scale * e_index (sin) or scale * f_index (f).
struct BasisElement {
  BasisKind kind = BasisKind::sin;
  int index = 1;
  Real scale = 1.0;
};

/// Scalar profile of a basis element and its derivative at t.
std::pair<Real, Real> basis_profile(const BasisElement& b, Real t);
Variation basis_variation(const BasisElement& b, int mu, int dim, int cells);

/// Weight operator R acting diagonally on the basis: R b_n = factor(n) b_n.
struct WeightOperator {
  std::string name;
  std::function<Real(int)> factor;
};

/// N f_n = (n - 1) f_n.
WeightOperator number_operator();
/// pi N.
WeightOperator scaled_number_operator(Real c);

struct TraceConfig {
  enum class Extrapolation { none, cesaro_tail_fit };

  BasisKind basis = BasisKind::sin;
  Metric metric = Metric::euclidean(4);
  int n_max = 256;
  std::optional<WeightOperator> weight;
  Extrapolation extrapolation = Extrapolation::cesaro_tail_fit;
  /// Relative RMS residual of the tail fit above which the series is flagged.
  Real fit_tolerance = 5e-2;
  int threads = 1;
};

/// Partial Cesaro means m_1..m_n and the tail-fit limit m_n ~ L + a n^{-p}.
struct CesaroSeries {
  std::vector<Matrix> means;
  Matrix limit;
  Real exponent = 0.0;
  /// RMS misfit of the tail fit relative to the size of the tail.
  Real fit_residual = 0.0;
  bool converged = true;

  /// Columns n, mean_norm, limit_norm, and error_norm when a reference is given.
  void write_csv(std::ostream& out, const std::optional<Matrix>& reference = std::nullopt) const;
};

struct TailFit {
  Matrix limit;
  Matrix amplitude;
  Real exponent = 0.0;
  Real residual = 0.0;
};

/// Least-squares fit of m_n = L + a n^{-p} over n in [first, last] (1-based); p by
/// golden-section search on [0.05, 4].
TailFit fit_tail(const std::vector<Matrix>& means, int first, int last);

/// Decay rate p of |m_n - reference| ~ n^{-p}: minus the log-log slope over n in [lo, hi] (1-based).
Real decay_exponent(const std::vector<Matrix>& means, const Matrix& reference, int lo, int hi);

/// Q(p_mu b, p_mu b) for one basis element and direction.
using DiagonalForm = std::function<Matrix(const BasisElement&, int mu)>;
/// A general bilinear evaluator (u, v) -> Q(u, v).
using BilinearForm = std::function<Matrix(const Variation&, const Variation&)>;

/// m_n = (1/n) sum_{k<=n} sum_mu g^{mu mu} Q(p_mu R b_k, p_mu R b_k).
CesaroSeries levy_trace_cesaro(const DiagonalForm& q, const TraceConfig& cfg);
CesaroSeries levy_trace_cesaro(const BilinearForm& q, const TraceConfig& cfg, int cells);

/// int_0^1 g^{mu nu} K^L_{mu nu}(t) dt.
Matrix levy_trace_integral(const KernelTriple& k, const Metric& g);

/// A kernel triple given by smooth profiles times fixed matrices:
///   K^V_{mu nu}(t, s) = sum a(t) b(s) X,  K^L_{mu nu}(t) = sum l(t) X,  K^S_{mu nu}(t) = sum s(t) X.
/// Levy terms are symmetrised and singular terms antisymmetrised in (mu, nu).
class SyntheticKernel {
 public:
  using Profile = std::function<Real(Real)>;

  SyntheticKernel(int dim, int fiber, int panels = 4096, int points = 8);

  void add_volterra(int mu, int nu, Profile a, Profile b, const Matrix& x);
  void add_levy(int mu, int nu, Profile l, const Matrix& x);
  void add_singular(int mu, int nu, Profile s, const Matrix& x);

  int dim() const { return dim_; }
  /// Q(u, v) by composite Gauss-Legendre quadrature.
  Matrix bilinear(const PathFunction& u, const PathFunction& v) const;
  /// Fast diagonal Q(p_mu b, p_mu b).
  Matrix diagonal(const BasisElement& b, int mu) const;
  Matrix integral_trace(const Metric& g) const;

 private:
  struct Term {
    int mu, nu;
    Vector a, b;  // sampled at the quadrature nodes
    Matrix x;
  };
  int dim_;
  int fiber_;
  GaussRule rule_;
  std::vector<Term> volterra_, levy_, singular_;
  Vector sample(const Profile& f) const;
};

enum class OperatorMode { integral, cesaro };

struct OperatorResult {
  Matrix value;
  std::optional<CesaroSeries> series;
};

/// D^2_{tr^g_L} U_{1,0}(sigma): Levy Laplacian (g = delta) or d'Alembertian (g = eta).
/// Integral mode: -int U_{1,t} g^{mu nu} nabla_mu F_{nu lam} sigma'^lam U_{t,0} dt on sigma's grid.
/// Cesaro mode: the fitted Cesaro limit, evaluated on a grid refined to resolve b_{n_max}.
OperatorResult levy_operator_on_transport(const Connection& a, const Curve& sigma, OperatorMode mode,
                                          const TraceConfig& cfg);
/// Integral mode from precomputed kernels.
Matrix levy_operator_integral(const PathKernels& k, const Metric& g);

/// div^g_L B^A(sigma).
OperatorResult levy_divergence_B(const Connection& a, const Curve& sigma, OperatorMode mode, const TraceConfig& cfg);
/// Integral mode: int g^{mu mu} R^L_{mu mu}, R^L built with U_{0,t} ... U_{t,0}.
Matrix levy_divergence_integral(const PathKernels& k, const Metric& g);

/// Grid used by the Cesaro evaluators: max(M, next power of two >= 16 n_max).
int cesaro_cells(int cells, int n_max);

struct EndpointOptions {
  /// Needle sharpness k (widths 1/k).  The grid needs at least 2 max(k) cells.
  std::vector<int> ks{32, 64, 128, 256, 512};
  /// A needle moves the endpoint by eps h whatever its width, so one step fits all k.
  FiniteDifference fd{1e-3, true};
  /// Flag when the last Neville level changes the value by more than this (max-norm).
  Real tolerance = 1e-5;
};

struct EndpointResult {
  Matrix value;
  /// Contribution of the last extrapolation level.
  Real change = 0.0;
  bool converged = true;
  /// Directional derivatives along the needles, one per k.
  std::vector<Matrix> samples;
};

/// D_h Phi(sigma): derivatives along u_k = h max(0, k(t - 1 + 1/k)), extrapolated to 1/k -> 0.
EndpointResult endpoint_derivation(const CurveFunctional& phi, const Curve& sigma, const Vector& h,
                                   const EndpointOptions& opts = {});

/// D_{h1} D_{h2} Phi(sigma).  Every inner needle must fit inside the last linear piece of
/// every outer one: min(inner k) >= max(outer k).
EndpointResult nested_endpoint_derivation(const CurveFunctional& phi, const Curve& sigma, const Vector& h_outer,
                                          const Vector& h_inner, const EndpointOptions& outer,
                                          const EndpointOptions& inner);

/// Series form of S_h for a linear functional T:  T(h f_1) + sum_{n>=1} sqrt(2) (-1)^n T(h f_{n+1}),
/// from partial sums at terms, terms/2, terms/4, terms/8 extrapolated in 1/n (terms a multiple of 8).
Matrix endpoint_series(const std::function<Matrix(const Variation&)>& t, const Vector& h, int terms, int cells);

}  // namespace levy
