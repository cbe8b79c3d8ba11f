#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levy/geometry.hpp"

namespace levy {

/// Numeric parameters of a catalog entry; missing keys take documented defaults.
using CatalogParams = std::map<std::string, double>;

/// Current j_nu(x), index nu.
using CurrentFn = std::function<MatrixList(const Vector&)>;

struct CatalogEntry {
  std::string name;
  Connection connection;
  /// Metric under which `ym_exact` / `current` hold.
  Metric metric;
  /// True when g^{lam mu} nabla_lam F_{mu nu} = 0 holds analytically.
  bool ym_exact = false;
  /// Known current with g^{lam mu} nabla_lam F_{mu nu} = j_nu, when one is known analytically.
  std::optional<CurrentFn> current;
};

/// Names accepted by `catalog`.
const std::vector<std::string>& catalog_names();

/// Analytic test connections.
///
///   zero                     A = 0
///   pure_gauge               A = b^{-1} db, b(x) = exp(x^0 T_0) ... exp(x^{d-1} T_{d-1}); F = 0
///                            params: dim=4, fiber=2, scale=0.8, seed=1, axes=dim (generators beyond
///                            `axes` are zero, so axes=1 gives b = exp(x^0 T))
///   abelian_linear           A_nu = c_{mu nu} x^mu T; F constant
///                            params: dim=4, fiber=2, scale=0.5, seed=2, u1=0 (T = i I_N when u1=1)
///   abelian_planted_current  A_nu = (c_{mu nu} x^mu + x^T Q_nu x / 2) T with the current it sources
///                            params: dim=4, fiber=2, scale=0.5, seed=3, u1=0
///   bpst_instanton           SU(2) instanton, regular gauge, Euclidean R^4
///                            params: rho=1, c0..c3=0
///   null_plane_wave          A_mu = amp * a_mu sin(omega k.x + phase) T, k = (1,1,0,0) null, a = (0,0,1,0)
///                            params: amp=0.7, omega=1.3, phase=0.2, fiber=2
///   random_polynomial        generic quadratic su(N)-valued polynomial (not a Yang-Mills solution)
///                            params: dim=4, fiber=2, scale=0.4, seed=4
///
/// The metric only matters for abelian_planted_current (defaults: bpst -> delta,
/// null_plane_wave -> eta, others -> delta).
CatalogEntry catalog(const std::string& name, const CatalogParams& params = {},
                     std::optional<Metric> metric = std::nullopt);

/// Seeded random element of su(N) with Frobenius norm `scale`.
Matrix random_su(int n, std::uint64_t seed, Real scale = 1.0);

/// Generator used by the abelian catalog entries: diag(i/2, -i/2, 0, ...) or i I_N.
Matrix abelian_generator(int n, bool u1);

/// Higgs fields.
///
///   zero              phi = 0
///   null_wave         phi = amp sin(omega k.x) T with the null_plane_wave generator T;
///                     with A = null_plane_wave and m = l = 0 the pair solves Yang-Mills-Higgs.
///                     params: amp=0.6, omega=0.9, fiber=2
///   constant_vacuum   phi = v T; with A abelian along T and m^2 = l v^2 tr(T^*T) a solution.
///                     params: v=0.8, fiber=2
///   random_polynomial generic quadratic su(N) polynomial. params: dim=4, fiber=2, scale=0.5, seed=7
MatterField higgs_catalog(const std::string& name, const CatalogParams& params = {});

/// Dirac fields.
///
///   zero              psi = 0
///   plane_wave        psi = c (x) w exp(i k.x), k = omega (1,1,0,0), (gamma^mu k_mu) w = 0;
///                     massless free solution.  params: omega=1.1, fiber=2
///   random_polynomial generic complex quadratic polynomial. params: dim=4, fiber=2, scale=0.5, seed=9
MatterField dirac_catalog(const std::string& name, const CatalogParams& params = {});

}  // namespace levy
