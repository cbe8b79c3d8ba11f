#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/catalog.hpp"

using namespace levy;

namespace {

Vector point(int d, unsigned seed) {
  std::srand(seed);
  return 0.6 * Vector::Random(d);
}

}  // namespace

TEST_CASE("metric signs") {
  const Metric e = Metric::euclidean(3), m = Metric::minkowski(4);
  CHECK(e.diag(2) == 1.0);
  CHECK(m.diag(0) == 1.0);
  CHECK(m.diag(3) == -1.0);
  CHECK_THROWS_AS(Metric::euclidean(0), InvalidInput);
}

TEST_CASE("catalog connections take values in su(N)") {
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    CAPTURE(name);
    CHECK(e.connection.in_algebra_at(point(e.connection.dim(), 1)));
  }
  CHECK_THROWS_AS(catalog("no_such_connection"), InvalidInput);
}

TEST_CASE("analytic partials agree with finite differences") {
  for (const std::string& name : catalog_names()) {
    const CatalogEntry e = catalog(name);
    const SmoothMatrixField& f = e.connection.field();
    const Vector x = point(f.dim(), 2);
    CAPTURE(name);
    const MatrixList a = f.first(x), b = f.fd_first(x);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(max_norm(a[i] - b[i]) < 1e-8);
    const MatrixList c = f.second(x), d = f.fd_second(x);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(max_norm(c[i] - d[i]) < 1e-6);
  }
}

TEST_CASE("curvature is antisymmetric and satisfies the Bianchi identity") {
  const CatalogEntry e = catalog("random_polynomial");
  const Vector x = point(4, 3);
  const ConnectionJet jet = e.connection.jet(x, 2);
  const Curvature f = curvature(jet);
  const MatrixList nf = covariant_curvature(jet, f);
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m) {
      CHECK(max_norm(f(l, m) + f(m, l)) == 0.0);
      for (int n = 0; n < 4; ++n) {
        const Matrix cyc = nf[idx3(l, m, n, 4)] + nf[idx3(m, n, l, 4)] + nf[idx3(n, l, m, 4)];
        CHECK(max_norm(cyc) < 1e-12);
      }
    }
}

TEST_CASE("pure gauge is flat") {
  const CatalogEntry e = catalog("pure_gauge");
  const Curvature f = curvature(e.connection, point(4, 4));
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) CHECK(max_norm(f(m, n)) < 1e-12);
}

TEST_CASE("exact Yang-Mills solutions in the catalog") {
  for (const char* name : {"zero", "pure_gauge", "bpst_instanton", "null_plane_wave", "abelian_linear"}) {
    const CatalogEntry e = catalog(name);
    CAPTURE(name);
    CHECK(e.ym_exact);
    const Vector x = point(e.connection.dim(), 5);
    for (int nu = 0; nu < e.connection.dim(); ++nu) CHECK(max_norm(ym_residual(e.connection, e.metric, x, nu)) < 1e-10);
  }
  const CatalogEntry r = catalog("random_polynomial");
  CHECK_FALSE(r.ym_exact);
  Real worst = 0.0;
  for (int nu = 0; nu < 4; ++nu) worst = std::max(worst, max_norm(ym_residual(r.connection, r.metric, point(4, 5), nu)));
  CHECK(worst > 1e-3);
}

TEST_CASE("BPST instanton is self-dual") {
  const CatalogEntry e = catalog("bpst_instanton");
  const Curvature f = curvature(e.connection, point(4, 6));
  CHECK(max_norm(f(0, 1) - f(2, 3)) < 1e-12);
  CHECK(max_norm(f(0, 2) + f(1, 3)) < 1e-12);
  CHECK(max_norm(f(0, 3) - f(1, 2)) < 1e-12);
  CHECK(max_norm(f(0, 1)) > 1e-2);
}

TEST_CASE("planted current matches the divergence for both metrics") {
  for (const Metric g : {Metric::euclidean(4), Metric::minkowski(4)}) {
    const CatalogEntry e = catalog("abelian_planted_current", {}, g);
    REQUIRE(e.current);
    const Vector x = point(4, 7);
    const MatrixList j = (*e.current)(x);
    for (int nu = 0; nu < 4; ++nu) CHECK(max_norm(ym_residual(e.connection, g, x, nu, j)) < 1e-12);
    CHECK(max_norm(ym_residual(e.connection, g, x, 1)) > 1e-3);
  }
}

TEST_CASE("curvature is gauge covariant under constant rotations") {
  const CatalogEntry e = catalog("random_polynomial");
  const Matrix b = expm(random_su(2, 21));
  const Connection r = gauge_rotate(e.connection, b);
  const Vector x = point(4, 8);
  const Curvature f = curvature(e.connection, x), g = curvature(r, x);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) CHECK(max_norm(g(m, n) - b.adjoint() * f(m, n) * b) < 1e-12);
}

TEST_CASE("covariant derivatives of matter fields") {
  const CatalogEntry e = catalog("random_polynomial");
  const MatterField phi = higgs_catalog("random_polynomial");
  const Vector x = point(4, 9);
  const ConnectionJet jet = e.connection.jet(x, 1);
  const MatrixList grad = covariant_gradient(jet, phi, x);
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(max_norm(grad[mu] - covariant_derivative(e.connection, phi, x, mu)) < 1e-14);
    CHECK(is_anti_hermitian(grad[mu]));
  }
  // [nabla_mu, nabla_nu] phi = [F_{mu nu}, phi]
  const MatrixList hess = covariant_hessian(jet, phi, x);
  const Curvature f = curvature(jet);
  CHECK(max_norm(hess[idx2(0, 2, 4)] - hess[idx2(2, 0, 4)] - commutator(f(0, 2), phi.value(x))) < 1e-12);
  CHECK_THROWS_AS(covariant_derivative(e.connection, dirac_catalog("zero"), x, 0), InvalidInput);
  CHECK_THROWS_AS(higgs_catalog("nope"), InvalidInput);
}
