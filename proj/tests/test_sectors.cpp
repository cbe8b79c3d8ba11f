#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "levy/sectors.hpp"

using namespace levy;

namespace {

Vector point(unsigned seed) {
  std::srand(seed);
  return 0.6 * Vector::Random(4);
}

CurrentFn ymh_eq2(const Connection& a, const MatterField& phi, const HiggsParams& p, const Metric& g) {
  return [=](const Vector& x) {
    const SectorResidual r = ymh_residual_pointwise(a, phi, p, x, g);
    MatrixList out;
    for (int nu = 0; nu < 4; ++nu) out.push_back(r.at("higgs_eq2_" + std::to_string(nu)));
    return out;
  };
}

CurrentFn qcd_source(const Connection& a, const MatterField& psi, Real m) {
  return [=](const Vector& x) {
    const SectorResidual r = qcd_residual_pointwise(a, psi, m, x);
    MatrixList out;
    for (int nu = 0; nu < 4; ++nu) out.push_back(r.at("source_" + std::to_string(nu)));
    return out;
  };
}

/// Lighter needles for smooth, slow curves.
PathspaceOptions light_options(const Metric& g) {
  PathspaceOptions o;
  o.metric = g;
  o.first = {{16, 32, 64, 128}, {1e-3, true}, 1e-5};
  o.outer = {{16, 32, 64, 128}, {1e-3, true}, 1e-5};
  o.inner = {{128, 256, 512, 1024}, {1e-3, true}, 1e-5};
  return o;
}

Curve gentle_curve(std::uint64_t seed) {
  RandomCurveSpec s;
  s.modes = 2;
  s.scale = 0.3;
  return random_curve(seed, s, 4, 1024);
}

}  // namespace

TEST_CASE("parameters and residual containers") {
  CHECK_THROWS_AS(HiggsParams(-1.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(HiggsParams(0.0, -0.1), InvalidInput);
  SectorResidual r;
  r.location = "point";
  r.add("a", Matrix::Constant(2, 2, Complex(0.0, -3.0)));
  r.add("b", Matrix::Constant(1, 1, 1.0));
  CHECK(r.norm("a") == 3.0);
  CHECK(r.max_norm() == 3.0);
  CHECK_THROWS_AS(r.at("c"), InvalidInput);
  CHECK_THROWS_AS(r.add("nan", Matrix::Constant(1, 1, std::numeric_limits<Real>::quiet_NaN())), NumericalError);
  const nlohmann::json j = to_json(r);
  CHECK(j["location"] == "point");
  CHECK(j["components"].size() == 2);
  CHECK(j["components"][0]["name"] == "a");
  CHECK(j["components"][0]["im"][3] == -3.0);
}

TEST_CASE("pointwise Yang-Mills-Higgs solutions") {
  SUBCASE("null wave pair, massless") {
    const CatalogEntry e = catalog("null_plane_wave");
    const SectorResidual r = ymh_residual_pointwise(e.connection, higgs_catalog("null_wave"), {}, point(1), e.metric);
    CHECK(r.max_norm() < 1e-12);
  }
  SUBCASE("constant vacuum in an abelian background") {
    const CatalogEntry e = catalog("abelian_linear");
    const Real l = 1.0, v = 0.8;
    const HiggsParams p(std::sqrt(l * v * v * 0.5), l);
    const SectorResidual r = ymh_residual_pointwise(e.connection, higgs_catalog("constant_vacuum"), p, point(2), e.metric);
    CHECK(r.max_norm() < 1e-12);
  }
  SUBCASE("random fields do not solve the equations") {
    const CatalogEntry e = catalog("random_polynomial");
    const SectorResidual r =
        ymh_residual_pointwise(e.connection, higgs_catalog("random_polynomial"), {0.5, 0.3}, point(3), e.metric);
    CHECK(r.norm("higgs_eq1") > 1e-3);
  }
}

TEST_CASE("path-space Yang-Mills-Higgs residuals are transported pointwise residuals") {
  const CatalogEntry e = catalog("random_polynomial");
  const MatterField phi = higgs_catalog("random_polynomial");
  const HiggsParams p(0.5, 0.3);
  const Metric g = Metric::minkowski(4);
  const Curve sigma = gentle_curve(3);
  const PathspaceOptions o = light_options(g);
  const SectorResidual ps = ymh_residual_pathspace(e.connection, phi, p, sigma, o);
  const PathKernels k(e.connection, sigma, 1);
  const Matrix& u = k.table().final();
  const Matrix& ui = k.table().inverse(k.cells());
  CHECK(max_norm(ps.at("higgs_eq2") + u * transported_current(k, ymh_eq2(e.connection, phi, p, g))) < 1e-9);
  CHECK(ps.norm("endpoint_closed_form") < 1e-5);
  const SectorResidual pw = ymh_residual_pointwise(e.connection, phi, p, sigma.position(1.0), g);
  CHECK(max_norm(ps.at("higgs_eq1") - ui * pw.at("higgs_eq1") * u) < 1e-5);
  CHECK(ps.norm("higgs_eq2") > 1e-3);
}

TEST_CASE("exact Yang-Mills-Higgs pair solves the path-space system") {
  const CatalogEntry e = catalog("null_plane_wave");
  const MatterField phi = higgs_catalog("null_wave");
  const Curve sigma = gentle_curve(5);
  const SectorResidual ps = ymh_residual_pathspace(e.connection, phi, {}, sigma, light_options(e.metric));
  CHECK(ps.norm("higgs_eq1") < 1e-5);
  CHECK(ps.norm("higgs_eq2") < 1e-8);
  const Variation u = sin_basis(1, 1, 4, 1024), v = sin_basis(2, 2, 4, 1024);
  PathspaceOptions o = light_options(e.metric);
  o.field_equation = false;
  const SectorResidual b = ymh_system_B(e.connection, phi, {}, sigma, u, v, o);
  CHECK(b.norm("closedness") < 1e-6);
  CHECK(b.norm("divergence") < 1e-8);
  CHECK(b.norm("compatibility") < 1e-9);
  CHECK_THROWS_AS(b.at("field"), InvalidInput);
  CHECK_THROWS_AS(ymh_system_B(e.connection, phi, {}, sigma, f_basis(1, 0, 4, 1024), v, o), InvalidInput);
}

TEST_CASE("Higgs system B: compatibility and divergence identity for generic fields") {
  const CatalogEntry e = catalog("random_polynomial");
  const MatterField phi = higgs_catalog("random_polynomial");
  const HiggsParams p(0.5, 0.3);
  const Metric g = Metric::euclidean(4);
  const Curve sigma = random_curve(4, {}, 4, 1024);
  PathspaceOptions o;
  o.metric = g;
  o.field_equation = false;
  const SectorResidual b = ymh_system_B(e.connection, phi, p, sigma, sin_basis(2, 0, 4, 1024), sin_basis(1, 3, 4, 1024), o);
  const PathKernels k(e.connection, sigma, 1);
  CHECK(b.norm("compatibility") < 1e-9);
  CHECK(max_norm(b.at("divergence") + transported_current(k, ymh_eq2(e.connection, phi, p, g))) < 1e-9);
}

TEST_CASE("Higgs functional is gauge covariant") {
  const CatalogEntry e = catalog("random_polynomial");
  const MatterField phi = higgs_catalog("random_polynomial");
  const Matrix b = expm(random_su(2, 31));
  const Connection ar = gauge_rotate(e.connection, b);
  const MatterField phir(MatterField::Kind::higgs, 4, 2, [=](const Vector& x) { return Matrix(b.adjoint() * phi.value(x) * b); });
  const Curve sigma = random_curve(2, {}, 4, 512);
  CHECK(max_norm(higgs_functional(ar, phir, sigma) - b.adjoint() * higgs_functional(e.connection, phi, sigma) * b) < 1e-12);
}

TEST_CASE("Dirac current along a curve") {
  const CatalogEntry e = catalog("random_polynomial");
  const MatterField psi = dirac_catalog("random_polynomial");
  const Curve sigma = random_curve(6, {}, 4, 512);
  const PathKernels k(e.connection, sigma, 1);
  const Matrix j = dirac_current_integral(k, psi);
  CHECK(is_anti_hermitian(j));
  CHECK(is_traceless(j));
  CHECK(max_norm(j) > 1e-3);
  // psi -> b^{-1} psi with A -> b^{-1} A b rotates the current
  const Matrix b = expm(random_su(2, 41));
  const MatterField psir(MatterField::Kind::dirac, 4, 2, [=](const Vector& x) { return Matrix(b.adjoint() * psi.value(x)); });
  const PathKernels kr(gauge_rotate(e.connection, b), sigma, 1);
  CHECK(max_norm(dirac_current_integral(kr, psir) - b.adjoint() * j * b) < 1e-12);
}

TEST_CASE("path-space Dirac residuals") {
  SUBCASE("free massless plane wave") {
    const CatalogEntry e = catalog("zero");
    const MatterField psi = dirac_catalog("plane_wave");
    CHECK(qcd_residual_pointwise(e.connection, psi, 0.0, point(4)).norm("dirac") < 1e-12);
    const Curve sigma = gentle_curve(7);
    const SectorResidual q = qcd_residual_pathspace(e.connection, psi, 0.0, sigma, sin_basis(1, 2, 4, 1024));
    CHECK(q.norm("dirac") < 1e-6);
    CHECK(q.norm("compatibility") < 1e-9);
    CHECK(q.norm("consistency") < 1e-12);
  }
  SUBCASE("generic fields obey the transported identities") {
    const CatalogEntry e = catalog("random_polynomial");
    const MatterField psi = dirac_catalog("random_polynomial");
    const Real m = 0.4;
    const Curve sigma = random_curve(8, {}, 4, 1024);
    const SectorResidual q = qcd_residual_pathspace(e.connection, psi, m, sigma, sin_basis(2, 1, 4, 1024));
    const PathKernels k(e.connection, sigma, 1);
    const SectorResidual pw = qcd_residual_pointwise(e.connection, psi, m, sigma.position(1.0));
    CHECK(max_norm(q.at("dirac") - k.table().inverse(k.cells()) * pw.at("dirac")) < 1e-5);
    const Matrix t = transported_current(k, qcd_source(e.connection, psi, m));
    CHECK(max_norm(q.at("box") + k.table().final() * t) < 1e-9);
    CHECK(max_norm(q.at("divergence") + t) < 1e-9);
    CHECK(q.norm("consistency") < 1e-12);
    CHECK(q.norm("compatibility") < 1e-9);
    CHECK(q.norm("dirac") > 1e-3);
  }
  CHECK_THROWS_AS(qcd_residual_pathspace(catalog("zero").connection, dirac_catalog("zero"), 0.0, gentle_curve(1),
                                         f_basis(1, 0, 4, 1024)),
                  InvalidInput);
}
