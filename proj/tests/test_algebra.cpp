#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/algebra.hpp"
#include "levy/catalog.hpp"

using namespace levy;

namespace {

Matrix random_complex(int n, unsigned seed) {
  std::srand(seed);
  return Matrix::Random(n, n);
}

}  // namespace

TEST_CASE("commutator is antisymmetric and satisfies Jacobi") {
  const Matrix x = random_complex(3, 1), y = random_complex(3, 2), z = random_complex(3, 3);
  CHECK(max_norm(commutator(x, y) + commutator(y, x)) < 1e-14);
  const Matrix jacobi = commutator(x, commutator(y, z)) + commutator(y, commutator(z, x)) + commutator(z, commutator(x, y));
  CHECK(max_norm(jacobi) < 1e-13);
  CHECK_THROWS_AS(commutator(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), InvalidInput);
}

TEST_CASE("su(2) generators") {
  for (int a = 0; a < 3; ++a) {
    CHECK(is_anti_hermitian(su2_generator(a)));
    CHECK(is_traceless(su2_generator(a)));
  }
  // [t_a, t_b] = -eps_abc t_c
  CHECK(max_norm(commutator(su2_generator(0), su2_generator(1)) + su2_generator(2)) < 1e-15);
  CHECK(max_norm(commutator(su2_generator(1), su2_generator(2)) + su2_generator(0)) < 1e-15);
  CHECK(max_norm(pauli(0) * pauli(0) - Matrix::Identity(2, 2)) < 1e-15);
  CHECK_THROWS_AS(pauli(3), InvalidInput);
}

TEST_CASE("project_su removes the trace and rejects non-u(N) input") {
  const Matrix x = random_su(3, 5) + kI * Matrix::Identity(3, 3);
  const Matrix p = project_su(x);
  CHECK(is_traceless(p));
  CHECK(is_anti_hermitian(p));
  CHECK(max_norm(project_su(p) - p) < 1e-15);
  CHECK_THROWS_AS(project_su(Matrix::Identity(2, 2)), InvalidInput);
}

TEST_CASE("LieMatrix tags are checked") {
  CHECK_NOTHROW(LieMatrix(su2_generator(0), GroupTag::su));
  CHECK_NOTHROW(LieMatrix(kI * Matrix::Identity(2, 2), GroupTag::u));
  CHECK_THROWS_AS(LieMatrix(kI * Matrix::Identity(2, 2), GroupTag::su), InvalidInput);
  CHECK_THROWS_AS(LieMatrix(Matrix::Identity(2, 2), GroupTag::u), InvalidInput);
  CHECK_THROWS_AS(LieMatrix(Matrix::Zero(2, 3), GroupTag::general), InvalidInput);
  const LieMatrix c = commutator(LieMatrix(su2_generator(0), GroupTag::su), LieMatrix(su2_generator(1), GroupTag::su));
  CHECK(c.tag() == GroupTag::su);
}

TEST_CASE("gamma matrices satisfy the Clifford relation") {
  const GammaSet g;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Matrix anti = g.upper(mu) * g.upper(nu) + g.upper(nu) * g.upper(mu);
      const Real expected = mu == nu ? 2.0 * GammaSet::eta(mu) : 0.0;
      CHECK(max_norm(anti - expected * Matrix::Identity(4, 4)) < 1e-15);
      if (mu == nu) CHECK(max_norm(g.lower(mu) - GammaSet::eta(mu) * g.upper(mu)) < 1e-15);
    }
}

TEST_CASE("Dirac current is anti-Hermitian, traceless and gauge covariant") {
  const GammaSet g;
  std::srand(7);
  const Spinor psi(Matrix::Random(3, 4));
  const Matrix b = expm(random_su(3, 11));
  for (int mu = 0; mu < 4; ++mu) {
    CHECK(is_anti_hermitian(Matrix(kI * dirac_bilinear(psi, mu, g))));
    const Matrix j = dirac_current(psi, mu, g);
    CHECK(is_anti_hermitian(j));
    CHECK(is_traceless(j));
    // psi -> b^{-1} psi gives j -> b^{-1} j b
    const Spinor rotated(b.adjoint() * psi.block());
    CHECK(max_norm(dirac_current(rotated, mu, g) - b.adjoint() * j * b) < 1e-12);
  }
  CHECK_THROWS_AS(dirac_bilinear(psi, 4, g), InvalidInput);
  CHECK_THROWS_AS(Spinor(Matrix::Zero(2, 3)), InvalidInput);
}

TEST_CASE("expm maps su(N) into SU(N)") {
  const Matrix x = random_su(4, 3, 2.0);
  const Matrix u = expm(x);
  CHECK(max_norm(u.adjoint() * u - Matrix::Identity(4, 4)) < 1e-13);
  CHECK(std::abs(u.determinant() - Complex(1.0)) < 1e-12);
  CHECK(std::abs(random_su(4, 3, 2.0).norm() - 2.0) < 1e-13);
}
