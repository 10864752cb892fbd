#include <Eigen/Dense>

#include <cmath>

#include "doctest.h"
#include "sympopt/manifold.hpp"
#include "sympopt/retraction.hpp"
#include "sympopt/rng.hpp"

using namespace sympopt;

TEST_CASE("make_poisson produces the standard block pattern") {
  const Eigen::MatrixXd j1 = make_poisson(Dim(1));
  Eigen::MatrixXd expected1(2, 2);
  expected1 << 0, 1, -1, 0;
  CHECK((j1 - expected1).norm() == 0.0);

  const Eigen::MatrixXd j2 = make_poisson(Dim(2));
  Eigen::MatrixXd expected2(4, 4);
  expected2 << 0, 0, 1, 0,
               0, 0, 0, 1,
              -1, 0, 0, 0,
               0, -1, 0, 0;
  CHECK((j2 - expected2).norm() == 0.0);

  const Eigen::MatrixXd j3 = make_poisson(Dim(3));
  CHECK((j3 * j3 + Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);
  CHECK((j3.transpose() + j3).norm() == 0.0);
  CHECK_THROWS_AS(Dim(0), std::invalid_argument);
}

TEST_CASE("certify_symplectic residuals") {
  const int d = 4;
  CHECK(certify_symplectic(Eigen::MatrixXd::Identity(d, d)).ok);
  CHECK(certify_symplectic(Eigen::MatrixXd::Identity(d, d)).residual == 0.0);

  const Eigen::MatrixXd j = make_poisson(Dim(2));
  const CertResult at_j = certify_symplectic(j);
  CHECK(at_j.ok);
  CHECK(at_j.residual == 0.0);

  // M = 2I gives M^T J M = 4J, residual ||3J||_F = 3 sqrt(2) per n = 1 block
  const CertResult doubled = certify_symplectic(2.0 * Eigen::MatrixXd::Identity(2, 2));
  CHECK_FALSE(doubled.ok);
  CHECK(doubled.residual == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-14));

  Eigen::MatrixXd diag(2, 2);
  diag << 2.0, 0.0, 0.0, 0.5;
  const CertResult scaled = certify_symplectic(diag);
  CHECK(scaled.ok);
  CHECK(scaled.residual <= 1e-15);

  CHECK_THROWS_AS(certify_symplectic(Eigen::MatrixXd::Identity(3, 3)), std::invalid_argument);
}

TEST_CASE("SymplecticPoint construction enforces certification") {
  CHECK_THROWS_AS(SymplecticPoint(2.0 * Eigen::MatrixXd::Identity(2, 2)), CertificationError);
  const SymplecticPoint p(make_poisson(Dim(2)));
  CHECK(p.n() == 2);
  CHECK(p.cert_residual() == 0.0);
  // group inverse is exact: -J M^T J
  CHECK((p.inverse() * p.matrix() - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-15);
}

TEST_CASE("constraint_values on hand-checked points") {
  CHECK(constraint_count(Dim(1)) == 1);
  CHECK(constraint_count(Dim(2)) == 6);
  CHECK(constraint_count(Dim(3)) == 15);

  const Eigen::VectorXd at_identity = constraint_values(Eigen::MatrixXd::Identity(2, 2));
  REQUIRE(at_identity.size() == 1);
  CHECK(at_identity(0) == 0.0);

  Eigen::MatrixXd diag(2, 2);
  diag << 2.0, 0.0, 0.0, 0.5;
  CHECK(constraint_values(diag)(0) == 0.0);

  Eigen::MatrixXd shear(2, 2);  // I + E_12, det 1, F_11 = 1*1 - 0*1 - 1 = 0
  shear << 1.0, 1.0, 0.0, 1.0;
  CHECK(constraint_values(shear)(0) == 0.0);
}

TEST_CASE("constraint_values agrees with the certification residual") {
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 34; ++trial) {
      const SymplecticPoint m = random_symplectic(Dim(n), 100 * n + trial, 1.0);
      const Eigen::VectorXd values = constraint_values(m.matrix());
      const double sup = values.cwiseAbs().maxCoeff();
      CHECK(sup <= kCertTol);
      // the two residuals vanish together within a factor of 10
      const double cert = m.cert_residual();
      CHECK(sup <= cert + 1e-15);
      CHECK(cert <= 10.0 * sup + 1e-13);
    }
  }
}

TEST_CASE("tangent_ambient on simple inputs") {
  const Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
  const SymplecticPoint at_i(id2);
  const Eigen::MatrixXd j = make_poisson(Dim(1));

  CHECK(tangent_ambient(SymTangent(at_i, Eigen::MatrixXd::Zero(2, 2))).norm() == 0.0);
  CHECK((tangent_ambient(SymTangent(at_i, id2)) - j).norm() == 0.0);

  const SymplecticPoint at_j(j);
  CHECK((tangent_ambient(SymTangent(at_j, id2)) + id2).norm() == 0.0);  // J*J = -I
}

TEST_CASE("ambient_to_tangent recovers parameters and flags non-tangency") {
  const Eigen::MatrixXd id2 = Eigen::MatrixXd::Identity(2, 2);
  const SymplecticPoint at_i(id2);
  const Eigen::MatrixXd j = make_poisson(Dim(1));

  const TangentProjection from_j = ambient_to_tangent(at_i, j);
  CHECK((from_j.tangent.s() - id2).norm() <= 1e-15);
  CHECK(from_j.asym_residual == 0.0);

  // the identity is not tangent at the identity: residual ||2J||_F
  const TangentProjection from_id = ambient_to_tangent(at_i, id2);
  CHECK(from_id.asym_residual == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("ambient round-trip is the identity on tangent vectors") {
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 34; ++trial) {
      Rng rng(7000 + 100 * n + trial);
      const SymplecticPoint m = random_symplectic(Dim(n), 500 + 10 * n + trial, 1.0);
      const SymTangent v(m, rng.symmetric(2 * n, 1.0));
      const TangentProjection back = ambient_to_tangent(m, tangent_ambient(v));
      CHECK((back.tangent.s() - v.s()).norm() <= 1e-12 * (1.0 + v.s().norm()));
      CHECK(back.asym_residual <= 1e-12 * (1.0 + v.s().norm()));
    }
  }
}

TEST_CASE("tangent_basis sizes and the n = 1 pattern") {
  CHECK(tangent_dim(Dim(1)) == 3);
  CHECK(tangent_dim(Dim(2)) == 10);
  CHECK(tangent_basis(Dim(1)).size() == 3);
  CHECK(tangent_basis(Dim(2)).size() == 10);

  // e_(1,1) = J E_11 = [[0, 0], [-1, 0]]
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 0, -1, 0;
  CHECK((tangent_basis(Dim(1))[0] - expected).norm() == 0.0);
}

TEST_CASE("tangent basis spans the tangent space at random points") {
  for (int n = 1; n <= 3; ++n) {
    const auto basis = tangent_basis(Dim(n));
    const SymplecticPoint m = random_symplectic(Dim(n), 40 + n, 1.0);
    const int mdim = tangent_dim(Dim(n));
    Eigen::MatrixXd gram(mdim, mdim);
    for (int p = 0; p < mdim; ++p)
      for (int q = 0; q < mdim; ++q)
        gram(p, q) = (m.matrix() * basis[p]).cwiseProduct(m.matrix() * basis[q]).sum();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    CHECK(es.eigenvalues()(0) > 0.0);
  }
}

TEST_CASE("random_symplectic determinism bounds and the scale-zero case") {
  const SymplecticPoint at_zero = random_symplectic(Dim(2), 9, 0.0);
  CHECK((at_zero.matrix() - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);

  const SymplecticPoint a = random_symplectic(Dim(2), 1234, 1.0);
  const SymplecticPoint b = random_symplectic(Dim(2), 1234, 1.0);
  CHECK((a.matrix() - b.matrix()).norm() == 0.0);
  CHECK(certify_symplectic(a.matrix(), 1e-12).ok);
}

TEST_CASE("certified points satisfy the block relations") {
  for (int n = 1; n <= 3; ++n) {
    const SymplecticPoint m = random_symplectic(Dim(n), 77 + n, 1.0);
    const Eigen::MatrixXd a = m.block_a();
    const Eigen::MatrixXd b = m.block_b();
    const Eigen::MatrixXd c = m.block_c();
    const Eigen::MatrixXd d = m.block_d();
    CHECK((a.transpose() * c - c.transpose() * a).norm() <= kCertTol);
    CHECK((b.transpose() * d - d.transpose() * b).norm() <= kCertTol);
    CHECK((a.transpose() * d - c.transpose() * b - Eigen::MatrixXd::Identity(n, n)).norm() <=
          kCertTol);
  }
}
