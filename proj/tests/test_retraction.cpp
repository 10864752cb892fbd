#include <Eigen/Dense>

#include "doctest.h"
#include "sympopt/manifold.hpp"
#include "sympopt/retraction.hpp"
#include "sympopt/rng.hpp"

using namespace sympopt;

TEST_CASE("retracting the zero parameter returns the base point") {
  for (int n = 1; n <= 3; ++n) {
    const SymplecticPoint m = random_symplectic(Dim(n), 11 + n, 1.0);
    const SymplecticPoint back = cayley_retract(m, Eigen::MatrixXd::Zero(2 * n, 2 * n));
    CHECK((back.matrix() - m.matrix()).norm() <= 1e-15 * (1.0 + m.matrix().norm()));
  }
}

TEST_CASE("hand-evaluated retraction at the identity") {
  const SymplecticPoint at_i(Eigen::MatrixXd::Identity(2, 2));
  // -(I + 2J)^{-1}(I - 2J) = [[3/5, 4/5], [-4/5, 3/5]]
  const SymplecticPoint r = cayley_retract(at_i, Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd expected(2, 2);
  expected << 0.6, 0.8, -0.8, 0.6;
  CHECK((r.matrix() - expected).norm() <= 1e-15);
  CHECK(r.cert_residual() <= 1e-14);
}

TEST_CASE("differential at the origin is the identity (finite differences)") {
  int counter = 0;
  for (int n = 1; n <= 3; ++n) {
    const Dim dim(n);
    const Eigen::MatrixXd j = make_poisson(dim);
    for (int trial = 0; trial < 34; ++trial) {
      Rng rng(90000 + 100 * n + trial);
      const SymplecticPoint m = random_symplectic(dim, 300 + 10 * n + trial, 1.0);
      const Eigen::MatrixXd s = rng.unit_symmetric(2 * n);
      const double h = 1e-5;
      const Eigen::MatrixXd fd =
          (cayley_retract(m, h * s).matrix() - cayley_retract(m, -h * s).matrix()) / (2.0 * h);
      const Eigen::MatrixXd expected = m.matrix() * j * s;
      CHECK((fd - expected).norm() <= 1e-6 * (1.0 + expected.norm()));
      ++counter;
    }
  }
  CHECK(counter >= 100);
}

TEST_CASE("retraction output stays symplectic for large parameters") {
  // Flat 1e-10 holds on moderately conditioned pencils. Near-singular draws
  // produce outputs whose norm makes any double representation carry a
  // residual ~ eps * ||R||^2, so the unfiltered assertion is the
  // conditioning-scaled contract of the operation itself.
  for (int n = 1; n <= 3; ++n) {
    const Eigen::MatrixXd j = make_poisson(Dim(n));
    for (int trial = 0; trial < 34; ++trial) {
      Rng rng(50000 + 100 * n + trial);
      const SymplecticPoint m = random_symplectic(Dim(n), 700 + trial, 1.0);
      const Eigen::MatrixXd s = rng.unit_symmetric(2 * n) * rng.uniform(0.0, 10.0);
      try {
        const SymplecticPoint r = retract_tangent(m, SymTangent(m, s));
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(s + 2.0 * j);
        const double cond = svd.singularValues()(0) / svd.singularValues()(2 * n - 1);
        CHECK(r.cert_residual() <= 1e-10 * std::max(1.0, cond));
        if (cond <= 1e2) CHECK(r.cert_residual() <= 1e-10);
      } catch (const SingularPencil&) {
        // guarded draw
      }
    }
  }
}

TEST_CASE("pencil transposition preserves conditioning") {
  const Eigen::MatrixXd j = make_poisson(Dim(2));
  Rng rng(4242);
  const Eigen::MatrixXd s = rng.symmetric(4, 3.0);
  const Eigen::JacobiSVD<Eigen::MatrixXd> plus(s + 2.0 * j);
  const Eigen::JacobiSVD<Eigen::MatrixXd> minus(s - 2.0 * j);
  const double cond_plus = plus.singularValues()(0) / plus.singularValues()(3);
  const double cond_minus = minus.singularValues()(0) / minus.singularValues()(3);
  CHECK(std::abs(cond_plus / cond_minus - 1.0) <= 1e-12);
}

TEST_CASE("a singular pencil is rejected") {
  // S = diag(2, -2) makes det(S + 2J) = 0 for n = 1
  const SymplecticPoint at_i(Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd s(2, 2);
  s << 2.0, 0.0, 0.0, -2.0;
  CHECK_THROWS_AS(cayley_retract(at_i, s), SingularPencil);
  CHECK_THROWS_AS(cayley_retract(at_i, Eigen::MatrixXd::Ones(4, 4)), std::invalid_argument);

  Eigen::MatrixXd asym(2, 2);
  asym << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(cayley_retract(at_i, asym), std::invalid_argument);
}

TEST_CASE("retraction is deterministic") {
  const SymplecticPoint m = random_symplectic(Dim(2), 5, 1.0);
  Rng rng(6);
  const Eigen::MatrixXd s = rng.symmetric(4, 1.0);
  const SymplecticPoint a = cayley_retract(m, s);
  const SymplecticPoint b = cayley_retract(m, s);
  CHECK((a.matrix() - b.matrix()).norm() == 0.0);
}
