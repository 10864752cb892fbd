#pragma once

#include <cstdint>

#include "sympopt/gradients.hpp"
#include "sympopt/manifold.hpp"

namespace sympopt {

// Least-squares distance to a symplectic target W:
//   G(M) = ||M - W||_F^2, grad = 2(M - W), Hess(V, W') = 2 <V, W'>.
// W is the global minimizer on Sp(2n, R).
class LeastSquaresCost {
 public:
  explicit LeastSquaresCost(SymplecticPoint w) : w_(std::move(w)) {}

  const SymplecticPoint& target() const { return w_; }
  CostModel model() const;

 private:
  SymplecticPoint w_;
};

CostModel least_squares_model(const SymplecticPoint& w);

double j_symmetry_residual(const Eigen::MatrixXd& l);  // ||L^T J - J L||_F

// Generalized Brockett cost for J-symmetric Q, N:
//   G(M) = tr(Q M N J M^T J) = -tr(M^{-1} Q M N) on Sp(2n, R),
//   grad = 2 J Q M N J, Hess(V, W') = 2 tr(V^T J Q W' N J).
// Construction rejects Q or N failing the J-symmetry residual at
// 1e-10 * (1 + ||L||_F) or failing invertibility.
class BrockettCost {
 public:
  BrockettCost(Eigen::MatrixXd q, Eigen::MatrixXd n_mat);

  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::MatrixXd& n_mat() const { return n_; }
  CostModel model() const;

 private:
  Eigen::MatrixXd q_;
  Eigen::MatrixXd n_;
};

CostModel brockett_model(const Eigen::MatrixXd& q, const Eigen::MatrixXd& n_mat);

struct BrockettCriticality {
  bool critical = false;
  double residual = 0.0;  // ||K + K^T||_F for K = M^T J Q M N
};

// First-order condition specialized to the Brockett cost: M is critical iff
// K = M^T J Q M N is skew. Relative threshold tol * (1 + ||K||_F).
BrockettCriticality brockett_critical_check(const SymplecticPoint& m, const Eigen::MatrixXd& q,
                                            const Eigen::MatrixXd& n_mat, double tol);

struct SecondOrderSample {
  double min_gap = 0.0;
  Eigen::MatrixXd worst_s;
};

// Samples the second-order optimality gap at a critical point M_c:
//   gap(S) = tr(J M_c^T J Q M_c N J S J S) - tr(J M_c^T J Q M_c J S N J S)
// over `trials` random unit-Frobenius symmetric S. min_gap >= 0 is the
// sampled necessary condition for a local minimum, > 0 the sufficient one.
SecondOrderSample brockett_second_order_sample(const SymplecticPoint& m_c,
                                               const Eigen::MatrixXd& q,
                                               const Eigen::MatrixXd& n_mat, int trials,
                                               std::uint64_t seed);

// Random J-symmetric matrix L = -J K with K skew; exact by construction
// (L^T J = J L holds entrywise). Retries singular draws, fails after 16.
Eigen::MatrixXd random_j_symmetric(Dim dim, std::uint64_t seed, double scale);

}  // namespace sympopt
