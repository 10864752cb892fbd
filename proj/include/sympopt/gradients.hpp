#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "sympopt/manifold.hpp"

namespace sympopt {

// The constraint-gradient Gram system is numerically rank-deficient.
struct DegeneratePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A linear solve missed its residual contract.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Skew-symmetric 2n x 2n Lagrange-multiplier matrix with block layout
// [[S_AC, S], [-S^T, S_BD]]: S_AC and S_BD are n x n skew, S is full.
class MultiplierMatrix {
 public:
  // Checks ||raw + raw^T||_F <= skew_tol * (1 + ||raw||_F), then stores the
  // exact skew part (raw - raw^T)/2.
  static MultiplierMatrix from_raw(const Eigen::MatrixXd& raw, double skew_tol = 1e-12);

  int n() const { return n_; }
  const Eigen::MatrixXd& entries() const { return entries_; }

  Eigen::Block<const Eigen::MatrixXd> block_ac() const { return entries_.topLeftCorner(n_, n_); }
  Eigen::Block<const Eigen::MatrixXd> block_bd() const { return entries_.bottomRightCorner(n_, n_); }
  Eigen::Block<const Eigen::MatrixXd> block_mix() const { return entries_.topRightCorner(n_, n_); }

 private:
  MultiplierMatrix(Eigen::MatrixXd entries, int n) : entries_(std::move(entries)), n_(n) {}

  Eigen::MatrixXd entries_;
  int n_ = 0;
};

// Ambient cost data: value G(M), Euclidean gradient, and the Euclidean
// Hessian as a bilinear form (M, V, W) -> Hess G(M)(V, W), symmetric in
// (V, W). All three are defined on all of M_{2n}(R).
struct CostModel {
  std::function<double(const Eigen::MatrixXd&)> value;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> euc_grad;
  std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&, const Eigen::MatrixXd&)>
      euc_hess;
};

// Solves M^T M X + X M^T M = grad^T J M + M^T J grad for the unique skew X
// through the dense Kronecker system (I (x) M^T M + M^T M (x) I); the solve
// residual must satisfy ||lhs - rhs||_F <= 1e-10 * (1 + ||rhs||_F).
MultiplierMatrix sylvester_multipliers(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g);

// n = 1 closed form (grad^T J M + M^T J grad) / tr(M^T M); rejects n != 1.
MultiplierMatrix sigma_closed_form_n1(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g);

// Elementary skew pattern of the constraint Hessians:
//   AC : [[e_i e_j^T - e_j e_i^T, 0], [0, 0]]
//   BD : [[0, 0], [0, e_i e_j^T - e_j e_i^T]]
//   Mix: [[0, e_i e_j^T], [-e_j e_i^T, 0]]
// Indices are 1-based; AC/BD require i < j, Mix allows any (i, j).
Eigen::MatrixXd omega_pattern(ConstraintKind kind, int i, int j, Dim dim);

// Euclidean gradient of a single constraint function: -J * M * Omega_ij.
Eigen::MatrixXd constraint_gradient(ConstraintKind kind, int i, int j, const Eigen::MatrixXd& m);

// Independent multiplier oracle: assembles all 2n^2 - n constraint gradients,
// solves the Gram system Gram * sigma = (<grad F_i, grad G>)_i, and packs the
// multipliers so that grad G - sum_i sigma_i grad F_i = grad G + J M Sigma.
// Intended for small n (n <= max_half_dim); throws DegeneratePoint when the
// Gram condition number exceeds 1e12.
MultiplierMatrix gram_multipliers(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g,
                                  int max_half_dim = 4);

// Embedded gradient under the Frobenius metric:
// dG(M) = grad G(M) + J M Sigma(M), returned through its symmetric parameter.
SymTangent embedded_gradient_euc(const SymplecticPoint& m, const CostModel& cost);

// Multiplier matrix under the left-invariant metric, in closed form:
// Gamma = (J M^T grad + grad^T M J) / 2. Skew by construction.
MultiplierMatrix lagrange_inv(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g);

// Embedded gradient under the left-invariant metric: the ambient value is
// (M M^T grad + M J grad^T M J) / 2 = M J s with s = (grad^T M J - J M^T grad)/2.
SymTangent embedded_gradient_inv(const SymplecticPoint& m, const CostModel& cost);

struct CriticalityResult {
  bool critical = false;
  double residual = 0.0;  // ||J M^T grad - grad^T M J||_F
  // J M^T grad packaged as a multiplier matrix; present iff critical.
  std::optional<MultiplierMatrix> sigma;
};

// First-order test: M is critical iff J M^T grad G(M) is symmetric-free,
// i.e. equals grad G(M)^T M J. The boolean applies the relative threshold
// tol * (1 + ||grad G||_F).
CriticalityResult is_critical(const SymplecticPoint& m, const CostModel& cost, double tol);

// Central difference of G along the Cayley retraction curve through v:
// (G(R_M(h v)) - G(R_M(-h v))) / (2h). Propagates SingularPencil.
double fd_directional(const CostModel& cost, const SymplecticPoint& m, const SymTangent& v,
                      double h);

// Left-invariant inner product at M: <X, Y>_Inv = tr(X^T M^-T M^-1 Y),
// with the exact group inverse M^-1 = -J M^T J.
double inner_inv(const SymplecticPoint& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

}  // namespace sympopt
