#pragma once

#include <stdexcept>
#include <vector>

#include "sympopt/gradients.hpp"
#include "sympopt/hessians.hpp"
#include "sympopt/manifold.hpp"

namespace sympopt {

// The Newton system is singular and gradient fallback is disabled.
struct SingularHessian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArmijoConfig {
  double lambda0 = 1.0;
  double c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 40;
};

struct NewtonConfig {
  double regularization = 0.0;  // Tikhonov shift added to the Hessian
  bool fallback_to_gradient = true;
};

struct OptimizerConfig {
  int max_iter = 2000;
  double grad_tol = 1e-8;  // on ||dG||_F, Frobenius-metric embedded gradient
  ArmijoConfig armijo;
  NewtonConfig newton;

  void validate() const;
};

struct IterRecord {
  int k = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
  double symplecticity_residual = 0.0;
  int backtracks = 0;
};

enum class OptStatus { kConverged, kMaxIter, kStalled, kSingularPencil };

const char* to_string(OptStatus status);

struct OptimizerTrace {
  std::vector<IterRecord> records;  // one per accepted iterate, including k = 0
  OptStatus status = OptStatus::kMaxIter;
  SymplecticPoint final_point;

  int iters() const { return records.empty() ? 0 : records.back().k; }
  double max_symplecticity_residual() const;
};

// Steepest descent under the left-invariant metric: steps along
// S_k = (lambda_k / 2)(J M_k^T grad G - grad G^T M_k J) through the Cayley
// retraction, with Armijo backtracking on
// G(M_{k+1}) <= G(M_k) - c1 lambda_k ||dG_inv(M_k)||_Inv^2.
// A singular pencil counts as a rejected step. Stops when ||dG_euc||_F
// drops below grad_tol.
OptimizerTrace steepest_descent(const CostModel& cost, const SymplecticPoint& m0,
                                const OptimizerConfig& cfg);

// Embedded Newton iteration: solves h v = -g from newton_system, forms the
// step parameter S_k = lambda_k * sum v_(i,j) S_(i,j), and retracts. lambda = 1
// is tried first with Armijo damping. A singular or non-descent system falls
// back to one steepest-descent step when configured, else the singular case
// throws SingularHessian.
OptimizerTrace newton(const CostModel& cost, const SymplecticPoint& m0,
                      const OptimizerConfig& cfg);

enum class CriticalKind { kMinimum, kMaximum, kSaddle, kDegenerate };

const char* to_string(CriticalKind kind);

struct Classification {
  CriticalKind kind = CriticalKind::kDegenerate;
  int positive = 0;
  int zero = 0;
  int negative = 0;
  Eigen::VectorXd eigenvalues;  // ascending
};

// Inertia of the Frobenius-metric restricted Hessian over tangent_basis at a
// certified critical point (first-order residual at tol 1e-8). Eigenvalues
// within max(1e-8 * spectral_radius, 1e-12) of zero count as zero.
Classification classify_critical_point(const SymplecticPoint& m_c, const CostModel& cost);

}  // namespace sympopt
