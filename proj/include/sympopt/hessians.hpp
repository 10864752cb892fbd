#pragma once

#include "sympopt/gradients.hpp"
#include "sympopt/manifold.hpp"

namespace sympopt {

enum class MetricTag { kEuclidean, kInvariant };

// Dense restricted Hessian in tangent_basis coordinates; m = n(2n + 1).
struct HessianMatrix {
  int n = 0;
  MetricTag metric = MetricTag::kEuclidean;
  Eigen::MatrixXd h;  // m x m, symmetric
};

// Constraint Hessian bilinear form vec(V)^T (Omega_ij (x) J) vec(W),
// evaluated as tr(V^T J W Omega_ij^T) without forming Kronecker products.
double constraint_hessian_bilinear(ConstraintKind kind, int i, int j, const Eigen::MatrixXd& v,
                                   const Eigen::MatrixXd& w);

// Restricted Hessian under the Frobenius metric:
// Hess G(M)(M J S1, M J S2) + tr(S1 J S2 Sigma(M)), Sigma from the Sylvester
// solve. v1, v2 must be based at m.
double hess_euc_restricted(const SymplecticPoint& m, const CostModel& cost, const SymTangent& v1,
                           const SymTangent& v2);

// Covariant derivative of the left-invariant metric on Gl(2n, R) for two
// left-invariant fields X_M = M X0, Y_M = M Y0:
// (1/2) M ([X0, Y0] - [Y0^T, X0] - [X0^T, Y0]).
Eigen::MatrixXd covariant_deriv_left_inv(const Eigen::MatrixXd& m, const Eigen::MatrixXd& x0,
                                         const Eigen::MatrixXd& y0);

// General-field form of the same connection; the caller supplies the ambient
// derivative of Y along X at M as dy_along_x. Throws on singular m.
Eigen::MatrixXd covariant_deriv_general(const Eigen::MatrixXd& m, const Eigen::MatrixXd& x_m,
                                        const Eigen::MatrixXd& y_m,
                                        const Eigen::MatrixXd& dy_along_x);

// Z correction of the invariant Hessian:
// (1/2)(X0 Y0 + Y0 X0 + [Y0^T, X0] + [X0^T, Y0]). Symmetric under swap.
Eigen::MatrixXd z_term(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& y0);

// Restricted Hessian under the left-invariant metric:
// Hess G(M)(M J S1, M J S2) + tr(S1 J S2 Gamma(M))
//   + <grad G(M) + J M Gamma(M), M Z(J S1, J S2)>.
double hess_inv_restricted(const SymplecticPoint& m, const CostModel& cost, const SymTangent& v1,
                           const SymTangent& v2);

struct NewtonSystem {
  HessianMatrix hess;          // invariant-metric restricted Hessian over tangent_basis
  Eigen::VectorXd grad_coords; // g_(i,j) = <grad G(M), M e_(i,j)> in basis order
};

// Assembles the Newton equation data at M over the tangent_basis ordering.
// The m(m+1)/2 independent Hessian entries are computed once and mirrored.
NewtonSystem newton_system(const SymplecticPoint& m, const CostModel& cost);

}  // namespace sympopt
