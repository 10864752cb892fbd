#include "sympopt/hessians.hpp"

#include <string>

namespace sympopt {

namespace {

Eigen::MatrixXd commutator(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return x * y - y * x;
}

// Invariant-metric restricted Hessian with grad and Gamma precomputed.
double hess_inv_core(const SymplecticPoint& m, const CostModel& cost,
                     const Eigen::MatrixXd& grad, const Eigen::MatrixXd& gamma,
                     const Eigen::MatrixXd& j, const Eigen::MatrixXd& s1,
                     const Eigen::MatrixXd& s2) {
  const Eigen::MatrixXd amb1 = m.matrix() * j * s1;
  const Eigen::MatrixXd amb2 = m.matrix() * j * s2;
  const double euc = cost.euc_hess(m.matrix(), amb1, amb2);
  const double gamma_term = (s1 * j * s2 * gamma).trace();
  const Eigen::MatrixXd z = z_term(j * s1, j * s2);
  const double z_pairing = (grad + j * m.matrix() * gamma).cwiseProduct(m.matrix() * z).sum();
  return euc + gamma_term + z_pairing;
}

}  // namespace

double constraint_hessian_bilinear(ConstraintKind kind, int i, int j, const Eigen::MatrixXd& v,
                                   const Eigen::MatrixXd& w) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0 || v.rows() != w.rows() || v.cols() != w.cols())
    throw std::invalid_argument("constraint_hessian_bilinear: size mismatch");
  const Dim dim(static_cast<int>(v.rows()) / 2);
  const Eigen::MatrixXd jp = make_poisson(dim);
  const Eigen::MatrixXd omega = omega_pattern(kind, i, j, dim);
  // vec(V)^T (Omega (x) J) vec(W) = tr(V^T J W Omega^T)
  return (v.transpose() * jp * w * omega.transpose()).trace();
}

double hess_euc_restricted(const SymplecticPoint& m, const CostModel& cost, const SymTangent& v1,
                           const SymTangent& v2) {
  const Eigen::MatrixXd grad = cost.euc_grad(m.matrix());
  const MultiplierMatrix sigma = sylvester_multipliers(m, grad);
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const double euc = cost.euc_hess(m.matrix(), tangent_ambient(v1), tangent_ambient(v2));
  return euc + (v1.s() * j * v2.s() * sigma.entries()).trace();
}

Eigen::MatrixXd covariant_deriv_left_inv(const Eigen::MatrixXd& m, const Eigen::MatrixXd& x0,
                                         const Eigen::MatrixXd& y0) {
  return 0.5 * m *
         (commutator(x0, y0) - commutator(x0.transpose().eval(), y0) -
          commutator(y0.transpose().eval(), x0));
}

Eigen::MatrixXd covariant_deriv_general(const Eigen::MatrixXd& m, const Eigen::MatrixXd& x_m,
                                        const Eigen::MatrixXd& y_m,
                                        const Eigen::MatrixXd& dy_along_x) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible())
    throw std::invalid_argument("covariant_deriv_general: singular base point");
  const Eigen::MatrixXd inv = lu.inverse();
  const Eigen::MatrixXd inv_t = inv.transpose();
  return dy_along_x -
         0.5 * (y_m * inv * x_m + x_m * inv * y_m + m * y_m.transpose() * inv_t * inv * x_m +
                m * x_m.transpose() * inv_t * inv * y_m - y_m * x_m.transpose() * inv_t -
                x_m * y_m.transpose() * inv_t);
}

Eigen::MatrixXd z_term(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& y0) {
  return 0.5 * (x0 * y0 + y0 * x0 + commutator(y0.transpose().eval(), x0) +
                commutator(x0.transpose().eval(), y0));
}

double hess_inv_restricted(const SymplecticPoint& m, const CostModel& cost, const SymTangent& v1,
                           const SymTangent& v2) {
  const Eigen::MatrixXd grad = cost.euc_grad(m.matrix());
  const MultiplierMatrix gamma = lagrange_inv(m, grad);
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  return hess_inv_core(m, cost, grad, gamma.entries(), j, v1.s(), v2.s());
}

NewtonSystem newton_system(const SymplecticPoint& m, const CostModel& cost) {
  const Dim dim(m.n());
  const Eigen::MatrixXd j = make_poisson(dim);
  const Eigen::MatrixXd grad = cost.euc_grad(m.matrix());
  const MultiplierMatrix gamma = lagrange_inv(m, grad);
  const std::vector<Eigen::MatrixXd> basis_sym = tangent_basis_sym(dim);
  const int mdim = tangent_dim(dim);

  Eigen::VectorXd g(mdim);
  for (int p = 0; p < mdim; ++p)
    g(p) = grad.cwiseProduct(m.matrix() * j * basis_sym[p]).sum();

  Eigen::MatrixXd h(mdim, mdim);
  for (int p = 0; p < mdim; ++p)
    for (int q = p; q < mdim; ++q) {
      h(p, q) = hess_inv_core(m, cost, grad, gamma.entries(), j, basis_sym[p], basis_sym[q]);
      h(q, p) = h(p, q);
    }
  return {HessianMatrix{dim.n, MetricTag::kInvariant, std::move(h)}, std::move(g)};
}

}  // namespace sympopt
