#include "sympopt/gradients.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "sympopt/retraction.hpp"

namespace sympopt {

MultiplierMatrix MultiplierMatrix::from_raw(const Eigen::MatrixXd& raw, double skew_tol) {
  if (raw.rows() != raw.cols() || raw.rows() < 2 || raw.rows() % 2 != 0)
    throw std::invalid_argument("MultiplierMatrix: expected an even-sized square matrix");
  const double skew_residual = (raw + raw.transpose()).norm();
  if (skew_residual > skew_tol * (1.0 + raw.norm()))
    throw std::invalid_argument("MultiplierMatrix: ||raw + raw^T||_F = " +
                                std::to_string(skew_residual) + " exceeds the skew tolerance");
  Eigen::MatrixXd entries = 0.5 * (raw - raw.transpose());
  return MultiplierMatrix(std::move(entries), static_cast<int>(raw.rows()) / 2);
}

namespace {

// rhs of the multiplier equation: grad^T J M + M^T J grad (always skew).
Eigen::MatrixXd multiplier_rhs(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g) {
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd half = m.matrix().transpose() * j * grad_g;
  // grad^T J M = -(M^T J grad)^T, so the sum is formed skew-exactly.
  return half - half.transpose();
}

void require_grad_shape(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g,
                        const char* who) {
  if (grad_g.rows() != m.ambient() || grad_g.cols() != m.ambient())
    throw std::invalid_argument(std::string(who) + ": gradient size does not match the point");
}

}  // namespace

MultiplierMatrix sylvester_multipliers(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g) {
  using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

  require_grad_shape(m, grad_g, "sylvester_multipliers");
  const int d = m.ambient();
  const Eigen::MatrixXd gram = m.matrix().transpose() * m.matrix();
  const Eigen::MatrixXd rhs = multiplier_rhs(m, grad_g);

  // vec(A X + X A) = (I (x) A + A (x) I) vec(X) for symmetric A, column-major
  // vec. The dense solve runs in extended precision with one refinement step
  // so the residual and skewness contracts survive ill-conditioned iterates.
  MatrixXld kron = MatrixXld::Zero(d * d, d * d);
  const MatrixXld gram_l = gram.cast<long double>();
  for (int i = 0; i < d; ++i) kron.block(i * d, i * d, d, d) = gram_l;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      kron.block(i * d, j * d, d, d).diagonal().array() += gram_l(i, j);

  const VectorXld rhs_vec =
      Eigen::Map<const Eigen::VectorXd>(rhs.data(), d * d).cast<long double>();
  const Eigen::PartialPivLU<MatrixXld> lu(kron);
  VectorXld x_vec = lu.solve(rhs_vec);
  x_vec += lu.solve(rhs_vec - kron * x_vec);
  const Eigen::MatrixXd x =
      Eigen::Map<const MatrixXld>(x_vec.data(), d, d).cast<double>();

  const double residual = (gram * x + x * gram - rhs).norm();
  const double skew_residual = (x + x.transpose()).norm();
  if (residual > 1e-10 * (1.0 + rhs.norm()) ||
      skew_residual > 1e-10 * (1.0 + x.norm())) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double cond =
        es.eigenvalues()(d - 1) / std::max(es.eigenvalues()(0), 1e-300);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "sylvester_multipliers: solve residual %.3e, skew residual %.3e violate the "
                  "1e-10 contract, cond(M^T M) ~ %.3e",
                  residual, skew_residual, cond);
    throw SolverError(detail);
  }
  return MultiplierMatrix::from_raw(x, 1e-10);
}

MultiplierMatrix sigma_closed_form_n1(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g) {
  if (m.n() != 1) throw std::invalid_argument("sigma_closed_form_n1: only valid for n = 1");
  require_grad_shape(m, grad_g, "sigma_closed_form_n1");
  const double trace = (m.matrix().transpose() * m.matrix()).trace();
  return MultiplierMatrix::from_raw(multiplier_rhs(m, grad_g) / trace);
}

Eigen::MatrixXd omega_pattern(ConstraintKind kind, int i, int j, Dim dim) {
  const int n = dim.n;
  const bool pair_kind = kind != ConstraintKind::kMix;
  if (i < 1 || j < 1 || i > n || j > n || (pair_kind && i >= j))
    throw std::out_of_range("omega_pattern: index (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") out of range for n = " + std::to_string(n));
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  const int bi = i - 1;
  const int bj = j - 1;
  switch (kind) {
    case ConstraintKind::kAC:
      omega(bi, bj) = 1.0;
      omega(bj, bi) = -1.0;
      break;
    case ConstraintKind::kBD:
      omega(n + bi, n + bj) = 1.0;
      omega(n + bj, n + bi) = -1.0;
      break;
    case ConstraintKind::kMix:
      omega(bi, n + bj) = 1.0;
      omega(n + bj, bi) = -1.0;
      break;
  }
  return omega;
}

Eigen::MatrixXd constraint_gradient(ConstraintKind kind, int i, int j, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw std::invalid_argument("constraint_gradient: expected an even-sized square matrix");
  const Dim dim(static_cast<int>(m.rows()) / 2);
  const Eigen::MatrixXd poisson = make_poisson(dim);
  return -poisson * m * omega_pattern(kind, i, j, dim);
}

MultiplierMatrix gram_multipliers(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g,
                                  int max_half_dim) {
  require_grad_shape(m, grad_g, "gram_multipliers");
  if (m.n() > max_half_dim)
    throw std::invalid_argument("gram_multipliers: n = " + std::to_string(m.n()) +
                                " exceeds the oracle bound " + std::to_string(max_half_dim));
  const Dim dim(m.n());
  const auto indices = constraint_index_list(dim);
  const int k = static_cast<int>(indices.size());

  std::vector<Eigen::MatrixXd> grads;
  grads.reserve(indices.size());
  for (const auto& ci : indices)
    grads.push_back(constraint_gradient(ci.kind, ci.i, ci.j, m.matrix()));

  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd b(k);
  for (int p = 0; p < k; ++p) {
    b(p) = grads[p].cwiseProduct(grad_g).sum();
    for (int q = p; q < k; ++q) {
      gram(p, q) = grads[p].cwiseProduct(grads[q]).sum();
      gram(q, p) = gram(p, q);
    }
  }

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues()(k - 1);
  const double smax = svd.singularValues()(0);
  if (smin <= 0.0 || smax / smin > 1e12)
    throw DegeneratePoint("gram_multipliers: Gram condition number " +
                          std::to_string(smax / std::max(smin, 1e-300)) + " exceeds 1e12");
  const Eigen::VectorXd sigma = svd.solve(b);

  // grad G - sum sigma_i grad F_i = grad G + J M (sum sigma_i Omega_i).
  Eigen::MatrixXd packed = Eigen::MatrixXd::Zero(m.ambient(), m.ambient());
  for (int p = 0; p < k; ++p)
    packed += sigma(p) * omega_pattern(indices[p].kind, indices[p].i, indices[p].j, dim);
  return MultiplierMatrix::from_raw(packed);
}

SymTangent embedded_gradient_euc(const SymplecticPoint& m, const CostModel& cost) {
  const Eigen::MatrixXd grad = cost.euc_grad(m.matrix());
  const MultiplierMatrix sigma = sylvester_multipliers(m, grad);
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd ambient = grad + j * m.matrix() * sigma.entries();
  TangentProjection proj = ambient_to_tangent(m, ambient);
  if (proj.asym_residual > 1e-8 * (1.0 + ambient.norm()))
    throw SolverError("embedded_gradient_euc: tangency residual " +
                      std::to_string(proj.asym_residual) + " exceeds 1e-8");
  return proj.tangent;
}

MultiplierMatrix lagrange_inv(const SymplecticPoint& m, const Eigen::MatrixXd& grad_g) {
  require_grad_shape(m, grad_g, "lagrange_inv");
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd half = j * m.matrix().transpose() * grad_g;
  // (J M^T g + g^T M J)/2 = (half - half^T)/2, skew-exact.
  return MultiplierMatrix::from_raw(0.5 * (half - half.transpose()), 1e-14);
}

SymTangent embedded_gradient_inv(const SymplecticPoint& m, const CostModel& cost) {
  const Eigen::MatrixXd grad = cost.euc_grad(m.matrix());
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd half = j * m.matrix().transpose() * grad;
  // s = (g^T M J - J M^T g)/2 = -(half + half^T)/2, symmetric-exact.
  return SymTangent(m, -0.5 * (half + half.transpose()));
}

CriticalityResult is_critical(const SymplecticPoint& m, const CostModel& cost, double tol) {
  const Eigen::MatrixXd grad = cost.euc_grad(m.matrix());
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd candidate = j * m.matrix().transpose() * grad;
  // J M^T g - g^T M J = candidate + candidate^T.
  const double residual = (candidate + candidate.transpose()).norm();
  CriticalityResult result;
  result.residual = residual;
  result.critical = residual <= tol * (1.0 + grad.norm());
  if (result.critical)
    result.sigma = MultiplierMatrix::from_raw(candidate, residual * (1.0 + 1e-9) + 1e-15);
  return result;
}

double fd_directional(const CostModel& cost, const SymplecticPoint& m, const SymTangent& v,
                      double h) {
  if (h <= 0) throw std::invalid_argument("fd_directional: h must be positive");
  const SymplecticPoint plus = cayley_retract(m, h * v.s());
  const SymplecticPoint minus = cayley_retract(m, -h * v.s());
  return (cost.value(plus.matrix()) - cost.value(minus.matrix())) / (2.0 * h);
}

double inner_inv(const SymplecticPoint& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::MatrixXd inv = m.inverse();
  return (inv * x).cwiseProduct(inv * y).sum();
}

}  // namespace sympopt
