#include "sympopt/costs.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "sympopt/rng.hpp"

namespace sympopt {

CostModel LeastSquaresCost::model() const {
  const Eigen::MatrixXd w = w_.matrix();
  CostModel cost;
  cost.value = [w](const Eigen::MatrixXd& m) { return (m - w).squaredNorm(); };
  cost.euc_grad = [w](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return 2.0 * (m - w); };
  cost.euc_hess = [](const Eigen::MatrixXd&, const Eigen::MatrixXd& v,
                     const Eigen::MatrixXd& w2) { return 2.0 * v.cwiseProduct(w2).sum(); };
  return cost;
}

CostModel least_squares_model(const SymplecticPoint& w) { return LeastSquaresCost(w).model(); }

double j_symmetry_residual(const Eigen::MatrixXd& l) {
  if (l.rows() != l.cols() || l.rows() % 2 != 0)
    throw std::invalid_argument("j_symmetry_residual: expected an even-sized square matrix");
  const Eigen::MatrixXd j = make_poisson(Dim(static_cast<int>(l.rows()) / 2));
  return (l.transpose() * j - j * l).norm();
}

BrockettCost::BrockettCost(Eigen::MatrixXd q, Eigen::MatrixXd n_mat)
    : q_(std::move(q)), n_(std::move(n_mat)) {
  if (q_.rows() != q_.cols() || q_.rows() != n_.rows() || n_.rows() != n_.cols())
    throw std::invalid_argument("BrockettCost: Q and N must be square of equal size");
  for (const auto* l : {&q_, &n_}) {
    const double res = j_symmetry_residual(*l);
    if (res > 1e-10 * (1.0 + l->norm()))
      throw std::invalid_argument("BrockettCost: matrix is not J-symmetric, residual " +
                                  std::to_string(res));
    if (!Eigen::FullPivLU<Eigen::MatrixXd>(*l).isInvertible())
      throw std::invalid_argument("BrockettCost: matrix is singular");
  }
}

CostModel BrockettCost::model() const {
  const Eigen::MatrixXd q = q_;
  const Eigen::MatrixXd n = n_;
  const Eigen::MatrixXd j = make_poisson(Dim(static_cast<int>(q.rows()) / 2));
  CostModel cost;
  cost.value = [q, n, j](const Eigen::MatrixXd& m) {
    return (q * m * n * j * m.transpose() * j).trace();
  };
  cost.euc_grad = [q, n, j](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    return 2.0 * j * q * m * n * j;
  };
  cost.euc_hess = [q, n, j](const Eigen::MatrixXd&, const Eigen::MatrixXd& v,
                            const Eigen::MatrixXd& w) {
    // vec(V)^T (-2 (J N^T) (x) (J Q)) vec(W) = 2 tr(V^T J Q W N J)
    return 2.0 * (v.transpose() * j * q * w * n * j).trace();
  };
  return cost;
}

CostModel brockett_model(const Eigen::MatrixXd& q, const Eigen::MatrixXd& n_mat) {
  return BrockettCost(q, n_mat).model();
}

BrockettCriticality brockett_critical_check(const SymplecticPoint& m, const Eigen::MatrixXd& q,
                                            const Eigen::MatrixXd& n_mat, double tol) {
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd k = m.matrix().transpose() * j * q * m.matrix() * n_mat;
  const double residual = (k + k.transpose()).norm();
  return {residual <= tol * (1.0 + k.norm()), residual};
}

SecondOrderSample brockett_second_order_sample(const SymplecticPoint& m_c,
                                               const Eigen::MatrixXd& q,
                                               const Eigen::MatrixXd& n_mat, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("brockett_second_order_sample: trials must be >= 1");
  const int d = m_c.ambient();
  const Eigen::MatrixXd j = make_poisson(Dim(m_c.n()));
  const Eigen::MatrixXd lead = j * m_c.matrix().transpose() * j * q * m_c.matrix();

  Rng rng(seed);
  SecondOrderSample best{std::numeric_limits<double>::infinity(), Eigen::MatrixXd()};
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd s = rng.unit_symmetric(d);
    const Eigen::MatrixXd js = j * s;
    const double gap = (lead * n_mat * js * js).trace() - (lead * js * n_mat * js).trace();
    if (gap < best.min_gap) {
      best.min_gap = gap;
      best.worst_s = s;
    }
  }
  return best;
}

Eigen::MatrixXd random_j_symmetric(Dim dim, std::uint64_t seed, double scale) {
  const int d = dim.ambient();
  const Eigen::MatrixXd j = make_poisson(dim);
  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    const Eigen::MatrixXd k = rng.skew(d, scale);
    const Eigen::MatrixXd l = -j * k;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(l);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(d - 1);
    if (smax > 0.0 && smin > 1e-8 * smax) return l;
  }
  throw std::runtime_error("random_j_symmetric: 16 draws were singular for seed " +
                           std::to_string(seed));
}

}  // namespace sympopt
