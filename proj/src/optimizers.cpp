#include "sympopt/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sympopt/retraction.hpp"

namespace sympopt {

void OptimizerConfig::validate() const {
  if (max_iter < 0) throw std::invalid_argument("OptimizerConfig: max_iter must be >= 0");
  if (!(grad_tol > 0)) throw std::invalid_argument("OptimizerConfig: grad_tol must be > 0");
  if (!(armijo.lambda0 > 0)) throw std::invalid_argument("OptimizerConfig: lambda0 must be > 0");
  if (!(armijo.c1 > 0 && armijo.c1 < 1))
    throw std::invalid_argument("OptimizerConfig: c1 must lie in (0, 1)");
  if (!(armijo.shrink > 0 && armijo.shrink < 1))
    throw std::invalid_argument("OptimizerConfig: shrink must lie in (0, 1)");
  if (armijo.max_backtracks < 0)
    throw std::invalid_argument("OptimizerConfig: max_backtracks must be >= 0");
  if (newton.regularization < 0)
    throw std::invalid_argument("OptimizerConfig: regularization must be >= 0");
}

const char* to_string(OptStatus status) {
  switch (status) {
    case OptStatus::kConverged: return "converged";
    case OptStatus::kMaxIter: return "max_iter";
    case OptStatus::kStalled: return "stalled";
    case OptStatus::kSingularPencil: return "singular_pencil";
  }
  return "unknown";
}

const char* to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::kMinimum: return "minimum";
    case CriticalKind::kMaximum: return "maximum";
    case CriticalKind::kSaddle: return "saddle";
    case CriticalKind::kDegenerate: return "degenerate";
  }
  return "unknown";
}

double OptimizerTrace::max_symplecticity_residual() const {
  double worst = 0.0;
  for (const auto& r : records) worst = std::max(worst, r.symplecticity_residual);
  return worst;
}

namespace {

struct StepOutcome {
  bool accepted = false;
  bool all_pencil_failures = true;
  SymplecticPoint next;
  double lambda = 0.0;
  int backtracks = 0;
};

// Armijo backtracking over the Cayley retraction along parameter direction
// s_dir (per unit lambda): candidate S = lambda * s_dir. A singular pencil
// counts as a rejected step. decrease_rate > 0 is the required decrease per
// unit lambda: accept iff G(next) <= G(M) - c1 * lambda * decrease_rate.
StepOutcome armijo_search(const CostModel& cost, const SymplecticPoint& m,
                          const Eigen::MatrixXd& s_dir, double decrease_rate,
                          const ArmijoConfig& armijo, double current_value) {
  StepOutcome out{false, true, m, armijo.lambda0, 0};
  double lambda = armijo.lambda0;
  for (int bt = 0; bt <= armijo.max_backtracks; ++bt) {
    try {
      SymplecticPoint candidate = cayley_retract(m, lambda * s_dir);
      out.all_pencil_failures = false;
      if (cost.value(candidate.matrix()) <=
          current_value - armijo.c1 * lambda * decrease_rate) {
        out.accepted = true;
        out.next = std::move(candidate);
        out.lambda = lambda;
        out.backtracks = bt;
        return out;
      }
    } catch (const SingularPencil&) {
      // shrink exactly like an Armijo rejection
    }
    lambda *= armijo.shrink;
  }
  out.backtracks = armijo.max_backtracks + 1;
  return out;
}

void append_record(std::vector<IterRecord>& records, int k, const CostModel& cost,
                   const SymplecticPoint& m, double grad_norm, double step, int backtracks) {
  const double residual = m.cert_residual();
  if (residual > 1e-8)
    throw std::runtime_error("optimizer: iterate symplecticity residual " +
                             std::to_string(residual) + " exceeds 1e-8");
  records.push_back({k, cost.value(m.matrix()), grad_norm, step, residual, backtracks});
}

// Steepest-descent direction data at M under the invariant metric.
struct DescentData {
  Eigen::MatrixXd s_dir;    // per-unit-lambda retraction parameter
  double decrease_rate;     // ||dG_inv||_Inv^2 = ||s_inv||_F^2
};

DescentData descent_direction(const SymplecticPoint& m, const CostModel& cost) {
  const SymTangent dinv = embedded_gradient_inv(m, cost);
  // -lambda dG_inv = M J S_k with S_k = -lambda * s_inv
  //               = (lambda/2)(J M^T grad - grad^T M J).
  return {-dinv.s(), dinv.s().squaredNorm()};
}

}  // namespace

OptimizerTrace steepest_descent(const CostModel& cost, const SymplecticPoint& m0,
                                const OptimizerConfig& cfg) {
  cfg.validate();
  SymplecticPoint m = m0;
  std::vector<IterRecord> records;

  SymTangent deuc = embedded_gradient_euc(m, cost);
  double grad_norm = tangent_ambient(deuc).norm();
  append_record(records, 0, cost, m, grad_norm, 0.0, 0);

  for (int k = 0; k < cfg.max_iter; ++k) {
    if (grad_norm <= cfg.grad_tol) return {std::move(records), OptStatus::kConverged, std::move(m)};

    const DescentData dir = descent_direction(m, cost);
    const StepOutcome out = armijo_search(cost, m, dir.s_dir, dir.decrease_rate, cfg.armijo,
                                          cost.value(m.matrix()));
    if (!out.accepted) {
      const OptStatus status =
          out.all_pencil_failures ? OptStatus::kSingularPencil : OptStatus::kStalled;
      return {std::move(records), status, std::move(m)};
    }
    m = out.next;
    deuc = embedded_gradient_euc(m, cost);
    grad_norm = tangent_ambient(deuc).norm();
    append_record(records, k + 1, cost, m, grad_norm, out.lambda, out.backtracks);
  }
  const OptStatus status = grad_norm <= cfg.grad_tol ? OptStatus::kConverged : OptStatus::kMaxIter;
  return {std::move(records), status, std::move(m)};
}

OptimizerTrace newton(const CostModel& cost, const SymplecticPoint& m0,
                      const OptimizerConfig& cfg) {
  cfg.validate();
  const Dim dim(m0.n());
  const std::vector<Eigen::MatrixXd> basis_sym = tangent_basis_sym(dim);
  const int mdim = tangent_dim(dim);

  SymplecticPoint m = m0;
  std::vector<IterRecord> records;

  SymTangent deuc = embedded_gradient_euc(m, cost);
  double grad_norm = tangent_ambient(deuc).norm();
  append_record(records, 0, cost, m, grad_norm, 0.0, 0);

  for (int k = 0; k < cfg.max_iter; ++k) {
    if (grad_norm <= cfg.grad_tol) return {std::move(records), OptStatus::kConverged, std::move(m)};

    NewtonSystem system = newton_system(m, cost);
    Eigen::MatrixXd h = system.hess.h;
    if (cfg.newton.regularization > 0.0)
      h.diagonal().array() += cfg.newton.regularization;

    bool have_newton_step = false;
    bool solvable = false;
    Eigen::MatrixXd s_newton;  // retraction parameter per unit lambda
    double newton_rate = 0.0;  // -dG . v > 0 required for descent
    // symmetric eigen-solve; the absolute floor in the gate flags an
    // identically vanishing restricted Hessian as singular
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const double lambda_max = es.eigenvalues().cwiseAbs().maxCoeff();
    const double lambda_min = es.eigenvalues().cwiseAbs().minCoeff();
    if (lambda_min > 1e-12 * std::max(1.0, lambda_max)) {
      const Eigen::VectorXd projected = es.eigenvectors().transpose() * (-system.grad_coords);
      const Eigen::VectorXd v =
          es.eigenvectors() * (projected.array() / es.eigenvalues().array()).matrix();
      const double solve_residual = (h * v + system.grad_coords).norm();
      if (solve_residual <= 1e-10 * (1.0 + system.grad_coords.norm())) {
        solvable = true;
        const double directional = system.grad_coords.dot(v);  // dG(M) . v
        if (directional < 0.0) {
          s_newton = Eigen::MatrixXd::Zero(2 * dim.n, 2 * dim.n);
          for (int p = 0; p < mdim; ++p) s_newton += v(p) * basis_sym[p];
          newton_rate = -directional;
          have_newton_step = true;
        }
      }
    }
    if (!solvable && !cfg.newton.fallback_to_gradient)
      throw SingularHessian("newton: singular Hessian at iteration " + std::to_string(k));

    StepOutcome out{false, true, m, 0.0, 0};
    bool attempted = false;
    if (have_newton_step) {
      out = armijo_search(cost, m, s_newton, newton_rate, cfg.armijo, cost.value(m.matrix()));
      attempted = true;
    }
    if (!out.accepted && cfg.newton.fallback_to_gradient) {
      const DescentData dir = descent_direction(m, cost);
      out = armijo_search(cost, m, dir.s_dir, dir.decrease_rate, cfg.armijo,
                          cost.value(m.matrix()));
      attempted = true;
    }
    if (!out.accepted) {
      const OptStatus status = attempted && out.all_pencil_failures ? OptStatus::kSingularPencil
                                                                    : OptStatus::kStalled;
      return {std::move(records), status, std::move(m)};
    }
    m = out.next;
    deuc = embedded_gradient_euc(m, cost);
    grad_norm = tangent_ambient(deuc).norm();
    append_record(records, k + 1, cost, m, grad_norm, out.lambda, out.backtracks);
  }
  const OptStatus status = grad_norm <= cfg.grad_tol ? OptStatus::kConverged : OptStatus::kMaxIter;
  return {std::move(records), status, std::move(m)};
}

Classification classify_critical_point(const SymplecticPoint& m_c, const CostModel& cost) {
  const CriticalityResult crit = is_critical(m_c, cost, 1e-8);
  if (!crit.critical)
    throw std::invalid_argument("classify_critical_point: point is not critical, residual " +
                                std::to_string(crit.residual));
  const Dim dim(m_c.n());
  const std::vector<Eigen::MatrixXd> basis_sym = tangent_basis_sym(dim);
  const int mdim = tangent_dim(dim);

  const Eigen::MatrixXd grad = cost.euc_grad(m_c.matrix());
  const MultiplierMatrix sigma = sylvester_multipliers(m_c, grad);
  const Eigen::MatrixXd j = make_poisson(dim);

  Eigen::MatrixXd h(mdim, mdim);
  for (int p = 0; p < mdim; ++p) {
    const Eigen::MatrixXd amb_p = m_c.matrix() * j * basis_sym[p];
    for (int q = p; q < mdim; ++q) {
      const Eigen::MatrixXd amb_q = m_c.matrix() * j * basis_sym[q];
      h(p, q) = cost.euc_hess(m_c.matrix(), amb_p, amb_q) +
                (basis_sym[p] * j * basis_sym[q] * sigma.entries()).trace();
      h(q, p) = h(p, q);
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Classification out;
  out.eigenvalues = es.eigenvalues();
  const double radius = out.eigenvalues.cwiseAbs().maxCoeff();
  const double zero_threshold = std::max(1e-8 * radius, 1e-12);
  for (int p = 0; p < mdim; ++p) {
    const double lambda = out.eigenvalues(p);
    if (std::abs(lambda) <= zero_threshold)
      ++out.zero;
    else if (lambda > 0)
      ++out.positive;
    else
      ++out.negative;
  }
  if (out.positive > 0 && out.negative > 0)
    out.kind = CriticalKind::kSaddle;
  else if (out.zero > 0)
    out.kind = CriticalKind::kDegenerate;
  else if (out.negative == 0)
    out.kind = CriticalKind::kMinimum;
  else
    out.kind = CriticalKind::kMaximum;
  return out;
}

}  // namespace sympopt
