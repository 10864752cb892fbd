#include "sympopt/check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

#include "sympopt/costs.hpp"
#include "sympopt/gradients.hpp"
#include "sympopt/hessians.hpp"
#include "sympopt/manifold.hpp"
#include "sympopt/retraction.hpp"
#include "sympopt/rng.hpp"

namespace sympopt::check {

namespace {

// Accumulates the worst residual seen for one named check.
struct Tracker {
  CheckItem item;

  Tracker(std::string name, double tol) {
    item.name = std::move(name);
    item.tol = tol;
    item.pass = true;
  }

  void observe(double residual, const std::string& detail) {
    if (residual > item.worst || item.detail.empty()) {
      item.worst = residual;
      item.detail = detail;
    }
    if (residual > item.tol) item.pass = false;
  }

  CheckItem take() && { return std::move(item); }
};

std::string seed_tag(std::uint64_t seed) { return "seed=" + std::to_string(seed); }

// Cost fixtures shared across checks. Brockett instances are only generated
// for n >= 2 (J-symmetric 2x2 matrices are scalar, so the n = 1 cost is
// constant on the group).
struct Fixture {
  std::string name;
  CostModel cost;
};

std::vector<Fixture> cost_fixtures(int n, std::uint64_t seed) {
  std::vector<Fixture> out;
  const SymplecticPoint w = random_symplectic(Dim(n), seed * 7919 + 1, 1.0);
  out.push_back({"least_squares/n=" + std::to_string(n), least_squares_model(w)});
  if (n >= 2) {
    const Eigen::MatrixXd q = random_j_symmetric(Dim(n), seed * 7919 + 2, 1.0);
    const Eigen::MatrixXd nm = random_j_symmetric(Dim(n), seed * 7919 + 3, 1.0);
    out.push_back({"brockett/n=" + std::to_string(n), brockett_model(q, nm)});
  }
  return out;
}

SymTangent random_unit_tangent(const SymplecticPoint& m, Rng& rng) {
  return SymTangent(m, rng.unit_symmetric(m.ambient()));
}

// Central difference of one constraint entry along v.
double constraint_fd(int flat, const Eigen::MatrixXd& m, const Eigen::MatrixXd& v, double h) {
  return (constraint_values(m + h * v)(flat) - constraint_values(m - h * v)(flat)) / (2.0 * h);
}

// Second-order cross difference of one constraint entry along (v, w).
double constraint_fd2(int flat, const Eigen::MatrixXd& m, const Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& w, double h) {
  const double pp = constraint_values(m + h * v + h * w)(flat);
  const double pm = constraint_values(m + h * v - h * w)(flat);
  const double mp = constraint_values(m - h * v + h * w)(flat);
  const double mm = constraint_values(m - h * v - h * w)(flat);
  return (pp - pm - mp + mm) / (4.0 * h * h);
}

}  // namespace

SuiteResult run_gradient_checks(const CheckOptions& opts) {
  Tracker closed_form("triple-path-sylvester-vs-closed-form", 1e-12);
  Tracker gram_path("triple-path-sylvester-vs-gram", 1e-8);
  Tracker sylvester_residual("sylvester-residual", 1e-10);
  Tracker skewness("multiplier-skewness", 1e-12);
  Tracker metric_consistency("metric-consistency", 1e-6);
  Tracker criticality("criticality-equivalence", 0.0);
  Tracker critical_sigma("critical-sigma-formula", 1e-12);

  for (int n = 1; n <= opts.n_max; ++n) {
    const Dim dim(n);
    const Eigen::MatrixXd j = make_poisson(dim);
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t seed = opts.seed + 1000 * n + trial;
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      const SymplecticPoint m = random_symplectic(dim, seed, 1.0);
      const Eigen::MatrixXd grad = rng.matrix(dim.ambient(), dim.ambient(), 1.0);

      const MultiplierMatrix syl = sylvester_multipliers(m, grad);
      skewness.observe((syl.entries() + syl.entries().transpose()).norm(), seed_tag(seed));

      const Eigen::MatrixXd gram_m = m.matrix().transpose() * m.matrix();
      const Eigen::MatrixXd half = m.matrix().transpose() * j * grad;
      const Eigen::MatrixXd rhs = half - half.transpose();
      const double res =
          (gram_m * syl.entries() + syl.entries() * gram_m - rhs).norm() / (1.0 + rhs.norm());
      sylvester_residual.observe(res, seed_tag(seed));

      if (n == 1) {
        const MultiplierMatrix closed = sigma_closed_form_n1(m, grad);
        closed_form.observe((syl.entries() - closed.entries()).cwiseAbs().maxCoeff(),
                            seed_tag(seed));
      }
      if (n <= 3) {
        const MultiplierMatrix gram = gram_multipliers(m, grad);
        gram_path.observe((syl.entries() - gram.entries()).cwiseAbs().maxCoeff(), seed_tag(seed));
      }
    }

    // Metric consistency of both embedded gradients against the directional
    // finite difference along the retraction curve.
    for (const auto& fix : cost_fixtures(n, opts.seed + 17 * n)) {
      for (int trial = 0; trial < 25; ++trial) {
        const std::uint64_t seed = opts.seed + 40000 + 100 * n + trial;
        Rng rng(seed);
        const SymplecticPoint m = random_symplectic(dim, seed, 1.0);
        const SymTangent v = random_unit_tangent(m, rng);

        const double fd = fd_directional(fix.cost, m, v, 1e-5);
        const Eigen::MatrixXd v_amb = tangent_ambient(v);
        const double pair_euc =
            tangent_ambient(embedded_gradient_euc(m, fix.cost)).cwiseProduct(v_amb).sum();

        // invariant-path gradient assembled through Gamma so the injected
        // sign fault is observable: the Gamma route must reproduce the
        // explicit formula, land in the tangent space, and pair like dG
        const Eigen::MatrixXd grad = fix.cost.euc_grad(m.matrix());
        Eigen::MatrixXd gamma = lagrange_inv(m, grad).entries();
        if (opts.fault == Fault::kGammaSign) gamma = -gamma;
        const Eigen::MatrixXd dinv = m.matrix() * m.matrix().transpose() * grad +
                                     m.matrix() * j * gamma;
        const double pair_inv = inner_inv(m, dinv, v_amb);

        const Eigen::MatrixXd explicit_form =
            tangent_ambient(embedded_gradient_inv(m, fix.cost));
        const double route_gap = (dinv - explicit_form).norm() / (1.0 + explicit_form.norm());
        const double tangency =
            ambient_to_tangent(m, dinv).asym_residual / (1.0 + dinv.norm());

        const double scale = 1.0 + std::abs(fd);
        const double worst = std::max({std::abs(pair_euc - fd) / scale,
                                       std::abs(pair_inv - fd) / scale,
                                       std::abs(pair_euc - pair_inv) / scale, route_gap,
                                       tangency});
        metric_consistency.observe(worst, fix.name + " " + seed_tag(seed));
      }
    }

    // Criticality equivalence on the least-squares target plus random points.
    {
      const std::uint64_t seed = opts.seed + 90000 + n;
      const SymplecticPoint w = random_symplectic(dim, seed, 1.0);
      const CostModel cost = least_squares_model(w);

      const auto classify = [&](const SymplecticPoint& pt) {
        const double grad_norm = tangent_ambient(embedded_gradient_euc(pt, cost)).norm();
        const CriticalityResult crit = is_critical(pt, cost, 1e-8);
        return std::pair<bool, bool>(grad_norm <= 1e-9, crit.critical);
      };

      auto [small_grad, crit_w] = classify(w);
      criticality.observe(small_grad == crit_w ? 0.0 : 1.0, "target " + seed_tag(seed));
      const Eigen::MatrixXd grad_w = cost.euc_grad(w.matrix());
      const Eigen::MatrixXd sigma_formula = j * w.matrix().transpose() * grad_w;
      critical_sigma.observe(
          (sylvester_multipliers(w, grad_w).entries() - sigma_formula).norm(), seed_tag(seed));

      for (int trial = 0; trial < 50; ++trial) {
        const SymplecticPoint m = random_symplectic(dim, seed + 13 * (trial + 1), 1.0);
        auto [small_grad_m, crit_m] = classify(m);
        criticality.observe(small_grad_m == crit_m ? 0.0 : 1.0,
                            seed_tag(seed + 13 * (trial + 1)));
        criticality.observe((!small_grad_m && !crit_m) ? 0.0 : 1.0,
                            "noncritical " + seed_tag(seed + 13 * (trial + 1)));
      }
    }
  }

  SuiteResult result{"gradients", {}};
  result.items.push_back(std::move(closed_form).take());
  result.items.push_back(std::move(gram_path).take());
  result.items.push_back(std::move(sylvester_residual).take());
  result.items.push_back(std::move(skewness).take());
  result.items.push_back(std::move(metric_consistency).take());
  result.items.push_back(std::move(criticality).take());
  result.items.push_back(std::move(critical_sigma).take());
  return result;
}

SuiteResult run_retraction_checks(const CheckOptions& opts) {
  Tracker axiom_i("axiom-i-base-point", 1e-14);
  Tracker axiom_ii("axiom-ii-differential", 1e-6);
  Tracker symplecticity("symplecticity-residual", 1e-10);
  Tracker symplecticity_scaled("symplecticity-residual-cond-scaled", 1e-10);
  Tracker transpose_cond("pencil-transpose-conditioning", 1e-12);

  for (int n = 1; n <= opts.n_max; ++n) {
    const Dim dim(n);
    const int d = dim.ambient();
    const Eigen::MatrixXd j = make_poisson(dim);
    const int trials = 100 / opts.n_max + 1;
    for (int trial = 0; trial < trials; ++trial) {
      const std::uint64_t seed = opts.seed + 500 * n + trial;
      Rng rng(seed * 31 + 7);
      const SymplecticPoint m = random_symplectic(dim, seed, 1.0);

      const SymplecticPoint at_zero = cayley_retract(m, Eigen::MatrixXd::Zero(d, d));
      axiom_i.observe((at_zero.matrix() - m.matrix()).norm() / (1.0 + m.matrix().norm()),
                      seed_tag(seed));

      const Eigen::MatrixXd s = rng.unit_symmetric(d);
      const double h = 1e-5;
      const Eigen::MatrixXd fd =
          (cayley_retract(m, h * s).matrix() - cayley_retract(m, -h * s).matrix()) / (2.0 * h);
      const Eigen::MatrixXd expected = m.matrix() * j * s;
      axiom_ii.observe((fd - expected).norm() / (1.0 + expected.norm()), seed_tag(seed));

      const Eigen::MatrixXd s_large = rng.unit_symmetric(d) * rng.uniform(0.0, 10.0);
      try {
        const SymplecticPoint r = cayley_retract(m, s_large);

        const Eigen::JacobiSVD<Eigen::MatrixXd> svd_plus(s_large + 2.0 * j);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd_minus(s_large - 2.0 * j);
        const double cond_plus =
            svd_plus.singularValues()(0) / svd_plus.singularValues()(d - 1);
        const double cond_minus =
            svd_minus.singularValues()(0) / svd_minus.singularValues()(d - 1);
        transpose_cond.observe(std::abs(cond_plus / cond_minus - 1.0), seed_tag(seed));

        // flat bound on moderately conditioned pencils; the scaled bound is
        // the operation contract and covers the near-singular admissions,
        // where a double representation alone costs ~ eps * ||R||^2
        if (cond_plus <= 1e2) symplecticity.observe(r.cert_residual(), seed_tag(seed));
        symplecticity_scaled.observe(r.cert_residual() / std::max(1.0, cond_plus),
                                     seed_tag(seed));
      } catch (const SingularPencil&) {
        // the guard rejected the draw; nothing to certify
      }
    }
  }

  SuiteResult result{"retraction", {}};
  result.items.push_back(std::move(axiom_i).take());
  result.items.push_back(std::move(axiom_ii).take());
  result.items.push_back(std::move(symplecticity).take());
  result.items.push_back(std::move(symplecticity_scaled).take());
  result.items.push_back(std::move(transpose_cond).take());
  return result;
}

SuiteResult run_hessian_checks(const CheckOptions& opts) {
  Tracker constraint_fd_check("constraint-hessian-fd", 1e-6);
  Tracker euc_oracle("euclidean-hessian-fd-oracle", 1e-4);
  Tracker inv_swap("invariant-hessian-swap-symmetry", 1e-10);
  Tracker torsion("torsion-free", 1e-12);
  Tracker metric_compat("metric-compatibility", 1e-11);
  Tracker field_vs_invariant("covariant-derivative-field-vs-invariant", 1e-11);
  Tracker z_swap("z-term-swap-symmetry", 1e-13);
  Tracker newton_grad("newton-gradient-at-critical", 1e-8);
  Tracker newton_spd("newton-hessian-spd-at-minimum", 0.0);

  // Constraint Hessian bilinear form against the cross finite difference.
  for (int n = 1; n <= std::min(opts.n_max, 2); ++n) {
    const Dim dim(n);
    for (int trial = 0; trial < 10; ++trial) {
      const std::uint64_t seed = opts.seed + 3000 * n + trial;
      Rng rng(seed);
      const Eigen::MatrixXd m = rng.matrix(dim.ambient(), dim.ambient(), 1.0);
      const Eigen::MatrixXd v = rng.matrix(dim.ambient(), dim.ambient(), 1.0);
      const Eigen::MatrixXd w = rng.matrix(dim.ambient(), dim.ambient(), 1.0);
      const auto indices = constraint_index_list(dim);
      for (int flat = 0; flat < static_cast<int>(indices.size()); ++flat) {
        const auto& ci = indices[flat];
        const double bilinear = constraint_hessian_bilinear(ci.kind, ci.i, ci.j, v, w);
        const double fd = constraint_fd2(flat, m, v, w, 1e-4);
        constraint_fd_check.observe(std::abs(bilinear - fd), seed_tag(seed));
        // first derivative of the same entry against the gradient matrix
        const double dir_fd = constraint_fd(flat, m, v, 1e-6);
        const double dir = constraint_gradient(ci.kind, ci.i, ci.j, m).cwiseProduct(v).sum();
        constraint_fd_check.observe(std::abs(dir - dir_fd) / (1.0 + std::abs(dir_fd)),
                                    seed_tag(seed));
      }
    }
  }

  // Restricted Euclidean Hessian against the derivative of the embedded
  // gradient field along the retraction curve, paired with a tangent vector.
  for (int n = 1; n <= std::min(opts.n_max, 2); ++n) {
    const Dim dim(n);
    for (const auto& fix : cost_fixtures(n, opts.seed + 23 * n)) {
      for (int trial = 0; trial < 25; ++trial) {
        const std::uint64_t seed = opts.seed + 60000 + 100 * n + trial;
        Rng rng(seed * 3 + 1);
        const SymplecticPoint m = random_symplectic(dim, seed, 1.0);
        const SymTangent v = random_unit_tangent(m, rng);
        const SymTangent w = random_unit_tangent(m, rng);

        const double value = hess_euc_restricted(m, fix.cost, v, w);
        const double h = 1e-5;
        const SymplecticPoint plus = cayley_retract(m, h * v.s());
        const SymplecticPoint minus = cayley_retract(m, -h * v.s());
        const Eigen::MatrixXd dfield =
            (tangent_ambient(embedded_gradient_euc(plus, fix.cost)) -
             tangent_ambient(embedded_gradient_euc(minus, fix.cost))) /
            (2.0 * h);
        const double oracle = dfield.cwiseProduct(tangent_ambient(w)).sum();
        euc_oracle.observe(std::abs(value - oracle) / (1.0 + std::abs(oracle)),
                           fix.name + " " + seed_tag(seed));

        const double inv_vw = hess_inv_restricted(m, fix.cost, v, w);
        const double inv_wv = hess_inv_restricted(m, fix.cost, w, v);
        inv_swap.observe(std::abs(inv_vw - inv_wv) / (1.0 + std::abs(inv_vw)),
                         fix.name + " " + seed_tag(seed));
      }
    }
  }

  // Connection identities on Gl(2n, R).
  for (int n = 1; n <= opts.n_max; ++n) {
    const Dim dim(n);
    const int d = dim.ambient();
    const int trials = 100 / opts.n_max + 1;
    for (int trial = 0; trial < trials; ++trial) {
      const std::uint64_t seed = opts.seed + 70000 + 100 * n + trial;
      Rng rng(seed);
      const SymplecticPoint mp = random_symplectic(dim, seed, 1.0);
      const Eigen::MatrixXd m = mp.matrix();
      const Eigen::MatrixXd x0 = rng.matrix(d, d, 1.0);
      const Eigen::MatrixXd y0 = rng.matrix(d, d, 1.0);
      const Eigen::MatrixXd z0 = rng.matrix(d, d, 1.0);
      const double scale = 1.0 + m.norm() * x0.norm() * y0.norm();

      const Eigen::MatrixXd dxy = covariant_deriv_left_inv(m, x0, y0);
      const Eigen::MatrixXd dyx = covariant_deriv_left_inv(m, y0, x0);
      torsion.observe((dxy - dyx - m * (x0 * y0 - y0 * x0)).norm() / scale, seed_tag(seed));

      const Eigen::MatrixXd dxz = covariant_deriv_left_inv(m, x0, z0);
      const double compat = inner_inv(mp, dxy, m * z0) + inner_inv(mp, m * y0, dxz);
      metric_compat.observe(std::abs(compat) / scale, seed_tag(seed));

      const Eigen::MatrixXd general =
          covariant_deriv_general(m, m * x0, m * y0, m * x0 * y0);
      field_vs_invariant.observe((general - dxy).norm() / scale, seed_tag(seed));

      z_swap.observe((z_term(x0, y0) - z_term(y0, x0)).norm() / scale, seed_tag(seed));
    }
  }

  // Newton system at the least-squares minimum: vanishing coordinates of the
  // differential, strictly positive spectrum.
  for (int n = 1; n <= opts.n_max; ++n) {
    const std::uint64_t seed = opts.seed + 80000 + n;
    const SymplecticPoint w = random_symplectic(Dim(n), seed, 1.0);
    const CostModel cost = least_squares_model(w);
    const NewtonSystem system = newton_system(w, cost);
    newton_grad.observe(system.grad_coords.cwiseAbs().maxCoeff(), seed_tag(seed));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(system.hess.h);
    newton_spd.observe(es.eigenvalues()(0) > 0.0 ? 0.0 : 1.0, seed_tag(seed));
  }

  SuiteResult result{"hessians", {}};
  result.items.push_back(std::move(constraint_fd_check).take());
  result.items.push_back(std::move(euc_oracle).take());
  result.items.push_back(std::move(inv_swap).take());
  result.items.push_back(std::move(torsion).take());
  result.items.push_back(std::move(metric_compat).take());
  result.items.push_back(std::move(field_vs_invariant).take());
  result.items.push_back(std::move(z_swap).take());
  result.items.push_back(std::move(newton_grad).take());
  result.items.push_back(std::move(newton_spd).take());
  return result;
}

namespace {

int thread_cap() {
  if (const char* env = std::getenv("SYMPOPT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

std::vector<SuiteResult> run_suites(const std::string& which, const CheckOptions& opts) {
  using Runner = SuiteResult (*)(const CheckOptions&);
  std::vector<std::pair<std::string, Runner>> selected;
  const std::vector<std::pair<std::string, Runner>> all = {
      {"gradients", &run_gradient_checks},
      {"hessians", &run_hessian_checks},
      {"retraction", &run_retraction_checks},
  };
  for (const auto& entry : all)
    if (which == "all" || which == entry.first) selected.push_back(entry);
  if (selected.empty())
    throw std::invalid_argument("run_suites: unknown suite \"" + which +
                                "\" (expected gradients, hessians, retraction, or all)");

  std::vector<SuiteResult> results;
  if (thread_cap() > 1 && selected.size() > 1) {
    std::vector<std::future<SuiteResult>> futures;
    futures.reserve(selected.size());
    for (const auto& entry : selected)
      futures.push_back(std::async(std::launch::async, entry.second, opts));
    for (auto& f : futures) results.push_back(f.get());
  } else {
    for (const auto& entry : selected) results.push_back(entry.second(opts));
  }
  std::sort(results.begin(), results.end(),
            [](const SuiteResult& a, const SuiteResult& b) { return a.suite < b.suite; });
  return results;
}

}  // namespace sympopt::check
