#include "sympopt/retraction.hpp"

#include <algorithm>
#include <string>

namespace sympopt {

SymplecticPoint cayley_retract(const SymplecticPoint& m, const Eigen::MatrixXd& s) {
  const int d = m.ambient();
  if (s.rows() != d || s.cols() != d)
    throw std::invalid_argument("cayley_retract: parameter size does not match the base point");
  const double asym = (s - s.transpose()).norm();
  if (asym > 1e-12 * (1.0 + s.norm()))
    throw std::invalid_argument("cayley_retract: parameter is not symmetric, ||S - S^T||_F = " +
                                std::to_string(asym));
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());

  using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd pencil = sym + 2.0 * j;

  // the pencil solve runs in extended precision with one refinement step so
  // the output symplecticity residual stays flat across the conditioning
  // range the pivot guard admits
  const MatrixXld pencil_l = pencil.cast<long double>();
  Eigen::PartialPivLU<MatrixXld> lu(pencil_l);
  const double pivot_min = static_cast<double>(
      lu.matrixLU().diagonal().cwiseAbs().minCoeff());
  const double pivot_max = static_cast<double>(
      lu.matrixLU().diagonal().cwiseAbs().maxCoeff());
  if (pivot_min < 1e-12 * pencil.norm())
    throw SingularPencil("cayley_retract: smallest pivot of (S + 2J) is " +
                         std::to_string(pivot_min) + " against ||S + 2J||_F = " +
                         std::to_string(pencil.norm()));

  const MatrixXld rhs = (sym - 2.0 * j).cast<long double>();
  MatrixXld x = lu.solve(rhs);
  x += lu.solve(rhs - pencil_l * x);

  const Eigen::MatrixXd result = -m.matrix() * x.cast<double>();
  const double cond_est = pivot_max / pivot_min;
  return SymplecticPoint(result, 1e-10 * std::max(1.0, cond_est));
}

SymplecticPoint retract_tangent(const SymplecticPoint& m, const SymTangent& v) {
  if (v.base().ambient() != m.ambient())
    throw std::invalid_argument("retract_tangent: tangent is based at a different dimension");
  return cayley_retract(m, v.s());
}

}  // namespace sympopt
