#pragma once

#include <stdexcept>

#include "sympopt/manifold.hpp"

namespace sympopt {

// (S + 2J) is numerically singular; callers shrink the step and retry.
struct SingularPencil : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cayley-type retraction R_M(MJS) = -M (S + 2J)^{-1} (S - 2J).
// Throws SingularPencil when the smallest LU pivot of (S + 2J) falls below
// 1e-12 * ||S + 2J||_F; otherwise the result is certified symplectic at
// 1e-10 * cond(S + 2J).
SymplecticPoint cayley_retract(const SymplecticPoint& m, const Eigen::MatrixXd& s);

// Convenience: unpacks v.s and retracts. v must be based at m.
SymplecticPoint retract_tangent(const SymplecticPoint& m, const SymTangent& v);

}  // namespace sympopt
