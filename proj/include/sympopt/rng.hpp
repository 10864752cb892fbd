#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace sympopt {

// Deterministic uniform generator: std::mt19937_64 with the 53-bit mantissa
// mapping (x >> 11) * 2^-53. The stream for a given seed is identical on
// every platform; the std distribution adapters (whose output is
// implementation-defined) are never used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Entries i.i.d. uniform in [-scale, scale], filled row-major.
  Eigen::MatrixXd matrix(int rows, int cols, double scale) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = uniform(-scale, scale);
    return m;
  }

  // Draws a full matrix with entries in [-scale, scale], then symmetrizes.
  Eigen::MatrixXd symmetric(int dim, double scale) {
    Eigen::MatrixXd x = matrix(dim, dim, scale);
    return 0.5 * (x + x.transpose());
  }

  // Symmetric with unit Frobenius norm (retries the degenerate zero draw).
  Eigen::MatrixXd unit_symmetric(int dim) {
    for (;;) {
      Eigen::MatrixXd s = symmetric(dim, 1.0);
      double norm = s.norm();
      if (norm > 1e-12) return s / norm;
    }
  }

  Eigen::MatrixXd skew(int dim, double scale) {
    Eigen::MatrixXd x = matrix(dim, dim, scale);
    return 0.5 * (x - x.transpose());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sympopt
