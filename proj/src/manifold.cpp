#include "sympopt/manifold.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "sympopt/retraction.hpp"
#include "sympopt/rng.hpp"

namespace sympopt {

namespace {

void require_even_square(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 2 || m.rows() % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": expected an even-sized square matrix, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

}  // namespace

Eigen::MatrixXd make_poisson(Dim dim) {
  const int n = dim.n;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  return j;
}

CertResult certify_symplectic(const Eigen::MatrixXd& m, double tol) {
  require_even_square(m, "certify_symplectic");
  const Eigen::MatrixXd j = make_poisson(Dim(static_cast<int>(m.rows()) / 2));
  const double residual = (m.transpose() * j * m - j).norm();
  return {residual <= tol, residual};
}

SymplecticPoint::SymplecticPoint(Eigen::MatrixXd m, double cert_tol) : m_(std::move(m)) {
  require_even_square(m_, "SymplecticPoint");
  n_ = static_cast<int>(m_.rows()) / 2;
  const CertResult cert = certify_symplectic(m_, cert_tol);
  cert_residual_ = cert.residual;
  char detail[128];
  if (!cert.ok) {
    std::snprintf(detail, sizeof(detail),
                  "SymplecticPoint: ||M^T J M - J||_F = %.3e exceeds tolerance %.3e",
                  cert.residual, cert_tol);
    throw CertificationError(detail);
  }
  const double det = m_.partialPivLu().determinant();
  if (std::abs(det - 1.0) > 1e-6) {
    std::snprintf(detail, sizeof(detail), "SymplecticPoint: det(M) = %.6f is not 1 within 1e-6",
                  det);
    throw CertificationError(detail);
  }
}

Eigen::MatrixXd SymplecticPoint::inverse() const {
  const Eigen::MatrixXd j = make_poisson(Dim(n_));
  return -j * m_.transpose() * j;
}

SymTangent::SymTangent(SymplecticPoint base, const Eigen::MatrixXd& s) : base_(std::move(base)) {
  if (s.rows() != base_.ambient() || s.cols() != base_.ambient())
    throw std::invalid_argument("SymTangent: parameter size does not match the base point");
  s_ = 0.5 * (s + s.transpose());
}

Eigen::MatrixXd tangent_ambient(const SymTangent& v) {
  const Eigen::MatrixXd j = make_poisson(Dim(v.base().n()));
  return v.base().matrix() * j * v.s();
}

TangentProjection ambient_to_tangent(const SymplecticPoint& m, const Eigen::MatrixXd& v) {
  if (v.rows() != m.ambient() || v.cols() != m.ambient())
    throw std::invalid_argument("ambient_to_tangent: size mismatch");
  const Eigen::MatrixXd j = make_poisson(Dim(m.n()));
  const Eigen::MatrixXd raw = -m.matrix().transpose() * j * v;
  const double asym = (raw - raw.transpose()).norm();
  return {SymTangent(m, 0.5 * (raw + raw.transpose())), asym};
}

int constraint_count(Dim dim) { return 2 * dim.n * dim.n - dim.n; }

std::vector<ConstraintIndex> constraint_index_list(Dim dim) {
  const int n = dim.n;
  std::vector<ConstraintIndex> list;
  list.reserve(static_cast<std::size_t>(constraint_count(dim)));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) list.push_back({ConstraintKind::kAC, i, j});
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) list.push_back({ConstraintKind::kBD, i, j});
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) list.push_back({ConstraintKind::kMix, i, j});
  return list;
}

Eigen::VectorXd constraint_values(const Eigen::MatrixXd& m) {
  require_even_square(m, "constraint_values");
  const int n = static_cast<int>(m.rows()) / 2;
  const auto a = m.topLeftCorner(n, n);
  const auto b = m.topRightCorner(n, n);
  const auto c = m.bottomLeftCorner(n, n);
  const auto d = m.bottomRightCorner(n, n);

  Eigen::VectorXd values(constraint_count(Dim(n)));
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      values(idx++) = a.col(i).dot(c.col(j)) - a.col(j).dot(c.col(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      values(idx++) = b.col(i).dot(d.col(j)) - b.col(j).dot(d.col(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      values(idx++) = a.col(i).dot(d.col(j)) - c.col(i).dot(b.col(j)) - (i == j ? 1.0 : 0.0);
  return values;
}

int tangent_dim(Dim dim) { return dim.n * (2 * dim.n + 1); }

std::vector<Eigen::MatrixXd> tangent_basis_sym(Dim dim) {
  const int d = dim.ambient();
  std::vector<Eigen::MatrixXd> basis;
  basis.reserve(static_cast<std::size_t>(tangent_dim(dim)));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
      s(i, j) += 0.5;
      s(j, i) += 0.5;
      basis.push_back(std::move(s));
    }
  return basis;
}

std::vector<Eigen::MatrixXd> tangent_basis(Dim dim) {
  const Eigen::MatrixXd j = make_poisson(dim);
  std::vector<Eigen::MatrixXd> basis = tangent_basis_sym(dim);
  for (auto& e : basis) e = j * e;
  return basis;
}

SymplecticPoint random_symplectic(Dim dim, std::uint64_t seed, double scale) {
  if (scale < 0) throw std::invalid_argument("random_symplectic: scale must be >= 0");
  const int d = dim.ambient();
  const SymplecticPoint identity(Eigen::MatrixXd::Identity(d, d));
  if (scale == 0.0) return identity;

  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    const Eigen::MatrixXd s = rng.symmetric(d, scale);
    try {
      return cayley_retract(identity, s);
    } catch (const SingularPencil&) {
      // near-singular pencil: fresh draw
    } catch (const CertificationError&) {
      // ill-conditioned draw: fresh draw
    }
  }
  throw std::runtime_error("random_symplectic: 16 draws failed for seed " + std::to_string(seed));
}

}  // namespace sympopt
