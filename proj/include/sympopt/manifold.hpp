#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sympopt {

// Default certification tolerance on ||M^T J M - J||_F.
inline constexpr double kCertTol = 1e-8;

// A matrix failed symplecticity certification.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Half-dimension n of Sp(2n, R); ambient matrices are 2n x 2n.
struct Dim {
  explicit Dim(int half) : n(half) {
    if (n < 1) throw std::invalid_argument("Dim: half-dimension must be >= 1");
  }
  int ambient() const { return 2 * n; }
  int n;
};

// The Poisson matrix J = [[0, I_n], [-I_n, 0]].
// Satisfies J^T = -J, J^2 = -I, J^{-1} = -J.
Eigen::MatrixXd make_poisson(Dim dim);

struct CertResult {
  bool ok = false;
  double residual = 0.0;  // ||m^T J m - J||_F
};

// Symplecticity certificate for a square matrix. Rejects odd-sized input.
CertResult certify_symplectic(const Eigen::MatrixXd& m, double tol = kCertTol);

// A 2n x 2n real matrix certified to lie on Sp(2n, R):
// ||m^T J m - J||_F <= cert_tol and det(m) = 1 within 1e-6.
// Immutable after construction.
class SymplecticPoint {
 public:
  explicit SymplecticPoint(Eigen::MatrixXd m, double cert_tol = kCertTol);

  int n() const { return n_; }
  int ambient() const { return 2 * n_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double cert_residual() const { return cert_residual_; }

  // n x n blocks of [[A, B], [C, D]].
  Eigen::Block<const Eigen::MatrixXd> block_a() const { return m_.topLeftCorner(n_, n_); }
  Eigen::Block<const Eigen::MatrixXd> block_b() const { return m_.topRightCorner(n_, n_); }
  Eigen::Block<const Eigen::MatrixXd> block_c() const { return m_.bottomLeftCorner(n_, n_); }
  Eigen::Block<const Eigen::MatrixXd> block_d() const { return m_.bottomRightCorner(n_, n_); }

  // Exact group inverse -J m^T J; no factorization involved.
  Eigen::MatrixXd inverse() const;

 private:
  Eigen::MatrixXd m_;
  int n_ = 0;
  double cert_residual_ = 0.0;
};

// Tangent vector at M represented by its symmetric parameter S; the ambient
// representative is M * J * S. S is stored exactly symmetrized.
class SymTangent {
 public:
  SymTangent(SymplecticPoint base, const Eigen::MatrixXd& s);

  const SymplecticPoint& base() const { return base_; }
  const Eigen::MatrixXd& s() const { return s_; }

 private:
  SymplecticPoint base_;
  Eigen::MatrixXd s_;
};

// Ambient representative base.m * J * v.s.
Eigen::MatrixXd tangent_ambient(const SymTangent& v);

struct TangentProjection {
  SymTangent tangent;
  // ||raw - raw^T||_F for raw = -M^T J V; zero iff V lies in T_M Sp(2n, R).
  double asym_residual = 0.0;
};

// Recovers the symmetric parameter of an ambient matrix V at M:
// raw = -M^T J V, s = (raw + raw^T)/2.
TangentProjection ambient_to_tangent(const SymplecticPoint& m, const Eigen::MatrixXd& v);

enum class ConstraintKind { kAC, kBD, kMix };

// 1-based index pair into the constraint family; AC/BD require i < j.
struct ConstraintIndex {
  ConstraintKind kind;
  int i;
  int j;
};

int constraint_count(Dim dim);  // 2n^2 - n

// Canonical ordering: AC block (i<j lexicographic), BD block (i<j
// lexicographic), then the mixed block row-major over (i, j).
std::vector<ConstraintIndex> constraint_index_list(Dim dim);

// Evaluates the constraint family on a 2n x 2n candidate matrix:
//   F_AC_ij = <a_i, c_j> - <a_j, c_i>
//   F_BD_ij = <b_i, d_j> - <b_j, d_i>
//   F_ij    = <a_i, d_j> - <c_i, b_j> - delta_ij
// in the canonical ordering; all entries vanish on Sp(2n, R).
Eigen::VectorXd constraint_values(const Eigen::MatrixXd& m);

int tangent_dim(Dim dim);  // n(2n + 1)

// Symmetric parameters S_(i,j) = (f_i f_j^T + f_j f_i^T)/2, 1 <= i <= j <= 2n,
// in lexicographic (i, j) order.
std::vector<Eigen::MatrixXd> tangent_basis_sym(Dim dim);

// Basis matrices e_(i,j) = J * S_(i,j); the family { M e_(i,j) } spans
// T_M Sp(2n, R) for every symplectic M.
std::vector<Eigen::MatrixXd> tangent_basis(Dim dim);

// Random point: Cayley retraction from the identity of a symmetric draw with
// i.i.d. entries in [-scale, scale]. Retries on a near-singular pencil and
// fails after 16 attempts. scale = 0 returns the identity.
SymplecticPoint random_symplectic(Dim dim, std::uint64_t seed, double scale);

}  // namespace sympopt
