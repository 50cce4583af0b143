#pragma once

#include <random>
#include <utility>
#include <vector>

#include "moduli/alcove.hpp"
#include "moduli/types.hpp"

namespace moduli::lie_core {

/// Nearest special unitary matrix: polar factor with the determinant phase
/// spread evenly over the diagonal.
Matrix project_special_unitary(const Matrix& m);

/// An element of the special unitary group with certified invariants:
/// ||U*U - I||_F <= 1e-10 and |det U - 1| <= 1e-10 after every construction.
/// Products re-project (polar) once a multiplication chain exceeds 8 factors,
/// which keeps drift below the constructor tolerance.
class GroupElement {
 public:
  explicit GroupElement(Matrix entries);
  static GroupElement identity(int n);

  const Matrix& matrix() const { return u_; }
  int n() const { return static_cast<int>(u_.rows()); }

  GroupElement operator*(const GroupElement& rhs) const;
  GroupElement inverse() const;
  /// g U g^{-1}
  GroupElement conjugated_by(const GroupElement& g) const;

  double unitarity_error() const;
  double det_error() const;
  bool almost_equal(const GroupElement& other, double eps = tol::kEquality) const;

 private:
  GroupElement(Matrix entries, int chain);
  Matrix u_;
  int chain_ = 0;  // factors multiplied since the last polar re-projection
};

/// Diagonal torus element: unit-modulus phases with product 1 (within 1e-12).
class TorusElement {
 public:
  explicit TorusElement(Vector phases);
  static TorusElement identity(int n);
  /// Phases exp(i theta_j) with theta_n = -(theta_1 + ... + theta_{n-1}).
  static TorusElement from_angles(const RealVector& angles_first_n_minus_1);

  int n() const { return static_cast<int>(phases_.size()); }
  cplx operator[](int i) const { return phases_[i]; }
  const Vector& phases() const { return phases_; }

  TorusElement operator*(const TorusElement& rhs) const;
  TorusElement inverse() const;
  /// Order of the phases reversed (the R involution on the torus).
  TorusElement reversed() const;
  GroupElement as_group_element() const;

 private:
  Vector phases_;
};

/// Skew-Hermitian traceless matrix; tangent data for solvers and rank counts.
class LieAlgebraElement {
 public:
  explicit LieAlgebraElement(Matrix entries);
  /// (X - X*)/2 with the trace removed.
  static LieAlgebraElement project(const Matrix& m);

  const Matrix& matrix() const { return x_; }
  int n() const { return static_cast<int>(x_.rows()); }
  LieAlgebraElement scaled(double s) const { return LieAlgebraElement(s * x_); }

 private:
  Matrix x_;
};

/// Matrix exponential of a skew-Hermitian traceless matrix, via the spectral
/// decomposition of -iX; exactly unitary up to rounding.
GroupElement exp_map(const LieAlgebraElement& x);

/// Logarithm with branch choices taken from the alcove representative, so that
/// the result is traceless and exp_map inverts it.
LieAlgebraElement log_map(const GroupElement& a);

/// Conjugation of A into the fundamental alcove: returns (alpha, U) with
/// U A U^{-1} = exp(-2 pi i diag(alpha)) and alpha in the simplex.  Ordering is
/// by decreasing alpha with ties broken by original eigenvalue index.  Throws
/// AlcoveAmbiguity when the phases admit two distinct representatives within
/// `ambiguity_tol` (first lexicographic is the one reported in the exception).
std::pair<alcove::AlcovePoint, GroupElement> project_to_alcove(
    const GroupElement& a, double ambiguity_tol = tol::kEquality);

/// Face label of alpha: I_j the indices with alpha_{I_j} > alpha_{I_j + 1}
/// (plus I_l = n), and k = 1 iff alpha_1 = alpha_n + 1 within tol.
alcove::MultiplicityPattern stabilizer_pattern(const alcove::AlcovePoint& alpha,
                                               double tol = tol::kEquality);

/// dim [Stab(A), Stab(A)] = sum over merged blocks of (m^2 - 1).
int commutator_subgroup_dim(const alcove::MultiplicityPattern& pattern);

/// dim Stab(A) = sum over merged blocks of m^2, minus 1.
int stabilizer_dim(const alcove::MultiplicityPattern& pattern);

/// Haar sample: QR of a complex Gaussian matrix with the R-diagonal phase
/// correction, then the determinant normalized.
GroupElement random_group_element(std::mt19937_64& rng, int n);
GroupElement random_group_element(std::uint64_t seed, int n);

TorusElement random_torus_element(std::mt19937_64& rng, int n);

/// Random element of the unit ball of the Lie algebra.
LieAlgebraElement random_lie_element(std::mt19937_64& rng, int n);

/// Orthogonal real basis of su(n) (off-diagonal pairs then diagonal steps).
std::vector<Matrix> su_basis(int n);

/// Basis of the copy of su(m) supported on the given index group, embedded in
/// n x n matrices.
std::vector<Matrix> su_basis_on_group(int n, const std::vector<int>& group);

/// Basis i(E_pp - E_{p+1,p+1}) of the diagonal torus algebra.
std::vector<Matrix> torus_basis(int n);

}  // namespace moduli::lie_core
