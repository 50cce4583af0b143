#include "moduli/lie_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace moduli::lie_core {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Multiplication chains longer than this are polar re-projected.
constexpr int kMaxChain = 8;

Matrix fix_determinant_phase(Matrix u) {
  const int n = static_cast<int>(u.rows());
  const cplx det = u.determinant();
  const double phase = std::arg(det);
  u *= std::polar(1.0, -phase / n);
  return u;
}

}  // namespace

Matrix project_special_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = svd.matrixU() * svd.matrixV().adjoint();
  return fix_determinant_phase(std::move(u));
}

GroupElement::GroupElement(Matrix entries) : u_(std::move(entries)) {
  if (u_.rows() != u_.cols() || u_.rows() < 1)
    throw invariant_error("GroupElement: matrix must be square");
  if (unitarity_error() > tol::kConstructor)
    throw invariant_error("GroupElement: not unitary within 1e-10");
  if (det_error() > tol::kConstructor)
    throw invariant_error("GroupElement: determinant not 1 within 1e-10");
}

GroupElement::GroupElement(Matrix entries, int chain) : u_(std::move(entries)), chain_(chain) {}

GroupElement GroupElement::identity(int n) { return GroupElement(Matrix::Identity(n, n)); }

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  if (rhs.n() != n()) throw invariant_error("GroupElement: rank mismatch in product");
  Matrix prod = u_ * rhs.u_;
  int chain = chain_ + rhs.chain_ + 1;
  if (chain > kMaxChain) {
    prod = project_special_unitary(prod);
    chain = 0;
  }
  return GroupElement(std::move(prod), chain);
}

GroupElement GroupElement::inverse() const { return GroupElement(u_.adjoint(), chain_); }

GroupElement GroupElement::conjugated_by(const GroupElement& g) const {
  return g * (*this) * g.inverse();
}

double GroupElement::unitarity_error() const {
  const int n = static_cast<int>(u_.rows());
  return (u_.adjoint() * u_ - Matrix::Identity(n, n)).norm();
}

double GroupElement::det_error() const { return std::abs(u_.determinant() - cplx(1.0, 0.0)); }

bool GroupElement::almost_equal(const GroupElement& other, double eps) const {
  return other.n() == n() && (u_ - other.u_).cwiseAbs().maxCoeff() <= eps;
}

TorusElement::TorusElement(Vector phases) : phases_(std::move(phases)) {
  if (phases_.size() < 1) throw invariant_error("TorusElement: empty");
  cplx prod(1.0, 0.0);
  for (Eigen::Index i = 0; i < phases_.size(); ++i) {
    if (std::abs(std::abs(phases_[i]) - 1.0) > tol::kPhase)
      throw invariant_error("TorusElement: phase not unit modulus");
    prod *= phases_[i];
  }
  if (std::abs(prod - cplx(1.0, 0.0)) > tol::kPhase * phases_.size())
    throw invariant_error("TorusElement: product of phases not 1");
}

TorusElement TorusElement::identity(int n) { return TorusElement(Vector::Ones(n)); }

TorusElement TorusElement::from_angles(const RealVector& angles) {
  const int n = static_cast<int>(angles.size()) + 1;
  Vector phases(n);
  double sum = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    phases[i] = std::polar(1.0, angles[i]);
    sum += angles[i];
  }
  phases[n - 1] = std::polar(1.0, -sum);
  return TorusElement(phases);
}

TorusElement TorusElement::operator*(const TorusElement& rhs) const {
  return TorusElement(phases_.cwiseProduct(rhs.phases_));
}

TorusElement TorusElement::inverse() const { return TorusElement(phases_.conjugate()); }

TorusElement TorusElement::reversed() const { return TorusElement(phases_.reverse()); }

GroupElement TorusElement::as_group_element() const {
  return GroupElement(Matrix(phases_.asDiagonal()));
}

LieAlgebraElement::LieAlgebraElement(Matrix entries) : x_(std::move(entries)) {
  if (x_.rows() != x_.cols() || x_.rows() < 1)
    throw invariant_error("LieAlgebraElement: matrix must be square");
  if ((x_ + x_.adjoint()).norm() > tol::kPhase)
    throw invariant_error("LieAlgebraElement: not skew-Hermitian");
  if (std::abs(x_.trace()) > tol::kPhase)
    throw invariant_error("LieAlgebraElement: not traceless");
}

LieAlgebraElement LieAlgebraElement::project(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  Matrix x = 0.5 * (m - m.adjoint());
  x -= (x.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
  return LieAlgebraElement(std::move(x));
}

GroupElement exp_map(const LieAlgebraElement& x) {
  // X = iH with H Hermitian; exp(X) = V diag(exp(i lambda)) V*.
  const Matrix h = cplx(0.0, -1.0) * x.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const int n = x.n();
  Vector phases(n);
  for (int i = 0; i < n; ++i) phases[i] = std::polar(1.0, es.eigenvalues()[i]);
  Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return GroupElement(std::move(u));
}

LieAlgebraElement log_map(const GroupElement& a) {
  const auto [alpha, u] = project_to_alcove(a);
  const int n = a.n();
  Vector diag(n);
  for (int i = 0; i < n; ++i) diag[i] = cplx(0.0, -kTwoPi * alpha[i]);
  Matrix x = u.matrix().adjoint() * diag.asDiagonal() * u.matrix();
  // Symmetrize away rounding before the constructor check.
  x = 0.5 * (x - x.adjoint());
  x -= (x.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
  return LieAlgebraElement(std::move(x));
}

namespace {

// Fractional part in [0, 1).
double frac(double v) {
  double f = v - std::floor(v);
  if (f >= 1.0) f -= 1.0;
  return f;
}

// Sort phases decreasing (ties by index), rotate by the integer sum m and
// subtract 1 from the wrapped entries.  This is the affine reduction into the
// simplex; it also yields the permutation needed for the conjugator.
struct AlcoveCandidate {
  RealVector alpha;
  std::vector<int> source;  // source[i] = eigenvalue index placed at slot i
};

AlcoveCandidate reduce_phases(const RealVector& y) {
  const int n = static_cast<int>(y.size());
  std::vector<int> ord(n);
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return y[a] > y[b]; });
  const int m = static_cast<int>(std::llround(y.sum()));
  AlcoveCandidate c;
  c.alpha.resize(n);
  c.source.resize(n);
  for (int i = 0; i < n; ++i) {
    const int slot = (m + i) % n;
    c.source[i] = ord[slot];
    c.alpha[i] = y[ord[slot]] - ((m + i) >= n ? 1.0 : 0.0);
  }
  return c;
}

bool lexicographically_less(const RealVector& a, const RealVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

std::pair<alcove::AlcovePoint, GroupElement> project_to_alcove(const GroupElement& a,
                                                               double ambiguity_tol) {
  const int n = a.n();
  Eigen::ComplexSchur<Matrix> schur(a.matrix(), true);
  const Matrix& q = schur.matrixU();
  RealVector y(n);
  for (int i = 0; i < n; ++i) y[i] = frac(-std::arg(schur.matrixT()(i, i)) / kTwoPi);

  AlcoveCandidate primary = reduce_phases(y);

  // A phase at the 0 ~ 1 wrap is the one numerical ambiguity: flipping its
  // representative changes the rotation offset.  Check the flipped reduction.
  {
    RealVector y2 = y;
    bool flipped = false;
    for (int i = 0; i < n; ++i) {
      if (y2[i] > 1.0 - ambiguity_tol) {
        y2[i] -= 1.0;
        flipped = true;
      }
    }
    if (flipped) {
      AlcoveCandidate alt = reduce_phases(y2);
      const bool alt_valid =
          alt.alpha[n - 1] >= alt.alpha[0] - 1.0 - ambiguity_tol &&
          std::abs(alt.alpha.sum()) <= ambiguity_tol * n;
      if (alt_valid && (alt.alpha - primary.alpha).lpNorm<Eigen::Infinity>() > ambiguity_tol) {
        if (lexicographically_less(alt.alpha, primary.alpha)) std::swap(alt, primary);
        std::ostringstream msg;
        msg << "project_to_alcove: two representatives within tolerance "
            << ambiguity_tol << "; lexicographically first chosen as primary";
        throw AlcoveAmbiguity(msg.str());
      }
    }
  }

  RealVector alpha = primary.alpha;
  alpha.array() -= alpha.mean();
  const double spread = alpha[0] - alpha[n - 1];
  if (spread > 1.0) {
    if (spread > 1.0 + tol::kConstructor)
      throw invariant_error("project_to_alcove: spread exceeds 1 beyond tolerance");
    alpha /= spread;
  }

  Matrix perm = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) perm(i, primary.source[i]) = 1.0;
  Matrix u = fix_determinant_phase(perm * q.adjoint());
  return {alcove::AlcovePoint(alpha), GroupElement(std::move(u))};
}

alcove::MultiplicityPattern stabilizer_pattern(const alcove::AlcovePoint& alpha, double tol) {
  const int n = alpha.n();
  std::vector<int> blocks;
  int current = 1;
  for (int i = 0; i + 1 < n; ++i) {
    if (alpha[i] - alpha[i + 1] > tol) {
      blocks.push_back(current);
      current = 1;
    } else {
      ++current;
    }
  }
  blocks.push_back(current);
  const int k = (std::abs(alpha.spread() - 1.0) <= tol) ? 1 : 0;
  return alcove::MultiplicityPattern(blocks, k);
}

int commutator_subgroup_dim(const alcove::MultiplicityPattern& pattern) {
  int dim = 0;
  for (const auto& g : pattern.merged_groups()) {
    const int m = static_cast<int>(g.size());
    dim += m * m - 1;
  }
  return dim;
}

int stabilizer_dim(const alcove::MultiplicityPattern& pattern) {
  int dim = 0;
  for (const auto& g : pattern.merged_groups()) {
    const int m = static_cast<int>(g.size());
    dim += m * m;
  }
  return dim - 1;
}

GroupElement random_group_element(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return GroupElement(fix_determinant_phase(std::move(q)));
}

GroupElement random_group_element(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  return random_group_element(rng, n);
}

TorusElement random_torus_element(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> uni(-std::numbers::pi, std::numbers::pi);
  RealVector angles(n - 1);
  for (int i = 0; i + 1 < n; ++i) angles[i] = uni(rng);
  return TorusElement::from_angles(angles);
}

LieAlgebraElement random_lie_element(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
  auto x = LieAlgebraElement::project(m);
  const double norm = x.matrix().norm();
  return norm > 1.0 ? x.scaled(1.0 / norm) : x;
}

std::vector<Matrix> su_basis(int n) {
  std::vector<Matrix> basis;
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      Matrix a = Matrix::Zero(n, n);
      a(p, q) = 1.0;
      a(q, p) = -1.0;
      basis.push_back(a);
      Matrix s = Matrix::Zero(n, n);
      s(p, q) = cplx(0.0, 1.0);
      s(q, p) = cplx(0.0, 1.0);
      basis.push_back(s);
    }
  }
  for (const auto& h : torus_basis(n)) basis.push_back(h);
  return basis;
}

std::vector<Matrix> su_basis_on_group(int n, const std::vector<int>& group) {
  const int m = static_cast<int>(group.size());
  std::vector<Matrix> basis;
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      Matrix a = Matrix::Zero(n, n);
      a(group[p], group[q]) = 1.0;
      a(group[q], group[p]) = -1.0;
      basis.push_back(a);
      Matrix s = Matrix::Zero(n, n);
      s(group[p], group[q]) = cplx(0.0, 1.0);
      s(group[q], group[p]) = cplx(0.0, 1.0);
      basis.push_back(s);
    }
  }
  for (int p = 0; p + 1 < m; ++p) {
    Matrix h = Matrix::Zero(n, n);
    h(group[p], group[p]) = cplx(0.0, 1.0);
    h(group[p + 1], group[p + 1]) = cplx(0.0, -1.0);
    basis.push_back(h);
  }
  return basis;
}

std::vector<Matrix> torus_basis(int n) {
  std::vector<Matrix> basis;
  for (int p = 0; p + 1 < n; ++p) {
    Matrix h = Matrix::Zero(n, n);
    h(p, p) = cplx(0.0, 1.0);
    h(p + 1, p + 1) = cplx(0.0, -1.0);
    basis.push_back(h);
  }
  return basis;
}

}  // namespace moduli::lie_core
