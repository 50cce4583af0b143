#include "moduli/plucker.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace moduli::plucker {

namespace {

constexpr double kZeroEntry = 1e-9;

// Orthonormal column basis of the orthogonal complement via Householder QR.
// For standard-basis inputs this returns the remaining standard vectors.
Matrix orthogonal_complement(const Matrix& columns, int n) {
  if (columns.cols() == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(columns);
  Matrix q = qr.householderQ();
  return q.rightCols(n - columns.cols());
}

// Deterministic Gram-Schmidt with one re-orthogonalization pass; rows below
// the zero threshold are dropped.
Matrix gram_schmidt_rows(const Matrix& rows) {
  const int n = static_cast<int>(rows.cols());
  std::vector<Vector> kept;
  for (int i = 0; i < rows.rows(); ++i) {
    Vector v = rows.row(i).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : kept) v -= u.dot(v) * u;
    const double norm = v.norm();
    if (norm > kZeroEntry) kept.push_back(v / norm);
  }
  Matrix out(static_cast<int>(kept.size()), n);
  for (size_t i = 0; i < kept.size(); ++i) out.row(i) = kept[i].transpose();
  return out;
}

bool rowspace_contained(const Matrix& small, const Matrix& big, double eps) {
  // rows of `small` inside rowspace of `big` (both orthonormal).
  const Matrix proj = small * big.adjoint() * big;
  return (small - proj).cwiseAbs().maxCoeff() <= eps;
}

}  // namespace

cplx BetaForm::evaluate(const Matrix& vectors) const {
  return scale * Matrix(rows * vectors).determinant();
}

Matrix BetaForm::annihilator() const {
  return orthogonal_complement(rows.adjoint(), ambient());
}

std::vector<int> BetaData::support(int point) const {
  std::vector<int> s;
  for (int j = 1; j <= n; ++j)
    if (points[point][j - 1].has_value()) s.push_back(j);
  return s;
}

BetaForm form_annihilating(const Matrix& step_columns, cplx scale) {
  const int n = static_cast<int>(step_columns.rows());
  const Matrix comp = orthogonal_complement(step_columns, n);
  return BetaForm{comp.adjoint(), scale};
}

namespace {

// Nonzero degrees at the two points of the stratum (I, k): at x1 the chain
// n - I_s (s < l) plus n when k = 0; at x2 the degrees I_s plus n.
std::vector<int> nonzero_degrees(const alcove::MultiplicityPattern& pattern, int point) {
  const auto idx = pattern.indices();
  const int n = pattern.n();
  const int l = pattern.length();
  std::vector<int> degs;
  for (int s = 0; s + 1 < l; ++s)
    degs.push_back(point == 0 ? n - idx[s] : idx[s]);
  std::sort(degs.begin(), degs.end());
  if (pattern.k() == 0) degs.push_back(n);
  return degs;
}

}  // namespace

BetaData standard_betas(const alcove::MultiplicityPattern& pattern) {
  const int n = pattern.n();
  BetaData b;
  b.n = n;
  for (int point = 0; point < 2; ++point) {
    b.points[point].assign(n, std::nullopt);
    for (int j : nonzero_degrees(pattern, point)) {
      // Standard chain e_1* ^ ... ^ e_j*.
      Matrix rows = Matrix::Identity(n, n).topRows(j);
      b.points[point][j - 1] = BetaForm{rows, cplx(1.0, 0.0)};
    }
  }
  return b;
}

BetaData random_betas(std::mt19937_64& rng, const alcove::MultiplicityPattern& pattern) {
  BetaData b = standard_betas(pattern);
  auto u = lie_core::random_group_element(rng, pattern.n());
  b = change_fiber_basis(b, u);
  std::uniform_real_distribution<double> mod(0.3, 2.0);
  std::uniform_real_distribution<double> arg(-3.0, 3.0);
  for (auto& point : b.points)
    for (auto& entry : point)
      if (entry) entry->scale = std::polar(mod(rng), arg(rng));
  return b;
}

BetaData change_fiber_basis(const BetaData& b, const lie_core::GroupElement& u) {
  BetaData out = b;
  for (auto& point : out.points)
    for (auto& entry : point)
      if (entry) entry->rows = entry->rows * u.matrix();
  return out;
}

std::array<std::vector<FlagStep>, 2> flag_from_betas(const BetaData& b) {
  std::array<std::vector<FlagStep>, 2> flags;
  for (int point = 0; point < 2; ++point) {
    const auto degs = b.support(point);
    // Nesting: higher-degree forms must contain the lower-degree rowspaces.
    for (size_t a = 0; a + 1 < degs.size(); ++a) {
      const auto& lo = *b.at(point, degs[a]);
      const auto& hi = *b.at(point, degs[a + 1]);
      if (!rowspace_contained(lo.rows, hi.rows, tol::kEquality))
        throw NotNested("flag_from_betas: annihilators are not nested");
    }
    for (auto it = degs.rbegin(); it != degs.rend(); ++it) {
      const auto& form = *b.at(point, *it);
      const int dim = b.n - form.degree();
      if (dim == 0) continue;
      flags[point].push_back(FlagStep{dim, form.annihilator()});
    }
  }
  return flags;
}

SubquotientFrame compatibility_quotients(const BetaData& b) {
  SubquotientFrame frame;
  const int n = b.n;
  for (int point = 0; point < 2; ++point) {
    auto degs = b.support(point);
    if (degs.empty()) throw IllegalPattern("compatibility_quotients: empty beta column");

    // Downward chain through the virtual unit 0-form: blocks from the top
    // (largest flag quotient) to the bottom.
    std::vector<std::pair<int, int>> pairs;  // (j, j') consecutive, j < j'
    int prev = 0;
    for (int j : degs) {
      pairs.emplace_back(prev, j);
      prev = j;
    }
    const bool top_missing = (prev != n);  // k = 1: no block through beta_n

    // pairs[i] -> block l - i at the point (block 1 is the one through beta_n).
    const int l = static_cast<int>(pairs.size()) + (top_missing ? 1 : 0);
    frame.blocks[point].assign(l, std::nullopt);

    for (size_t i = 0; i < pairs.size(); ++i) {
      const auto [jlo, jhi] = pairs[i];
      const BetaForm* low = (jlo == 0) ? nullptr : &*b.at(point, jlo);
      const BetaForm& high = *b.at(point, jhi);
      Matrix low_rows = low ? low->rows : Matrix(0, n);
      if (low && !rowspace_contained(low->rows, high.rows, tol::kEquality))
        throw Incompatible("compatibility_quotients: no wedge factor exists");

      // gamma rows: rowspace(high) cut down by the complement of rowspace(low).
      Matrix projected = high.rows;
      if (low)
        projected = high.rows - high.rows * low->rows.adjoint() * low->rows;
      Matrix g = gram_schmidt_rows(projected);
      if (g.rows() != jhi - jlo)
        throw Incompatible("compatibility_quotients: wedge factor has wrong rank");

      // Fix the scale by evaluating both sides on the dual frame of [low; g].
      // The stored representative follows high = low ^ gamma, which makes the
      // standard chains carry unit scales; the wedge line is the same either way.
      Matrix stacked(jhi, n);
      if (low) stacked.topRows(jlo) = low_rows;
      stacked.bottomRows(g.rows()) = g;
      const Matrix dual = stacked.adjoint();  // n x jhi frame
      const cplx lhs = high.evaluate(dual);
      const cplx denom =
          (low ? low->scale : cplx(1.0, 0.0)) * Matrix(stacked * dual).determinant();
      if (std::abs(denom) < kZeroEntry)
        throw Incompatible("compatibility_quotients: degenerate frame");
      const cplx cval = lhs / denom;

      const int block_index = l - 1 - static_cast<int>(i);  // 0-based block - 1
      frame.blocks[point][block_index] =
          SubquotientFrame::Entry{jhi - jlo, BetaForm{g, cval}};
    }
  }
  return frame;
}

alcove::MultiplicityPattern stratum_of_betas(const BetaData& b) {
  const int n = b.n;
  const auto s1 = b.support(0);
  const auto s2 = b.support(1);
  if (s1.empty() || s2.empty())
    throw IllegalPattern("stratum_of_betas: a point has no nonzero beta");
  const bool k1_first = s1.back() != n;
  const bool k1_second = s2.back() != n;
  if (k1_first != k1_second)
    throw IllegalPattern("stratum_of_betas: the top forms vanish at one point only");
  const int k = k1_first ? 1 : 0;

  std::vector<int> indices;
  for (int j : s1)
    if (j != n) indices.push_back(n - j);
  std::sort(indices.begin(), indices.end());
  indices.push_back(n);
  auto pattern = alcove::MultiplicityPattern::from_indices(indices, k);
  if (pattern.length() == 1 && k == 1)
    throw IllegalPattern("stratum_of_betas: single-block k = 1 run is not attainable");

  // The second point must carry the reversed pattern: degrees I_1, ..., I_{l-1}.
  std::vector<int> expected;
  const auto idx = pattern.indices();
  for (int s = 0; s + 1 < pattern.length(); ++s) expected.push_back(idx[s]);
  if (k == 0) expected.push_back(n);
  if (s2 != expected)
    throw IllegalPattern("stratum_of_betas: vanishing runs are not reversal-symmetric");
  return pattern;
}

BetaData torus_act_betas(const BetaData& b, const lie_core::TorusElement& t1,
                         const lie_core::TorusElement& t2) {
  if (t1.n() != b.n || t2.n() != b.n)
    throw invariant_error("torus_act_betas: rank mismatch");
  BetaData out = b;
  for (int point = 0; point < 2; ++point) {
    const auto& t = (point == 0) ? t1 : t2;
    cplx mu(1.0, 0.0);
    for (int j = 1; j <= b.n; ++j) {
      mu *= t[j - 1];
      auto& entry = out.points[point][j - 1];
      if (entry) entry->scale *= mu;
    }
  }
  return out;
}

cplx nu_character(const lie_core::TorusElement& t, int s, int s_prime) {
  cplx nu(1.0, 0.0);
  for (int p = s + 1; p <= s_prime; ++p) nu *= t[p - 1];
  return nu;
}

std::vector<std::optional<cplx>> antidiagonal_identify(const BetaData& b) {
  alcove::MultiplicityPattern pattern({1}, 0);
  try {
    pattern = stratum_of_betas(b);
  } catch (const IllegalPattern&) {
    throw AsymmetricStrata("antidiagonal_identify: strata are not reversal-related");
  }

  const auto frame = compatibility_quotients(b);
  const int l = pattern.length();
  std::vector<std::optional<cplx>> pairings(l);
  for (int s = 1; s <= l; ++s) {
    const auto& left = frame.blocks[0][s - 1];
    const auto& right = frame.blocks[1][l - s];
    if (!left || !right) continue;
    pairings[s - 1] = left->gamma.scale / right->gamma.scale;
  }
  return pairings;
}

TorsionBetas torsion_betas(const BetaData& b, const std::vector<Vector>& generators,
                           int point) {
  const int n = b.n;
  const auto pattern = stratum_of_betas(b);
  if (pattern.k() != 1)
    throw IllegalPattern("torsion_betas: torsion arises on k = 1 strata only");
  const auto degs = b.support(point);
  const int t_rank = degs.front();
  if (static_cast<int>(generators.size()) != t_rank)
    throw invariant_error("torsion_betas: need exactly t1 generators");

  Matrix s(n, t_rank);
  for (int i = 0; i < t_rank; ++i) s.col(i) = generators[i];

  // Stability gate: beta_{t1}(s_1, ..., s_{t1}) != 0.
  const cplx gate = b.at(point, t_rank)->evaluate(s);
  if (std::abs(gate) <= kZeroEntry * std::abs(b.at(point, t_rank)->scale))
    throw DegenerateTorsion("torsion_betas: generators annihilate beta_{t1}");

  TorsionBetas out;
  out.unit_scalar = gate;
  out.quotient_dim = n - t_rank;
  out.quotient_basis = orthogonal_complement(s, n);
  out.entries.assign(out.quotient_dim, std::nullopt);

  for (int j : degs) {
    if (j == t_rank) continue;
    const auto& form = *b.at(point, j);
    // Split the contraction: with Q = [Q_M | Q_perp] unitary on the row index,
    // det([rows s | rows K v]) = det(Q) det(R) det(Q_perp^* rows K v).
    const Matrix m = form.rows * s;                      // j x t1
    const Matrix nmat = form.rows * out.quotient_basis;  // j x (n - t1)
    Eigen::HouseholderQR<Matrix> qr(m);
    const Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().topRows(t_rank).triangularView<Eigen::Upper>();
    const cplx detr = r.determinant();
    if (std::abs(detr) <= kZeroEntry)
      throw DegenerateTorsion("torsion_betas: contraction degenerates");
    const Matrix reduced = q.rightCols(j - t_rank).adjoint() * nmat;
    Matrix g = gram_schmidt_rows(reduced);
    if (g.rows() != j - t_rank)
      throw DegenerateTorsion("torsion_betas: contracted form not decomposable");
    // Fold the basis change into the scale via evaluation on the dual frame.
    const Matrix dual = g.adjoint();
    const cplx value = form.scale * q.determinant() * detr *
                       Matrix(reduced * dual).determinant();
    const cplx gdet = Matrix(g * dual).determinant();
    out.entries[j - t_rank - 1] = BetaForm{g, value / gdet};
    out.shifted_dims.push_back((out.quotient_dim - (j - t_rank)) + t_rank);
  }
  std::sort(out.shifted_dims.begin(), out.shifted_dims.end());
  return out;
}

}  // namespace moduli::plucker
