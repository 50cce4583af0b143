#include "moduli/alcove.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace moduli::alcove {

AlcovePoint::AlcovePoint(RealVector alpha) : alpha_(std::move(alpha)) {
  const int n = static_cast<int>(alpha_.size());
  if (n < 1) throw invariant_error("AlcovePoint: empty vector");
  for (int i = 0; i + 1 < n; ++i) {
    if (alpha_[i] < alpha_[i + 1] - tol::kPhase)
      throw invariant_error("AlcovePoint: entries not decreasing");
  }
  if (alpha_[n - 1] < alpha_[0] - 1.0 - tol::kPhase)
    throw invariant_error("AlcovePoint: spread exceeds 1");
  if (std::abs(alpha_.sum()) > tol::kPhase)
    throw invariant_error("AlcovePoint: entries do not sum to zero");
}

AlcovePoint::AlcovePoint(std::initializer_list<double> entries)
    : AlcovePoint(Eigen::Map<const RealVector>(entries.begin(),
                                               static_cast<Eigen::Index>(entries.size()))) {}

bool AlcovePoint::almost_equal(const AlcovePoint& other, double eps) const {
  if (other.n() != n()) return false;
  return (alpha_ - other.alpha_).lpNorm<Eigen::Infinity>() <= eps;
}

MultiplicityPattern::MultiplicityPattern(std::vector<int> block_sizes, int k)
    : blocks_(std::move(block_sizes)), k_(k) {
  if (blocks_.empty()) throw invariant_error("MultiplicityPattern: no blocks");
  if (k_ != 0 && k_ != 1) throw invariant_error("MultiplicityPattern: k must be 0 or 1");
  n_ = 0;
  for (int m : blocks_) {
    if (m <= 0) throw invariant_error("MultiplicityPattern: nonpositive block");
    n_ += m;
  }
}

MultiplicityPattern MultiplicityPattern::from_indices(const std::vector<int>& indices, int k) {
  std::vector<int> blocks;
  int prev = 0;
  for (int i : indices) {
    if (i <= prev) throw invariant_error("MultiplicityPattern: indices not increasing");
    blocks.push_back(i - prev);
    prev = i;
  }
  return MultiplicityPattern(blocks, k);
}

std::vector<int> MultiplicityPattern::indices() const {
  std::vector<int> idx;
  int acc = 0;
  for (int m : blocks_) {
    acc += m;
    idx.push_back(acc);
  }
  return idx;
}

std::vector<std::vector<int>> MultiplicityPattern::merged_groups() const {
  std::vector<std::vector<int>> groups;
  int start = 0;
  for (int m : blocks_) {
    std::vector<int> g(m);
    std::iota(g.begin(), g.end(), start);
    groups.push_back(std::move(g));
    start += m;
  }
  if (k_ == 1 && groups.size() >= 2) {
    // alpha_1 and alpha_n + 1 give one eigenvalue of A: the first and last
    // blocks form a single group of size I_1 + I_l - I_{l-1}.
    for (int i : groups.back()) groups.front().push_back(i);
    groups.pop_back();
  }
  return groups;
}

std::vector<MultiplicityPattern> enumerate_faces(int n) {
  if (n < 2) throw invariant_error("enumerate_faces: n must be >= 2");
  std::vector<MultiplicityPattern> faces;
  const unsigned masks = 1u << (n - 1);
  for (unsigned mask = 0; mask < masks; ++mask) {
    std::vector<int> blocks;
    int prev = 0;
    for (int cut = 1; cut < n; ++cut) {
      if (mask & (1u << (cut - 1))) {
        blocks.push_back(cut - prev);
        prev = cut;
      }
    }
    blocks.push_back(n - prev);
    for (int k = 0; k <= 1; ++k) faces.emplace_back(blocks, k);
  }
  return faces;
}

AlcovePoint reversal(const AlcovePoint& a) {
  const int n = a.n();
  RealVector out(n);
  for (int i = 0; i < n; ++i) out[i] = -a[n - 1 - i];
  return AlcovePoint(out);
}

MultiplicityPattern reversal_on_patterns(const MultiplicityPattern& p) {
  std::vector<int> blocks(p.blocks().rbegin(), p.blocks().rend());
  return MultiplicityPattern(blocks, p.k());
}

std::vector<MultiplicityPattern> symmetric_strata(int n) { return enumerate_faces(n); }

TorsionShift torsion_shift(const MultiplicityPattern& pattern, const AlcovePoint& alpha) {
  const int n = pattern.n();
  if (alpha.n() != n) throw invariant_error("torsion_shift: rank mismatch");
  const auto idx = pattern.indices();
  const int l = pattern.length();

  TorsionShift shift;
  if (pattern.k() == 0) {
    // Zero shift: flags and weights are the unshifted ones.
    shift.shifted_I1 = pattern;
    shift.shifted_I2 = reversal_on_patterns(pattern);
    for (int j = 0; j + 1 < l; ++j) shift.shifted_dims1.push_back(idx[j]);
    for (int j = l - 2; j >= 0; --j) shift.shifted_dims2.push_back(n - idx[j]);
    for (int j = 0; j < l; ++j) shift.shifted_weights1.push_back(alpha[idx[j] - 1]);
    for (int j = l - 1; j >= 0; --j) shift.shifted_weights2.push_back(-alpha[idx[j] - 1]);
    return shift;
  }

  if (l == 1)
    throw PatternTooCoarse(
        "torsion_shift: single-block k = 1 face has no attaining weight");
  if (std::abs(alpha.spread() - 1.0) > tol::kEquality)
    throw invariant_error("torsion_shift: alpha does not attain alpha_1 = alpha_n + 1");

  shift.t1 = idx[l - 1] - idx[l - 2];
  shift.t2 = idx[0];
  shift.shifted_degree = -shift.t1 - shift.t2;

  // Flag of E/torsion at x1 has dimensions I_j + t1 (j < l); the terminal one
  // is the full space and is excluded.  Same at x2 with I_l - I_{l-j} + t2.
  for (int j = 0; j + 1 < l; ++j) {
    const int d = idx[j] + shift.t1;
    if (d < n) shift.shifted_dims1.push_back(d);
  }
  for (int j = 1; j + 1 < l + 1; ++j) {
    const int d = idx[l - 1] - idx[l - 1 - j] + shift.t2;
    if (d < n) shift.shifted_dims2.push_back(d);
  }

  auto as_pattern = [n](const std::vector<int>& dims) {
    std::vector<int> ind = dims;
    ind.push_back(n);
    return MultiplicityPattern::from_indices(ind, 0);
  };
  shift.shifted_I1 = as_pattern(shift.shifted_dims1);
  shift.shifted_I2 = as_pattern(shift.shifted_dims2);

  // Shifted weights: alpha_n + 1 = alpha_{I_1} > alpha_{I_2} > ... at x1, and
  // -alpha_{I_1} + 1 = -alpha_{I_l} > -alpha_{I_{l-1}} > ... at x2.
  for (int j = 0; j + 1 < l; ++j) shift.shifted_weights1.push_back(alpha[idx[j] - 1]);
  for (int j = l - 1; j >= 1; --j) shift.shifted_weights2.push_back(-alpha[idx[j] - 1]);
  return shift;
}

AlcovePoint random_alcove_point(std::mt19937_64& rng, int n) {
  // Gaps (alpha_j - alpha_{j+1}) uniform on {d >= 0, sum d <= 1} via Dirichlet.
  std::exponential_distribution<double> exp1(1.0);
  RealVector e(n);
  for (int i = 0; i < n; ++i) e[i] = exp1(rng);
  const double total = e.sum();
  RealVector alpha(n);
  alpha[n - 1] = 0.0;
  for (int j = n - 2; j >= 0; --j) alpha[j] = alpha[j + 1] + e[j] / total;
  alpha.array() -= alpha.mean();
  return AlcovePoint(alpha);
}

AlcovePoint alcove_point_on_face(const MultiplicityPattern& pattern) {
  const int n = pattern.n();
  const int l = pattern.length();
  if (pattern.k() == 1 && l == 1)
    throw PatternTooCoarse("alcove_point_on_face: single-block k = 1 face is empty");
  const double spread = (pattern.k() == 1) ? 1.0 : (l == 1 ? 0.0 : 0.5);
  std::vector<double> w(l, 0.0);
  for (int j = 0; j < l; ++j)
    w[j] = (l == 1) ? 0.0 : spread * static_cast<double>(l - 1 - j) / (l - 1);
  double mean = 0.0;
  const auto& blocks = pattern.blocks();
  for (int j = 0; j < l; ++j) mean += blocks[j] * w[j];
  mean /= n;
  RealVector alpha(n);
  int pos = 0;
  for (int j = 0; j < l; ++j)
    for (int r = 0; r < blocks[j]; ++r) alpha[pos++] = w[j] - mean;
  return AlcovePoint(alpha);
}

}  // namespace moduli::alcove
