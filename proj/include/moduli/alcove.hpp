#pragma once

#include <random>
#include <vector>

#include "moduli/types.hpp"

namespace moduli::alcove {

/// A point of the weight simplex
///   alpha_1 >= alpha_2 >= ... >= alpha_n >= alpha_1 - 1,  sum alpha_i = 0.
class AlcovePoint {
 public:
  explicit AlcovePoint(RealVector alpha);
  AlcovePoint(std::initializer_list<double> entries);

  static AlcovePoint zero(int n) { return AlcovePoint(RealVector::Zero(n)); }

  int n() const { return static_cast<int>(alpha_.size()); }
  double operator[](int i) const { return alpha_[i]; }
  const RealVector& vec() const { return alpha_; }

  /// alpha_1 - alpha_n; equals 1 exactly on the k = 1 boundary.
  double spread() const { return alpha_[0] - alpha_[n() - 1]; }

  bool almost_equal(const AlcovePoint& other, double eps = tol::kEquality) const;

 private:
  RealVector alpha_;
};

/// Face label (I, k) of the simplex, stored by eigenvalue block sizes so the
/// reversal involution is a literal list reversal.  I is recovered as the
/// prefix sums of the blocks; k = 1 marks the boundary alpha_1 = alpha_n + 1.
class MultiplicityPattern {
 public:
  MultiplicityPattern(std::vector<int> block_sizes, int k);

  static MultiplicityPattern from_indices(const std::vector<int>& indices, int k);

  const std::vector<int>& blocks() const { return blocks_; }
  std::vector<int> indices() const;  // I_1 < I_2 < ... < I_l = n
  int k() const { return k_; }
  int n() const { return n_; }
  int length() const { return static_cast<int>(blocks_.size()); }

  /// Partition of {0,...,n-1} into eigenvalue index groups of A = exp(-2 pi i alpha).
  /// For k = 1 the first and last blocks share one eigenvalue and merge into a
  /// single (cyclically contiguous) group.
  std::vector<std::vector<int>> merged_groups() const;

  bool operator==(const MultiplicityPattern& other) const {
    return blocks_ == other.blocks_ && k_ == other.k_;
  }

 private:
  std::vector<int> blocks_;
  int k_;
  int n_;
};

/// Torsion/weight bookkeeping for a k = 1 stratum: torsion lengths t1, t2, the
/// degree shift, and the Hecke-shifted flags and weights at both points.
struct TorsionShift {
  int t1 = 0;
  int t2 = 0;
  int shifted_degree = 0;
  std::vector<int> shifted_dims1;  // flag dimensions at x1, full-space step excluded
  std::vector<int> shifted_dims2;  // flag dimensions at x2, full-space step excluded
  MultiplicityPattern shifted_I1{{1}, 0};
  MultiplicityPattern shifted_I2{{1}, 0};
  std::vector<double> shifted_weights1;
  std::vector<double> shifted_weights2;
};

/// All 2 * 2^(n-1) face labels (composition of n) x (k in {0,1}).  k = 1 labels
/// are kept even where no interior weight attains the boundary; membership of a
/// specific alpha is a separate test.
std::vector<MultiplicityPattern> enumerate_faces(int n);

/// alpha -> -R(alpha): entries negated and order reversed.  An involution of
/// the simplex.
AlcovePoint reversal(const AlcovePoint& a);

/// Block sizes reversed, k preserved; the involution induced by R on faces.
MultiplicityPattern reversal_on_patterns(const MultiplicityPattern& p);

/// Labels of the symmetric strata: each (I, k) paired with (R(I), k), keeping
/// the x1 label.  Same cardinality as enumerate_faces.
std::vector<MultiplicityPattern> symmetric_strata(int n);

/// Shifted flags/weights/degree for a k = 1 face.  Throws PatternTooCoarse for
/// the single-block k = 1 label, which no alpha attains.
TorsionShift torsion_shift(const MultiplicityPattern& pattern, const AlcovePoint& alpha);

/// Uniform sample of the simplex (uniform on the gap simplex).
AlcovePoint random_alcove_point(std::mt19937_64& rng, int n);

/// A point in the relative interior of the given face.
AlcovePoint alcove_point_on_face(const MultiplicityPattern& pattern);

}  // namespace moduli::alcove
