#pragma once

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "moduli/alcove.hpp"
#include "moduli/lie_core.hpp"
#include "moduli/types.hpp"

namespace moduli::plucker {

/// Decomposable j-form c * f_1 ^ ... ^ f_j, stored as an orthonormal matrix of
/// covector rows spanning its support together with the complex scale; the
/// annihilator Ann = (row space)^perp is then structural, not numerical.
struct BetaForm {
  Matrix rows;  // j x n, orthonormal rows
  cplx scale;

  int degree() const { return static_cast<int>(rows.rows()); }
  int ambient() const { return static_cast<int>(rows.cols()); }
  /// Value on j column vectors: scale * det(rows * vectors).
  cplx evaluate(const Matrix& vectors) const;
  /// Orthonormal column basis of the annihilator.
  Matrix annihilator() const;
};

/// The framing data at the two marked fibers: per point i, entries for
/// j = 1..n, each Zero or a decomposable j-form.
struct BetaData {
  int n = 0;
  std::array<std::vector<std::optional<BetaForm>>, 2> points;

  const std::optional<BetaForm>& at(int point, int degree) const {
    return points[point][degree - 1];
  }
  std::optional<BetaForm>& at(int point, int degree) { return points[point][degree - 1]; }

  /// Degrees with nonzero entries, ascending.
  std::vector<int> support(int point) const;
};

/// Canonical j-form annihilating the span of the given columns.
BetaForm form_annihilating(const Matrix& step_columns, cplx scale);

/// BetaData of the standard flags on a stratum: point 1 carries the pattern,
/// point 2 its reversal; all scales 1.
BetaData standard_betas(const alcove::MultiplicityPattern& pattern);

/// Standard stratum data pushed through a random fiber basis change and random
/// nonzero scales.
BetaData random_betas(std::mt19937_64& rng, const alcove::MultiplicityPattern& pattern);

/// Fiber basis change v -> U v on both fibers; annihilators move, scales stay.
BetaData change_fiber_basis(const BetaData& b, const lie_core::GroupElement& u);

struct FlagStep {
  int dim;
  Matrix basis;  // n x dim orthonormal columns
};

/// Nested annihilator flags per point; throws NotNested when the nonzero
/// entries are not compatible.
std::array<std::vector<FlagStep>, 2> flag_from_betas(const BetaData& b);

/// One volume form per block: gamma_s with beta_{n-I_{s-1}} = beta_{n-I_s} ^ gamma_s
/// (the chain starts at the unit 0-form; the right-wedge representative makes
/// standard chains carry unit scales).  Entries absent where the top form
/// vanishes (k = 1).
struct SubquotientFrame {
  struct Entry {
    int block_dim;
    BetaForm gamma;
  };
  std::array<std::vector<std::optional<Entry>>, 2> blocks;
};

SubquotientFrame compatibility_quotients(const BetaData& b);

/// Stratum label read off the vanishing runs; validates that the two points
/// carry reversal-related patterns with matching k.
alcove::MultiplicityPattern stratum_of_betas(const BetaData& b);

/// Scales multiplied by the characters mu_j(t_i) = t_i^1 ... t_i^j; flags
/// untouched.
BetaData torus_act_betas(const BetaData& b, const lie_core::TorusElement& t1,
                         const lie_core::TorusElement& t2);

/// Character value nu_{s,s'}(t) = t^{s+1} ... t^{s'}.
cplx nu_character(const lie_core::TorusElement& t, int s, int s_prime);

/// Block pairings gamma^1_s / gamma^2_{l+1-s}: the composition of the
/// trivialization at x1 with the inverse of the trivialization at x2 (twisted
/// by the reversal).  Invariant under the antidiagonal torus (t, R(t)).
std::vector<std::optional<cplx>> antidiagonal_identify(const BetaData& b);

/// Contraction by the torsion generators on a k = 1 stratum; returns the
/// shifted forms on the quotient fiber together with the shifted flag
/// dimensions (reported with the torsion filler added back).
struct TorsionBetas {
  cplx unit_scalar;  // beta_{t1}(s_1, ..., s_{t1}), nonzero by the stability gate
  int quotient_dim;
  Matrix quotient_basis;  // n x (n - t1) orthonormal columns
  std::vector<std::optional<BetaForm>> entries;  // degrees 1..n-t1 on the quotient
  std::vector<int> shifted_dims;                 // annihilator dims + t1
};

TorsionBetas torsion_betas(const BetaData& b, const std::vector<Vector>& generators,
                           int point = 0);

}  // namespace moduli::plucker
