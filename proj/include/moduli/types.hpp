#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace moduli {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Tolerance hierarchy used throughout: constructor invariants at 1e-10,
/// equality tests at 1e-8, numerical rank thresholds relative 1e-7, and
/// phase/character arithmetic at 1e-12.
namespace tol {
inline constexpr double kConstructor = 1e-10;
inline constexpr double kEquality = 1e-8;
inline constexpr double kRankRel = 1e-7;
inline constexpr double kPhase = 1e-12;
}  // namespace tol

struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlcoveAmbiguity : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PathTooCloseToSingularity : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LoopEnclosesBothDivisors : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankAmbiguous : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllegalSymmetry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PatternTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotNested : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Incompatible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllegalPattern : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AsymmetricStrata : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateTorsion : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace moduli
