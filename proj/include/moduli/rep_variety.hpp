#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "moduli/alcove.hpp"
#include "moduli/lie_core.hpp"
#include "moduli/types.hpp"

namespace moduli::rep_variety {

using lie_core::GroupElement;
using lie_core::TorusElement;

/// A tuple (alpha, B1, B2, (C_i, D_i)_i, t) for the presentation
///   (prod_i [C_i, D_i]) B1 A B1^{-1} B2 A^{-1} B2^{-1} = 1,
/// with A = exp(-2 pi i diag alpha).  In the disconnected variant the handles
/// split as (h, g - h) and each component carries its own one-puncture
/// relation, with holonomies A and A^{-1}.
struct RepPoint {
  alcove::AlcovePoint alpha;
  GroupElement b1;
  GroupElement b2;
  std::vector<std::pair<GroupElement, GroupElement>> handles;
  cplx t = 0.0;
  int split = -1;  // -1: connected (g - 1 handles); >= 1: first `split` of g handles

  bool disconnected() const { return split >= 0; }
  int genus() const {
    return static_cast<int>(handles.size()) + (disconnected() ? 0 : 1);
  }
  int n() const { return alpha.n(); }

  Matrix holonomy_matrix() const;  // A
};

/// Frobenius distance of the relation word(s) from the identity.
double relation_residual(const RepPoint& p);

/// Unsolved random point with the given data; used for solver starts and as a
/// generic nonsolution in tests.
RepPoint random_rep_point(std::mt19937_64& rng, int g, int n,
                          const alcove::AlcovePoint& alpha, cplx t, int split = -1);

/// Riemannian least-squares solve of the relation at fixed alpha: damped
/// Gauss-Newton steps on the product of special unitary groups, gradient
/// pulled back to the Lie algebra, polar retraction, multi-start.  Throws
/// NoConvergence after `max_starts` failed starts.
RepPoint solve_relation(std::uint64_t seed, int g, int n,
                        const alcove::AlcovePoint& alpha, cplx t,
                        int max_starts = 50);

/// Disconnected desingularisation: solves the two one-puncture relations with
/// holonomies A and A^{-1} and returns the glued data (split = h).
RepPoint build_disconnected(std::uint64_t seed, int h, int g, int n,
                            const alcove::AlcovePoint& alpha, int max_starts = 50);

/// The group acting at a point of the family: SU(n) conjugation always; right
/// multipliers mu = nu in Stab(A) at t != 0, and tau in T times independent
/// commutator factors at t = 0.  Disconnected points get one conjugation per
/// component.
struct SymmetryDescriptor {
  bool t_is_zero;
  bool disconnected;
  alcove::MultiplicityPattern pattern;
  int n;

  int group_dimension() const;
};

SymmetryDescriptor symmetry_descriptor(const RepPoint& p);

/// dim ker(D relation) minus the symmetry orbit rank at a solved generic
/// point; equals (2g-2)(n^2-1) on the open stratum.  Throws RankAmbiguous on
/// degenerate strata or when a singular value falls within a factor 10 of the
/// rank threshold.
int tangent_dimension(const RepPoint& p, double rank_rel_tol = tol::kRankRel);

/// (A, g B1 tau mu, g B2 tau nu, (g C_i g^{-1}, g D_i g^{-1}), t).  Legality:
/// tau mu = tau nu in Stab(A) for t != 0; mu, nu in [Stab(A), Stab(A)] for
/// t = 0.  Throws IllegalSymmetry otherwise.
RepPoint gauge_act(const RepPoint& p, const GroupElement& g, const GroupElement& mu,
                   const GroupElement& nu, const TorusElement& tau);

/// Moment map (alpha, -R(alpha)); field-constant along torus orbits.
std::pair<alcove::AlcovePoint, alcove::AlcovePoint> moment_map(const RepPoint& p);

/// (B1, B2) -> (B1 t1, B2 t2).
RepPoint torus_act(const RepPoint& p, const TorusElement& t1, const TorusElement& t2);

/// Canonical representative of the antidiagonal torus orbit: phases fixed
/// left-to-right on B1's columns (first usable row), the last column carrying
/// the determinant constraint.  Idempotent and orbit-constant.
RepPoint antidiagonal_reduce(const RepPoint& p);

/// Membership helpers for the stratum symmetry group of alpha.
bool in_stabilizer(const Matrix& m, const alcove::MultiplicityPattern& pattern,
                   double eps = tol::kEquality);
bool in_commutator_subgroup(const Matrix& m, const alcove::MultiplicityPattern& pattern,
                            double eps = tol::kEquality);

struct ImplodeResult {
  bool equivalent = false;
  double distance = 0.0;   // orbit distance at the best witness found
  int starts_used = 0;
  std::string confidence;  // "certified" or "search-exhausted"
};

/// Semi-decision procedure for implosion equivalence: multi-start Riemannian
/// search over (g, tau, mu', nu') driving the orbit distance below 1e-7.
/// A `true` is certified by the witness; `false` is advisory.
ImplodeResult implode_equivalent(const RepPoint& p, const RepPoint& q, int budget = 50);

}  // namespace moduli::rep_variety
