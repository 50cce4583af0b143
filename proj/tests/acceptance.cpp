// Acceptance suite: one line per criterion, PASS/FAIL with the measured
// margins, nonzero exit if anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "moduli/alcove.hpp"
#include "moduli/lie_core.hpp"
#include "moduli/local_model.hpp"
#include "moduli/plucker.hpp"
#include "moduli/rep_variety.hpp"
#include "moduli/trinion.hpp"

using namespace moduli;
namespace lm = moduli::local_model;
namespace rv = moduli::rep_variety;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name,
              detail.c_str());
  if (!pass) ++failures;
}

Matrix diag_exp(const alcove::AlcovePoint& alpha, double scale) {
  const int n = alpha.n();
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::polar(1.0, scale * alpha[i]);
  return d;
}

// ---------------------------------------------------------------------------
// 1. Monodromy suite: gamma -> A, x-loop -> A^{1/2}, y-loop -> A^{-1/2},
//    n in {2,3,4}, 10 random alpha, t in {0.5, 0.1, 0.01}; < 30 s.

void criterion_monodromy() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      auto alpha = alcove::random_alcove_point(rng, n);
      lm::ModelConnection conn(alpha, lm::Gauge::unitary);
      const Matrix a = diag_exp(alpha, -2.0 * kPi);
      const Matrix a_half = diag_exp(alpha, -kPi);
      for (double t : {0.5, 0.1, 0.01}) {
        const double r = 0.5;
        Matrix hg = lm::transport(conn, lm::PathOnQuadric::gamma_loop(t, r));
        worst = std::max(worst, (hg - a).cwiseAbs().maxCoeff());
        Matrix hx = lm::transport(conn, lm::PathOnQuadric::x_axis_loop(r, t / r));
        worst = std::max(worst, (hx - a_half).cwiseAbs().maxCoeff());
        Matrix hy = lm::transport(conn, lm::PathOnQuadric::y_axis_loop(t / r, r));
        worst = std::max(worst, (hy - Matrix(a_half.adjoint())).cwiseAbs().maxCoeff());
      }
    }
  }
  const double elapsed = seconds_since(start);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max entrywise error %.3e (tol 1e-7), %.1f s (budget 30 s)",
                worst, elapsed);
  report(1, "monodromy of the model connection", worst < 1e-7 && elapsed < 30.0, buf);
}

// ---------------------------------------------------------------------------
// 2. Gauge/residue suite: finite-difference gauge check < 1e-6 on a 50 x 50
//    grid; blow-up residues -/+ alpha/2 within 1e-8 for 10 random alpha.

void criterion_gauge_residue() {
  std::mt19937_64 rng(102);
  double worst_gauge = 0.0;
  for (int n = 2; n <= 4; ++n)
    worst_gauge = std::max(
        worst_gauge, lm::gauge_transform_check(alcove::random_alcove_point(rng, n), 50));

  double worst_res = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + rep % 3;
    auto alpha = alcove::random_alcove_point(rng, n);
    lm::ModelConnection p1(alpha, lm::Gauge::blowup_patch_1);
    lm::ModelConnection p2(alpha, lm::Gauge::blowup_patch_2);
    Matrix r1 = lm::residue(p1, lm::Divisor::proper_y, 0.3);
    Matrix r2 = lm::residue(p2, lm::Divisor::proper_x, 0.3);
    for (int i = 0; i < n; ++i) {
      worst_res = std::max(worst_res, std::abs(r1(i, i) - cplx(-0.5 * alpha[i], 0.0)));
      worst_res = std::max(worst_res, std::abs(r2(i, i) - cplx(0.5 * alpha[i], 0.0)));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "gauge residual %.3e (tol 1e-6), residue error %.3e (tol 1e-8)",
                worst_gauge, worst_res);
  report(2, "gauge transform and blow-up residues", worst_gauge < 1e-6 && worst_res < 1e-8,
         buf);
}

// ---------------------------------------------------------------------------
// 3. Dimension suite: tangent dimension equals (2g-2)(n^2-1) at 20 solved
//    generic points per (g, n), both t != 0 and t = 0, connected and
//    disconnected; integer-exact; < 5 min.

void criterion_dimension() {
  const auto start = Clock::now();
  std::mt19937_64 rng(103);
  int checked = 0, correct = 0;
  std::string first_bad;
  for (auto [g, n] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const int expected = (2 * g - 2) * (n * n - 1);
    for (int variant = 0; variant < 4; ++variant) {
      const bool disconnected = variant >= 2;
      const cplx t = (variant % 2 == 0) ? cplx(0.3, 0.0) : cplx(0.0, 0.0);
      for (int rep = 0; rep < 5; ++rep) {
        const std::uint64_t seed = rng();
        std::mt19937_64 arng(seed);
        auto alpha = alcove::random_alcove_point(arng, n);
        try {
          rv::RepPoint p = disconnected ? rv::build_disconnected(seed, 1, g, n, alpha)
                                        : rv::solve_relation(seed, g, n, alpha, t);
          p.t = t;  // the relation is t-independent; t selects the symmetry group
          const int dim = rv::tangent_dimension(p);
          ++checked;
          if (dim == expected) {
            ++correct;
          } else if (first_bad.empty()) {
            first_bad = "g=" + std::to_string(g) + " n=" + std::to_string(n) +
                        " got " + std::to_string(dim) + " want " + std::to_string(expected);
          }
        } catch (const std::exception& e) {
          ++checked;
          if (first_bad.empty()) first_bad = e.what();
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%d/%d exact%s%s, %.1f s (budget 300 s)", correct, checked,
                first_bad.empty() ? "" : ", first failure: ",
                first_bad.c_str(), elapsed);
  report(3, "tangent dimension (2g-2)(n^2-1)", correct == checked && elapsed < 300.0, buf);
}

// ---------------------------------------------------------------------------
// 4. Symmetry suite: residual invariant under 100 random legal actions to
//    1e-12; moment map field-equal on torus orbits; implosion detects 100% of
//    constructed equivalences (n = 3, blocks (2,1)) and rejects 100% of
//    non-torus B-translates on the generic stratum, budget 50.

void criterion_symmetry() {
  std::mt19937_64 rng(104);
  double worst_residual_drift = 0.0;
  bool moment_field_equal = true;

  // Solved base points: generic and (2,1) strata at t = 0 and t != 0.
  auto generic_alpha = alcove::random_alcove_point(rng, 3);
  auto block_alpha = alcove::alcove_point_on_face(alcove::MultiplicityPattern({2, 1}, 0));
  auto p_generic = rv::solve_relation(31, 2, 3, generic_alpha, 0.0);
  auto p_blocks = rv::solve_relation(32, 2, 3, block_alpha, 0.0);
  auto p_blocks_t = rv::solve_relation(33, 2, 3, block_alpha, cplx(0.4, 0.0));

  auto su2_block = [&](std::mt19937_64& r) {
    // Element of the embedded SU(2) x {1} factor of [Stab, Stab].
    auto u2 = lie_core::random_group_element(r, 2);
    Matrix blk = Matrix::Identity(3, 3);
    blk.topLeftCorner(2, 2) = u2.matrix();
    return lie_core::GroupElement(blk);
  };

  for (int i = 0; i < 100; ++i) {
    const rv::RepPoint* base = (i % 3 == 0) ? &p_generic : (i % 3 == 1) ? &p_blocks : &p_blocks_t;
    const double before = rv::relation_residual(*base);
    rv::RepPoint moved = *base;
    if (i % 2 == 0) {
      moved = rv::torus_act(*base, lie_core::random_torus_element(rng, 3),
                            lie_core::random_torus_element(rng, 3));
    } else {
      auto g = lie_core::random_group_element(rng, 3);
      auto tau = lie_core::random_torus_element(rng, 3);
      if (base == &p_generic) {
        moved = rv::gauge_act(*base, g, lie_core::GroupElement::identity(3),
                              lie_core::GroupElement::identity(3), tau);
      } else if (base == &p_blocks) {
        moved = rv::gauge_act(*base, g, su2_block(rng), su2_block(rng), tau);
      } else {
        auto mu = su2_block(rng);
        moved = rv::gauge_act(*base, g, mu, mu, lie_core::TorusElement::identity(3));
      }
    }
    worst_residual_drift =
        std::max(worst_residual_drift, std::abs(rv::relation_residual(moved) - before));
    auto m_before = rv::moment_map(*base);
    auto m_after = rv::moment_map(moved);
    if ((m_before.first.vec() - m_after.first.vec()).cwiseAbs().maxCoeff() != 0.0 ||
        (m_before.second.vec() - m_after.second.vec()).cwiseAbs().maxCoeff() != 0.0)
      moment_field_equal = false;
  }

  int detected = 0, rejected = 0;
  const int cases = 10;
  for (int i = 0; i < cases; ++i) {
    auto q = rv::gauge_act(p_blocks, lie_core::random_group_element(rng, 3), su2_block(rng),
                           su2_block(rng), lie_core::random_torus_element(rng, 3));
    if (rv::implode_equivalent(p_blocks, q, 50).equivalent) ++detected;
  }
  for (int i = 0; i < cases; ++i) {
    Matrix w = lie_core::random_group_element(rng, 3).matrix();
    Matrix off = w;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() < 0.3) {
      --i;
      continue;
    }
    auto q = p_generic;
    q.b1 = q.b1 * lie_core::GroupElement(w);
    if (!rv::implode_equivalent(p_generic, q, 50).equivalent) ++rejected;
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "residual drift %.2e (tol 1e-12), moment map %s, implosion %d/%d found, %d/%d rejected",
                worst_residual_drift, moment_field_equal ? "field-equal" : "NOT equal",
                detected, cases, rejected, cases);
  report(4, "symmetry actions and implosion equivalence",
         worst_residual_drift <= 1e-12 && moment_field_equal && detected == cases &&
             rejected == cases,
         buf);
}

// ---------------------------------------------------------------------------
// 5. Strata suite: partition property on 10^4 samples for n <= 5; reversal
//    identities exact; torsion shifts reproduce the shifted dimensions on all
//    k = 1 faces for n <= 4.

void criterion_strata() {
  std::mt19937_64 rng(105);
  bool partition_ok = true;
  for (int n = 2; n <= 5 && partition_ok; ++n) {
    auto faces = alcove::enumerate_faces(n);
    for (int rep = 0; rep < 10000; ++rep) {
      auto a = alcove::random_alcove_point(rng, n);
      auto p = lie_core::stabilizer_pattern(a);
      int hits = 0;
      for (const auto& f : faces)
        if (f == p) ++hits;
      if (hits != 1) {
        partition_ok = false;
        break;
      }
    }
  }

  bool reversal_ok = true;
  for (int n = 2; n <= 5 && reversal_ok; ++n) {
    for (int rep = 0; rep < 200; ++rep) {
      auto a = alcove::random_alcove_point(rng, n);
      if ((alcove::reversal(alcove::reversal(a)).vec() - a.vec()).cwiseAbs().maxCoeff() !=
          0.0)
        reversal_ok = false;
      auto lhs = lie_core::stabilizer_pattern(alcove::reversal(a));
      auto rhs = alcove::reversal_on_patterns(lie_core::stabilizer_pattern(a));
      if (!(lhs == rhs)) reversal_ok = false;
    }
  }

  // Shifted flags: recompute the expected dimensions directly from the face
  // indices (I_j + t1 at x1 and I_l - I_{l-j} + t2 at x2, full step dropped).
  bool torsion_ok = true;
  for (int n = 2; n <= 4; ++n) {
    for (const auto& face : alcove::enumerate_faces(n)) {
      if (face.k() != 1 || face.length() < 2) continue;
      auto alpha = alcove::alcove_point_on_face(face);
      auto shift = alcove::torsion_shift(face, alpha);
      const auto idx = face.indices();
      const int l = face.length();
      const int t1 = idx[l - 1] - idx[l - 2];
      const int t2 = idx[0];
      if (shift.t1 != t1 || shift.t2 != t2 || shift.shifted_degree != -t1 - t2)
        torsion_ok = false;
      std::vector<int> dims1, dims2;
      for (int j = 0; j + 1 < l; ++j)
        if (idx[j] + t1 < n) dims1.push_back(idx[j] + t1);
      for (int j = 1; j < l; ++j)
        if (idx[l - 1] - idx[l - 1 - j] + t2 < n)
          dims2.push_back(idx[l - 1] - idx[l - 1 - j] + t2);
      if (shift.shifted_dims1 != dims1 || shift.shifted_dims2 != dims2) torsion_ok = false;
      for (size_t i = 0; i + 1 < shift.shifted_weights1.size(); ++i)
        if (shift.shifted_weights1[i] <= shift.shifted_weights1[i + 1]) torsion_ok = false;
      if (!shift.shifted_weights1.empty() &&
          std::abs(shift.shifted_weights1.front() - (alpha[n - 1] + 1.0)) > 1e-14)
        torsion_ok = false;
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof(buf), "partition %s, reversal %s, torsion shifts %s",
                partition_ok ? "ok" : "BROKEN", reversal_ok ? "exact" : "BROKEN",
                torsion_ok ? "ok" : "BROKEN");
  report(5, "strata enumeration and torsion bookkeeping",
         partition_ok && reversal_ok && torsion_ok, buf);
}

// ---------------------------------------------------------------------------
// 6. Pluecker suite: flag/beta round trips to 1e-10; the gamma rescaling law
//    exact in exponents; pairings invariant to 1e-12 under 100 antidiagonal
//    actions and non-invariant under 100 generic ones.

void criterion_plucker() {
  std::mt19937_64 rng(106);

  // Round trip: betas -> flags -> betas with the same annihilators.
  double worst_roundtrip = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (const auto& pattern : alcove::enumerate_faces(n)) {
      if (pattern.k() == 1 && pattern.length() == 1) continue;
      auto b = plucker::random_betas(rng, pattern);
      auto flags = plucker::flag_from_betas(b);
      for (int point = 0; point < 2; ++point) {
        for (const auto& step : flags[point]) {
          auto rebuilt = plucker::form_annihilating(step.basis, cplx(1.0, 0.0));
          const auto& original = b.at(point, n - step.dim);
          // Same annihilator: original rows lie in the rebuilt row space.
          Matrix proj = original->rows -
                        original->rows * rebuilt.rows.adjoint() * rebuilt.rows;
          worst_roundtrip = std::max(worst_roundtrip, proj.cwiseAbs().maxCoeff());
        }
      }
    }
  }

  // Rescaling law: the torus action multiplies gamma scales by exactly the
  // product character nu.
  double worst_char = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    auto pattern = alcove::MultiplicityPattern({1, 2, 1}, 0);
    auto b = plucker::random_betas(rng, pattern);
    auto t1 = lie_core::random_torus_element(rng, 4);
    auto t2 = lie_core::random_torus_element(rng, 4);
    auto moved = plucker::torus_act_betas(b, t1, t2);
    auto f0 = plucker::compatibility_quotients(b);
    auto f1 = plucker::compatibility_quotients(moved);
    const auto idx = pattern.indices();
    const int l = pattern.length(), n = pattern.n();
    for (int point = 0; point < 2; ++point) {
      const auto& t = point == 0 ? t1 : t2;
      const auto pat = point == 0 ? pattern : alcove::reversal_on_patterns(pattern);
      const auto pidx = pat.indices();
      for (int s = 1; s <= l; ++s) {
        const int jlo = (s == pat.length()) ? 0 : n - pidx[s - 1];
        const int jhi = (s == 1) ? n : n - pidx[s - 2];
        const cplx nu = plucker::nu_character(t, jlo, jhi);
        worst_char = std::max(
            worst_char, std::abs(f1.blocks[point][s - 1]->gamma.scale -
                                 nu * f0.blocks[point][s - 1]->gamma.scale));
      }
    }
    (void)idx;
  }

  // Pairing invariance and nondegeneracy.
  double worst_invariance = 0.0;
  int nondegenerate = 0;
  auto pattern = alcove::MultiplicityPattern({1, 2, 1}, 0);
  auto b = plucker::random_betas(rng, pattern);
  auto base = plucker::antidiagonal_identify(b);
  for (int rep = 0; rep < 100; ++rep) {
    auto t = lie_core::random_torus_element(rng, 4);
    auto pairs = plucker::antidiagonal_identify(plucker::torus_act_betas(b, t, t.reversed()));
    for (size_t s = 0; s < base.size(); ++s)
      if (base[s]) worst_invariance = std::max(worst_invariance, std::abs(*pairs[s] - *base[s]));
  }
  for (int rep = 0; rep < 100; ++rep) {
    auto t1 = lie_core::random_torus_element(rng, 4);
    auto t2 = lie_core::random_torus_element(rng, 4);
    auto pairs = plucker::antidiagonal_identify(plucker::torus_act_betas(b, t1, t2));
    double change = 0.0;
    for (size_t s = 0; s < base.size(); ++s)
      if (base[s]) change = std::max(change, std::abs(*pairs[s] - *base[s]));
    if (change > 1e-8) ++nondegenerate;
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "round trip %.2e (tol 1e-10), character law %.2e (tol 1e-12), invariance %.2e, "
                "%d/100 generic actions move a pairing",
                worst_roundtrip, worst_char, worst_invariance, nondegenerate);
  report(6, "framing forms, characters, antidiagonal pairings",
         worst_roundtrip < 1e-10 && worst_char < 1e-12 && worst_invariance < 1e-12 &&
             nondegenerate == 100,
         buf);
}

// ---------------------------------------------------------------------------
// 7. Verlinde suite: brute-force counts 4 and 10 for g = 2, k = 1, 2; counts
//    match the closed form for g in {2,3}, k <= 6; graph-independent; < 2 min.

void criterion_verlinde() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;

  auto theta = trinion::TrinionGraph::theta_chain(2);
  const long long c1 = trinion::count_lattice_points(theta, 1);
  const long long c2 = trinion::count_lattice_points(theta, 2);
  if (c1 != 4 || c2 != 10) {
    ok = false;
    detail = "theta counts " + std::to_string(c1) + ", " + std::to_string(c2);
  }

  for (int g = 2; g <= 3 && ok; ++g) {
    for (int k = 0; k <= 6; ++k) {
      auto check = trinion::verlinde_crosscheck(g, k);
      if (!check.agree) {
        ok = false;
        detail = "disagreement at g=" + std::to_string(g) + " k=" + std::to_string(k) +
                 " count=" + std::to_string(check.count) +
                 " closed=" + std::to_string(check.closed_form);
        break;
      }
    }
  }
  const double elapsed = seconds_since(start);
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%s4 and 10 at g=2; g in {2,3}, k <= 6 all match, %.1f s (budget 120 s)",
                detail.empty() ? "" : (detail + "; ").c_str(), elapsed);
  report(7, "lattice counts against the closed form", ok && elapsed < 120.0, buf);
}

}  // namespace

int main() {
  criterion_monodromy();
  criterion_gauge_residue();
  criterion_dimension();
  criterion_symmetry();
  criterion_strata();
  criterion_plucker();
  criterion_verlinde();
  if (failures == 0)
    std::printf("acceptance: all 7 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
