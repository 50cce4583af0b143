#include "moduli/rep_variety.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace moduli::rep_variety {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSolvedResidual = 1e-10;
constexpr double kImplodeDistance = 1e-7;

// ---------------------------------------------------------------------------
// Relation words.  Factor layout: 0 = B1, 1 = B2, 2 + 2i = C_i, 3 + 2i = D_i.
// id == -1 refers to the constant A (inv selects A^{-1}).

struct Term {
  int id;
  bool inv;
};
using Word = std::vector<Term>;

void append_commutators(Word& w, int first_handle, int count) {
  for (int i = first_handle; i < first_handle + count; ++i) {
    const int c = 2 + 2 * i, d = 3 + 2 * i;
    w.push_back({c, false});
    w.push_back({d, false});
    w.push_back({c, true});
    w.push_back({d, true});
  }
}

std::vector<Word> relation_words(int handle_count, int split) {
  std::vector<Word> words;
  if (split < 0) {
    Word w;
    append_commutators(w, 0, handle_count);
    w.push_back({0, false});
    w.push_back({-1, false});
    w.push_back({0, true});
    w.push_back({1, false});
    w.push_back({-1, true});
    w.push_back({1, true});
    words.push_back(std::move(w));
  } else {
    Word w1;
    append_commutators(w1, 0, split);
    w1.push_back({0, false});
    w1.push_back({-1, false});
    w1.push_back({0, true});
    words.push_back(std::move(w1));
    Word w2;
    append_commutators(w2, split, handle_count - split);
    w2.push_back({1, false});
    w2.push_back({-1, true});
    w2.push_back({1, true});
    words.push_back(std::move(w2));
  }
  return words;
}

Matrix alpha_holonomy(const alcove::AlcovePoint& alpha) {
  const int n = alpha.n();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = std::polar(1.0, -kTwoPi * alpha[i]);
  return a;
}

std::vector<Matrix> point_factors(const RepPoint& p) {
  std::vector<Matrix> f;
  f.push_back(p.b1.matrix());
  f.push_back(p.b2.matrix());
  for (const auto& [c, d] : p.handles) {
    f.push_back(c.matrix());
    f.push_back(d.matrix());
  }
  return f;
}

struct WordEval {
  std::vector<Matrix> vals;
  std::vector<Matrix> prefix;  // prefix[i] = vals[0] ... vals[i-1]
  std::vector<Matrix> suffix;  // suffix[i] = vals[i] ... vals[end-1]
};

WordEval evaluate_word(const Word& w, const std::vector<Matrix>& factors, const Matrix& a,
                       const Matrix& ainv, int n) {
  WordEval ev;
  const int m = static_cast<int>(w.size());
  ev.vals.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto& t = w[i];
    if (t.id == -1)
      ev.vals[i] = t.inv ? ainv : a;
    else
      ev.vals[i] = t.inv ? Matrix(factors[t.id].adjoint()) : factors[t.id];
  }
  ev.prefix.assign(m + 1, Matrix::Identity(n, n));
  ev.suffix.assign(m + 1, Matrix::Identity(n, n));
  for (int i = 0; i < m; ++i) ev.prefix[i + 1] = ev.prefix[i] * ev.vals[i];
  for (int i = m - 1; i >= 0; --i) ev.suffix[i] = ev.vals[i] * ev.suffix[i + 1];
  return ev;
}

void flatten_into(const Matrix& m, RealVector& out, int offset) {
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out[offset + 2 * (i * n + j)] = m(i, j).real();
      out[offset + 2 * (i * n + j) + 1] = m(i, j).imag();
    }
}

// Real coordinates of a skew-Hermitian traceless matrix in the su_basis order.
RealVector su_coordinates(const Matrix& x) {
  const int n = static_cast<int>(x.rows());
  RealVector c(n * n - 1);
  int idx = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      c[idx++] = x(p, q).real();
      c[idx++] = x(p, q).imag();
    }
  double acc = 0.0;
  for (int p = 0; p + 1 < n; ++p) {
    acc += x(p, p).imag();
    c[idx++] = acc;
  }
  return c;
}

// ---------------------------------------------------------------------------
// The relation as a least-squares system over the product of unitary factors.

class RelationSystem {
 public:
  RelationSystem(const alcove::AlcovePoint& alpha, int handle_count, int split)
      : n_(alpha.n()),
        a_(alpha_holonomy(alpha)),
        ainv_(a_.adjoint()),
        words_(relation_words(handle_count, split)),
        nfactors_(2 + 2 * handle_count) {}

  int n() const { return n_; }
  int factor_count() const { return nfactors_; }
  int residual_size() const { return 2 * n_ * n_ * static_cast<int>(words_.size()); }

  RealVector residual(const std::vector<Matrix>& factors) const {
    RealVector r(residual_size());
    int offset = 0;
    for (const auto& w : words_) {
      auto ev = evaluate_word(w, factors, a_, ainv_, n_);
      flatten_into(ev.prefix.back() - Matrix::Identity(n_, n_), r, offset);
      offset += 2 * n_ * n_;
    }
    return r;
  }

  double fnorm(const std::vector<Matrix>& factors) const {
    return residual(factors).norm();
  }

  // Columns: the n-1 alpha directions first when requested, then the su(n)
  // basis for each factor (direction U -> U exp(eps E)).
  RealMatrix jacobian(const std::vector<Matrix>& factors, bool with_alpha) const {
    const auto basis = lie_core::su_basis(n_);
    const int per = static_cast<int>(basis.size());
    const int acols = with_alpha ? (n_ - 1) : 0;
    RealMatrix jac = RealMatrix::Zero(residual_size(), acols + nfactors_ * per);

    int offset = 0;
    for (const auto& w : words_) {
      auto ev = evaluate_word(w, factors, a_, ainv_, n_);
      const int m = static_cast<int>(w.size());
      RealVector colv(2 * n_ * n_);

      for (int col = 0; col < acols; ++col) {
        // Direction alpha -> alpha + eps (e_col - e_{col+1}); then
        // dA = -2 pi i diag(v) A and dA^{-1} = +2 pi i diag(v) A^{-1}.
        Matrix dw = Matrix::Zero(n_, n_);
        for (int i = 0; i < m; ++i) {
          if (w[i].id != -1) continue;
          Vector diag = Vector::Zero(n_);
          diag[col] = cplx(0.0, -kTwoPi);
          diag[col + 1] = cplx(0.0, kTwoPi);
          if (w[i].inv) diag = -diag;
          dw += ev.prefix[i] * Matrix(diag.asDiagonal() * ev.vals[i]) * ev.suffix[i + 1];
        }
        flatten_into(dw, colv, 0);
        jac.block(offset, col, 2 * n_ * n_, 1) = colv;
      }

      for (int k = 0; k < nfactors_; ++k) {
        for (int b = 0; b < per; ++b) {
          Matrix dw = Matrix::Zero(n_, n_);
          bool touched = false;
          for (int i = 0; i < m; ++i) {
            if (w[i].id != k) continue;
            touched = true;
            const Matrix dterm = w[i].inv ? Matrix(-basis[b] * ev.vals[i])
                                          : Matrix(ev.vals[i] * basis[b]);
            dw += ev.prefix[i] * dterm * ev.suffix[i + 1];
          }
          if (!touched) continue;
          flatten_into(dw, colv, 0);
          jac.block(offset, acols + k * per + b, 2 * n_ * n_, 1) = colv;
        }
      }
      offset += 2 * n_ * n_;
    }
    return jac;
  }

 private:
  int n_;
  Matrix a_, ainv_;
  std::vector<Word> words_;
  int nfactors_;
};

// ---------------------------------------------------------------------------
// Damped Gauss-Newton (the gradient J^T F pulled back to the product Lie
// algebra, with Levenberg damping as the backtracking control) over unitary
// factors with per-factor bases and retractions.

using Retraction = std::function<Matrix(const Matrix&, const Matrix&)>;

Matrix unitary_retract(const Matrix& u, const Matrix& x) {
  const int n = static_cast<int>(u.rows());
  return lie_core::project_special_unitary(u * (Matrix::Identity(n, n) + x));
}

struct LsqVariables {
  std::vector<Matrix> values;
  std::vector<std::vector<Matrix>> bases;
  std::vector<Retraction> retracts;

  void apply(const RealVector& delta) {
    int off = 0;
    for (size_t k = 0; k < values.size(); ++k) {
      const int nb = static_cast<int>(bases[k].size());
      if (nb == 0) continue;
      Matrix x = Matrix::Zero(values[k].rows(), values[k].cols());
      for (int b = 0; b < nb; ++b) x += delta[off + b] * bases[k][b];
      values[k] = retracts[k](values[k], x);
      off += nb;
    }
  }
};

struct LsqOutcome {
  double fnorm = 0.0;
  int iterations = 0;
};

LsqOutcome lsq_minimize(LsqVariables& vars,
                        const std::function<RealVector(const std::vector<Matrix>&)>& res,
                        const std::function<RealMatrix(const std::vector<Matrix>&)>& jac,
                        int max_iters, double target) {
  double lambda = 1e-4;
  RealVector r = res(vars.values);
  double f = r.norm();
  int it = 0;
  for (; it < max_iters && f > target; ++it) {
    const RealMatrix j = jac(vars.values);
    const RealMatrix jtj = j.transpose() * j;
    const RealVector grad = j.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 25; ++tries) {
      RealMatrix damped = jtj;
      damped.diagonal().array() += lambda;
      const RealVector delta = -damped.ldlt().solve(grad);
      LsqVariables trial = vars;
      trial.apply(delta);
      const RealVector rt = res(trial.values);
      if (rt.norm() < f) {
        vars = std::move(trial);
        r = rt;
        f = r.norm();
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 8.0;
    }
    if (!accepted) break;  // stalled at a nonzero local minimum
  }
  return {f, it};
}

std::vector<std::vector<int>> merged_groups_of(const alcove::AlcovePoint& alpha) {
  return lie_core::stabilizer_pattern(alpha).merged_groups();
}

// stab(A): block skew-Hermitian, traceless overall; spanned by the block su
// algebras plus the relative block traces.
std::vector<Matrix> stab_basis(int n, const std::vector<std::vector<int>>& groups) {
  std::vector<Matrix> basis;
  for (const auto& g : groups)
    for (auto& e : lie_core::su_basis_on_group(n, g)) basis.push_back(e);
  for (size_t j = 0; j + 1 < groups.size(); ++j) {
    Matrix h = Matrix::Zero(n, n);
    for (int i : groups[j]) h(i, i) = cplx(0.0, static_cast<double>(groups[j + 1].size()));
    for (int i : groups[j + 1]) h(i, i) = cplx(0.0, -static_cast<double>(groups[j].size()));
    basis.push_back(h);
  }
  return basis;
}

std::vector<Matrix> commutator_basis(int n, const std::vector<std::vector<int>>& groups) {
  std::vector<Matrix> basis;
  for (const auto& g : groups)
    for (auto& e : lie_core::su_basis_on_group(n, g)) basis.push_back(e);
  return basis;
}

Matrix block_project(const Matrix& m, const std::vector<std::vector<int>>& groups,
                     bool unit_block_det) {
  const int n = static_cast<int>(m.rows());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& g : groups) {
    const int s = static_cast<int>(g.size());
    Matrix sub(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) sub(i, j) = m(g[i], g[j]);
    Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix u = svd.matrixU() * svd.matrixV().adjoint();
    if (unit_block_det) u *= std::polar(1.0, -std::arg(u.determinant()) / s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) out(g[i], g[j]) = u(i, j);
  }
  if (!unit_block_det) {
    // Land in SU(n) with a global phase; it commutes with A, so stays in Stab.
    out *= std::polar(1.0, -std::arg(out.determinant()) /
                               static_cast<double>(n));
  }
  return out;
}

Retraction block_retract(const std::vector<std::vector<int>>& groups, bool unit_block_det) {
  return [groups, unit_block_det](const Matrix& u, const Matrix& x) {
    const int n = static_cast<int>(u.rows());
    return block_project(u * (Matrix::Identity(n, n) + x), groups, unit_block_det);
  };
}

Matrix diag_retract(const Matrix& u, const Matrix& x) {
  const int n = static_cast<int>(u.rows());
  Matrix out = Matrix::Zero(n, n);
  double arg_sum = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const cplx v = u(i, i) * (cplx(1.0, 0.0) + x(i, i));
    out(i, i) = v / std::abs(v);
    arg_sum += std::arg(out(i, i));
  }
  out(n - 1, n - 1) = std::polar(1.0, -arg_sum);
  return out;
}

RepPoint assemble_point(const alcove::AlcovePoint& alpha,
                        const std::vector<Matrix>& factors, cplx t, int split) {
  RepPoint p{alpha, GroupElement(factors[0]), GroupElement(factors[1]), {}, t, split};
  for (size_t i = 2; i + 1 < factors.size(); i += 2)
    p.handles.emplace_back(GroupElement(factors[i]), GroupElement(factors[i + 1]));
  return p;
}

int guarded_rank(const RealMatrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  if (smax <= 0.0) return 0;
  const double thr = rel_tol * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > thr * 10.0)
      ++rank;
    else if (sv[i] > thr / 10.0)
      throw RankAmbiguous("numerical rank: singular value within a factor 10 of threshold");
  }
  return rank;
}

}  // namespace

Matrix RepPoint::holonomy_matrix() const { return alpha_holonomy(alpha); }

double relation_residual(const RepPoint& p) {
  RelationSystem sys(p.alpha, static_cast<int>(p.handles.size()), p.split);
  return sys.fnorm(point_factors(p));
}

RepPoint random_rep_point(std::mt19937_64& rng, int g, int n,
                          const alcove::AlcovePoint& alpha, cplx t, int split) {
  if (alpha.n() != n) throw invariant_error("random_rep_point: rank mismatch");
  const int hc = (split < 0) ? g - 1 : g;
  RepPoint p{alpha, lie_core::random_group_element(rng, n),
             lie_core::random_group_element(rng, n), {}, t, split};
  for (int i = 0; i < hc; ++i)
    p.handles.emplace_back(lie_core::random_group_element(rng, n),
                           lie_core::random_group_element(rng, n));
  return p;
}

namespace {

RepPoint solve_words(std::uint64_t seed, int g, int n, const alcove::AlcovePoint& alpha,
                     cplx t, int split, int max_starts) {
  const int hc = (split < 0) ? g - 1 : g;
  RelationSystem sys(alpha, hc, split);
  std::mt19937_64 rng(seed);

  for (int start = 0; start < max_starts; ++start) {
    LsqVariables vars;
    for (int k = 0; k < sys.factor_count(); ++k) {
      vars.values.push_back(lie_core::random_group_element(rng, n).matrix());
      vars.bases.push_back(lie_core::su_basis(n));
      vars.retracts.push_back(unitary_retract);
    }
    auto out = lsq_minimize(
        vars, [&](const std::vector<Matrix>& v) { return sys.residual(v); },
        [&](const std::vector<Matrix>& v) { return sys.jacobian(v, false); }, 400, 1e-12);
    if (out.fnorm <= kSolvedResidual) return assemble_point(alpha, vars.values, t, split);
  }
  throw NoConvergence("solve_relation: no solution within the retry budget");
}

}  // namespace

RepPoint solve_relation(std::uint64_t seed, int g, int n, const alcove::AlcovePoint& alpha,
                        cplx t, int max_starts) {
  if (g < 2) throw invariant_error("solve_relation: genus must be >= 2");
  return solve_words(seed, g, n, alpha, t, -1, max_starts);
}

RepPoint build_disconnected(std::uint64_t seed, int h, int g, int n,
                            const alcove::AlcovePoint& alpha, int max_starts) {
  if (h < 1 || h > g - 1) throw invariant_error("build_disconnected: need 1 <= h <= g-1");
  return solve_words(seed, g, n, alpha, 0.0, h, max_starts);
}

int SymmetryDescriptor::group_dimension() const {
  const int conj = (disconnected ? 2 : 1) * (n * n - 1);
  if (!t_is_zero) return conj + lie_core::stabilizer_dim(pattern);
  return conj + (n - 1) + 2 * lie_core::commutator_subgroup_dim(pattern);
}

SymmetryDescriptor symmetry_descriptor(const RepPoint& p) {
  return SymmetryDescriptor{std::abs(p.t) == 0.0, p.disconnected(),
                            lie_core::stabilizer_pattern(p.alpha), p.n()};
}

int tangent_dimension(const RepPoint& p, double rank_rel_tol) {
  if (relation_residual(p) > tol::kEquality)
    throw invariant_error("tangent_dimension: point is not solved");
  const int n = p.n();
  const auto pattern = lie_core::stabilizer_pattern(p.alpha);
  for (const auto& grp : pattern.merged_groups())
    if (grp.size() != 1)
      throw RankAmbiguous(
          "tangent_dimension: alpha on a degenerate stratum; the parameter count "
          "holds for generic holonomy only");

  const int hc = static_cast<int>(p.handles.size());
  RelationSystem sys(p.alpha, hc, p.split);
  const auto factors = point_factors(p);
  const RealMatrix jac = sys.jacobian(factors, true);
  const int total_dim = static_cast<int>(jac.cols());
  const int rank_j = guarded_rank(jac, rank_rel_tol);

  // Orbit directions of the symmetry group in the same coordinates (the
  // alpha-slot stays zero: the actions fix A).
  const auto groups = pattern.merged_groups();
  const int per = n * n - 1;
  const int acols = n - 1;
  const int nf = sys.factor_count();
  std::vector<RealVector> columns;

  auto push_column = [&](const std::vector<Matrix>& xs) {
    RealVector col = RealVector::Zero(total_dim);
    for (int k = 0; k < static_cast<int>(xs.size()); ++k) {
      if (xs[k].size() == 0) continue;
      col.segment(acols + k * per, per) = su_coordinates(xs[k]);
    }
    columns.push_back(col);
  };

  auto conj_coords = [&](const Matrix& y, bool first_component) {
    std::vector<Matrix> xs(nf);
    auto affects_handle = [&](int i) {
      if (!p.disconnected()) return true;
      return first_component ? (i < p.split) : (i >= p.split);
    };
    if (!p.disconnected() || first_component)
      xs[0] = factors[0].adjoint() * y * factors[0];
    if (!p.disconnected() || !first_component)
      xs[1] = factors[1].adjoint() * y * factors[1];
    for (int i = 0; i < hc; ++i) {
      if (!affects_handle(i)) continue;
      for (int slot : {2 + 2 * i, 3 + 2 * i})
        xs[slot] = factors[slot].adjoint() * y * factors[slot] - y;
    }
    return xs;
  };

  for (const auto& y : lie_core::su_basis(n)) {
    push_column(conj_coords(y, true));
    if (p.disconnected()) push_column(conj_coords(y, false));
  }

  const bool t_zero = std::abs(p.t) == 0.0;
  if (!t_zero) {
    for (const auto& z : stab_basis(n, groups)) {
      std::vector<Matrix> xs(nf);
      xs[0] = z;
      xs[1] = z;
      push_column(xs);
    }
  } else {
    for (const auto& hmat : lie_core::torus_basis(n)) {
      std::vector<Matrix> xs(nf);
      xs[0] = hmat;
      xs[1] = hmat;
      push_column(xs);
    }
    for (const auto& w : commutator_basis(n, groups)) {
      std::vector<Matrix> x1(nf), x2(nf);
      x1[0] = w;
      x2[1] = w;
      push_column(x1);
      push_column(x2);
    }
  }

  RealMatrix orbit = RealMatrix::Zero(total_dim, static_cast<int>(columns.size()));
  for (int c = 0; c < orbit.cols(); ++c) orbit.col(c) = columns[c];
  const int rank_orbit = guarded_rank(orbit, rank_rel_tol);

  return (total_dim - rank_j) - rank_orbit;
}

bool in_stabilizer(const Matrix& m, const alcove::MultiplicityPattern& pattern, double eps) {
  const int n = pattern.n();
  std::vector<int> group_of(n, -1);
  const auto groups = pattern.merged_groups();
  for (int gidx = 0; gidx < static_cast<int>(groups.size()); ++gidx)
    for (int i : groups[gidx]) group_of[i] = gidx;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (group_of[i] != group_of[j] && std::abs(m(i, j)) > eps) return false;
  return true;
}

bool in_commutator_subgroup(const Matrix& m, const alcove::MultiplicityPattern& pattern,
                            double eps) {
  if (!in_stabilizer(m, pattern, eps)) return false;
  for (const auto& g : pattern.merged_groups()) {
    const int s = static_cast<int>(g.size());
    Matrix sub(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) sub(i, j) = m(g[i], g[j]);
    if (std::abs(sub.determinant() - cplx(1.0, 0.0)) > eps) return false;
  }
  return true;
}

RepPoint gauge_act(const RepPoint& p, const GroupElement& g, const GroupElement& mu,
                   const GroupElement& nu, const TorusElement& tau) {
  const auto pattern = lie_core::stabilizer_pattern(p.alpha);
  const GroupElement taug = tau.as_group_element();
  if (std::abs(p.t) > 0.0) {
    if ((mu.matrix() - nu.matrix()).cwiseAbs().maxCoeff() > tol::kEquality ||
        !in_stabilizer(taug.matrix() * mu.matrix(), pattern))
      throw IllegalSymmetry("gauge_act: at t != 0 need mu = nu with tau mu in Stab(A)");
  } else {
    if (!in_commutator_subgroup(mu.matrix(), pattern) ||
        !in_commutator_subgroup(nu.matrix(), pattern))
      throw IllegalSymmetry("gauge_act: at t = 0 need mu, nu in [Stab(A), Stab(A)]");
  }

  RepPoint out = p;
  out.b1 = g * p.b1 * taug * mu;
  out.b2 = g * p.b2 * taug * nu;
  for (auto& [c, d] : out.handles) {
    c = c.conjugated_by(g);
    d = d.conjugated_by(g);
  }
  return out;
}

std::pair<alcove::AlcovePoint, alcove::AlcovePoint> moment_map(const RepPoint& p) {
  return {p.alpha, alcove::reversal(p.alpha)};
}

RepPoint torus_act(const RepPoint& p, const TorusElement& t1, const TorusElement& t2) {
  RepPoint out = p;
  out.b1 = p.b1 * t1.as_group_element();
  out.b2 = p.b2 * t2.as_group_element();
  return out;
}

RepPoint antidiagonal_reduce(const RepPoint& p) {
  const int n = p.n();
  const Matrix& b1 = p.b1.matrix();
  const Matrix& b2 = p.b2.matrix();
  RealVector phi = RealVector::Zero(n);
  double acc = 0.0;
  for (int j = 0; j + 1 < n; ++j) {
    // Pivot: first usable row of column j of B1, falling through to B2
    // (which carries tau^{-1}) when the whole column is below threshold.
    int row = -1;
    for (int r = 0; r < n; ++r)
      if (std::abs(b1(r, j)) > 1e-9) {
        row = r;
        break;
      }
    if (row >= 0) {
      phi[j] = -std::arg(b1(row, j));
    } else {
      for (int r = 0; r < n; ++r)
        if (std::abs(b2(r, j)) > 1e-9) {
          row = r;
          break;
        }
      phi[j] = (row >= 0) ? std::arg(b2(row, j)) : 0.0;
    }
    acc += phi[j];
  }
  phi[n - 1] = -acc;
  Vector tau(n);
  for (int j = 0; j < n; ++j) tau[j] = std::polar(1.0, phi[j]);
  TorusElement te(tau);
  return torus_act(p, te, te.inverse());
}

ImplodeResult implode_equivalent(const RepPoint& p, const RepPoint& q, int budget) {
  if (p.disconnected() || q.disconnected())
    throw invariant_error("implode_equivalent: connected presentations only");
  if (p.handles.size() != q.handles.size() || p.n() != q.n())
    throw invariant_error("implode_equivalent: mismatched points");
  if (!p.alpha.almost_equal(q.alpha))
    throw invariant_error("implode_equivalent: alcove data differ");
  // Solvedness is the caller's obligation; the orbit search itself is total,
  // and a tuple off the relation manifold simply has no witness.

  const int n = p.n();
  const int hc = static_cast<int>(p.handles.size());
  const auto groups = merged_groups_of(p.alpha);
  const bool t_zero = std::abs(p.t) == 0.0;

  const auto pf = point_factors(p);
  const auto qf = point_factors(q);
  const int nrows = 2 * n * n * (2 + 2 * hc);

  // State: [g, z] at t != 0 (right factors r1 = r2 = z in Stab(A)), or
  // [g, tau, mu', nu'] at t = 0 (r1 = tau mu', r2 = tau nu').
  auto right_factors = [&](const std::vector<Matrix>& v) -> std::pair<Matrix, Matrix> {
    if (t_zero) return {v[1] * v[2], v[1] * v[3]};
    return {v[1], v[1]};
  };

  auto build_residual = [&](const std::vector<Matrix>& v) {
    const Matrix& g = v[0];
    const auto [r1, r2] = right_factors(v);
    RealVector out(nrows);
    int off = 0;
    auto put = [&](const Matrix& m) {
      flatten_into(m, out, off);
      off += 2 * n * n;
    };
    put(g * pf[0] * r1 - qf[0]);
    put(g * pf[1] * r2 - qf[1]);
    for (int i = 2; i < 2 + 2 * hc; ++i) put(g * pf[i] * g.adjoint() - qf[i]);
    return out;
  };

  auto build_jacobian = [&](const std::vector<Matrix>& v) {
    const Matrix& g = v[0];
    const auto [r1, r2] = right_factors(v);
    const auto gbasis = lie_core::su_basis(n);
    const auto tbasis = lie_core::torus_basis(n);
    const auto cbasis = commutator_basis(n, groups);
    const auto zbasis = stab_basis(n, groups);
    const int cols = static_cast<int>(gbasis.size()) +
                     (t_zero ? static_cast<int>(tbasis.size()) + 2 * static_cast<int>(cbasis.size())
                             : static_cast<int>(zbasis.size()));
    RealMatrix jac = RealMatrix::Zero(nrows, cols);
    RealVector fl(2 * n * n);

    auto put_block = [&](int col, int block, const Matrix& m) {
      flatten_into(m, fl, 0);
      jac.block(2 * n * n * block, col, 2 * n * n, 1) = fl;
    };

    int col = 0;
    for (const auto& y : gbasis) {
      // Direction g -> g exp(eps Y), matching the polar retraction.
      const Matrix gy = g * y;
      put_block(col, 0, gy * pf[0] * r1);
      put_block(col, 1, gy * pf[1] * r2);
      for (int i = 2; i < 2 + 2 * hc; ++i)
        put_block(col, i, g * (y * pf[i] - pf[i] * y) * g.adjoint());
      ++col;
    }
    if (t_zero) {
      for (const auto& h : tbasis) {
        put_block(col, 0, g * pf[0] * v[1] * h * v[2]);
        put_block(col, 1, g * pf[1] * v[1] * h * v[3]);
        ++col;
      }
      for (const auto& w : cbasis) {
        put_block(col, 0, g * pf[0] * v[1] * v[2] * w);
        ++col;
      }
      for (const auto& w : cbasis) {
        put_block(col, 1, g * pf[1] * v[1] * v[3] * w);
        ++col;
      }
    } else {
      for (const auto& z : zbasis) {
        put_block(col, 0, g * pf[0] * v[1] * z);
        put_block(col, 1, g * pf[1] * v[1] * z);
        ++col;
      }
    }
    return jac;
  };

  // Informed start: align the conjugated handles by linear least squares over
  // g (smallest singular vector of vec(g) -> vec(g C - C' g)), then project.
  Matrix g0 = Matrix::Identity(n, n);
  if (hc > 0) {
    RealMatrix op = RealMatrix::Zero(2 * hc * 2 * n * n, 2 * n * n);
    int rowoff = 0;
    for (int i = 2; i < 2 + 2 * hc; ++i) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int part = 0; part < 2; ++part) {
            Matrix gdir = Matrix::Zero(n, n);
            gdir(a, b) = (part == 0) ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
            const Matrix img = gdir * pf[i] - qf[i] * gdir;
            for (int r = 0; r < n; ++r)
              for (int c2 = 0; c2 < n; ++c2) {
                op(rowoff + 2 * (r * n + c2), 2 * (a * n + b) + part) = img(r, c2).real();
                op(rowoff + 2 * (r * n + c2) + 1, 2 * (a * n + b) + part) =
                    img(r, c2).imag();
              }
          }
      rowoff += 2 * n * n;
    }
    Eigen::JacobiSVD<RealMatrix> svd(op, Eigen::ComputeThinV);
    const RealVector v = svd.matrixV().col(svd.matrixV().cols() - 1);
    Matrix gmat(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        gmat(a, b) = cplx(v[2 * (a * n + b)], v[2 * (a * n + b) + 1]);
    g0 = lie_core::project_special_unitary(gmat);
  }

  std::mt19937_64 rng(0xC0FFEEull + static_cast<std::uint64_t>(budget));
  ImplodeResult result;
  result.distance = std::numeric_limits<double>::infinity();

  for (int start = 0; start < budget; ++start) {
    LsqVariables vars;
    if (start == 0)
      vars.values.push_back(g0);
    else if (start == 1)
      vars.values.push_back(Matrix::Identity(n, n));
    else
      vars.values.push_back(lie_core::random_group_element(rng, n).matrix());
    vars.bases.push_back(lie_core::su_basis(n));
    vars.retracts.push_back(unitary_retract);

    if (t_zero) {
      Matrix tau0 = Matrix::Identity(n, n);
      if (start >= 2)
        tau0 = lie_core::random_torus_element(rng, n).as_group_element().matrix();
      vars.values.push_back(tau0);
      vars.bases.push_back(lie_core::torus_basis(n));
      vars.retracts.push_back(diag_retract);
      for (int side = 0; side < 2; ++side) {
        vars.values.push_back(Matrix::Identity(n, n));
        vars.bases.push_back(commutator_basis(n, groups));
        vars.retracts.push_back(block_retract(groups, true));
      }
    } else {
      vars.values.push_back(Matrix::Identity(n, n));
      vars.bases.push_back(stab_basis(n, groups));
      vars.retracts.push_back(block_retract(groups, false));
    }

    auto out = lsq_minimize(vars, build_residual, build_jacobian, 200,
                            kImplodeDistance / 10.0);
    result.starts_used = start + 1;
    result.distance = std::min(result.distance, out.fnorm);
    if (out.fnorm <= kImplodeDistance) {
      result.equivalent = true;
      result.confidence = "certified";
      return result;
    }
  }
  result.equivalent = false;
  result.confidence = "search-exhausted";
  return result;
}

}  // namespace moduli::rep_variety

