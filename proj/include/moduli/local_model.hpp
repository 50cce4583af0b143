#pragma once

#include <functional>
#include <vector>

#include "moduli/alcove.hpp"
#include "moduli/lie_core.hpp"
#include "moduli/types.hpp"

namespace moduli::local_model {

/// A point of the quadric x y = t inside the polydisk |x| < 2, |y| < 2; t is
/// carried per point, so paths may move through the family.
struct QuadricPoint {
  cplx x;
  cplx y;
  cplx t;
  QuadricPoint(cplx x_, cplx y_);
  QuadricPoint(cplx x_, cplx y_, cplx t_);
};

/// Smooth path s in [0,1] -> (x(s), y(s)), with analytic velocity.  The three
/// standard loops are provided as factories; paths compose and reverse.
class PathOnQuadric {
 public:
  struct Coords {
    cplx x, y;
  };
  using PointFn = std::function<Coords(double)>;

  PathOnQuadric(PointFn position, PointFn velocity);

  Coords at(double s) const;
  Coords velocity(double s) const;
  int segment_count() const { return static_cast<int>(segments_.size()); }

  /// The vanishing cycle at radius r: x = r e^{2 pi i s}, y = (t/r) e^{-2 pi i s}.
  static PathOnQuadric gamma_loop(cplx t, double r);
  /// Loop around the divisor x = 0 at radius r with y frozen (t varies).
  static PathOnQuadric x_axis_loop(double r, cplx y0);
  /// Loop around y = 0 at radius r with x frozen.
  static PathOnQuadric y_axis_loop(cplx x0, double r);

  PathOnQuadric reversed() const;
  PathOnQuadric then(const PathOnQuadric& second) const;

  /// Sampled points; each sample is validated against the QuadricPoint
  /// invariants (endpoint continuity comes with the closed parametrization).
  std::vector<QuadricPoint> samples(int count) const;

  struct Segment {
    PointFn pos;
    PointFn vel;
  };
  /// Smooth pieces; the integrator restarts at each junction.
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  explicit PathOnQuadric(std::vector<Segment> segments);
  std::vector<Segment> segments_;
};

enum class Gauge { unitary, holomorphic, blowup_patch_1, blowup_patch_2 };

/// The model connection d + i (alpha/2)(dtheta_x - dtheta_y) and its
/// holomorphic / blow-up expressions.  A nontrivial frame V replaces diag(alpha)
/// by its conjugate V diag V^{-1}, used as an integrator robustness check.
struct ModelConnection {
  alcove::AlcovePoint alpha;
  Gauge gauge = Gauge::unitary;
  Matrix frame;  // unitary; identity if empty

  ModelConnection(alcove::AlcovePoint a, Gauge g);
  ModelConnection(alcove::AlcovePoint a, Gauge g, const lie_core::GroupElement& f);

  int n() const { return alpha.n(); }
  bool framed() const { return frame.size() != 0; }
};

/// Path-ordered solution of dv = -omega v along the path: classical 4th order
/// stepping, with a polar projection per step in the unitary gauge.  Throws
/// PathTooCloseToSingularity when the path comes within 1e-6 of a pole of the
/// chosen gauge.
Matrix transport(const ModelConnection& conn, const PathOnQuadric& path, int steps = 4096);

/// Unitary-gauge transport packaged with the group invariants certified.
lie_core::GroupElement transport_unitary(const ModelConnection& conn,
                                         const PathOnQuadric& path, int steps = 4096);

/// Central finite-difference verification that the gauge change
/// G = r_x^{-alpha/2} r_y^{alpha/2} maps the unitary form to the holomorphic
/// one; returns the maximum pointwise discrepancy over a grid_n x grid_n grid.
double gauge_transform_check(const alcove::AlcovePoint& alpha, int grid_n = 50,
                             double fd_step = 1e-4);

/// Divisors around which residues are extracted.
enum class Divisor {
  proper_y,       // blow-up patch 1, loop in the ytilde coordinate
  proper_x,       // blow-up patch 2, loop in the xhat coordinate
  x_axis_limit,   // holomorphic gauge on the t = 0 branch y = 0
  y_axis_limit,   // holomorphic gauge on the t = 0 branch x = 0
};

/// (1/2 pi i) of the connection form around a small loop; -alpha/2 in blow-up
/// patch 1, +alpha/2 in patch 2, and +-alpha/2 on the limit branches.  Throws
/// LoopEnclosesBothDivisors if t != 0 is passed for an axis-limit residue,
/// since on Q_t a loop around one axis always winds the other.
Matrix residue(const ModelConnection& conn, Divisor center, double radius, cplx t = 0.0);

struct PartialLimit {
  Vector coefficient;   // per unit dtheta on the branch
  double t_deviation;   // max |coefficient(t) - limit| over sampled t
  Matrix holonomy;      // quadrature holonomy around the origin on the branch
};

enum class Branch { x, y };

/// The partial connection on a branch: i alpha dtheta_x on x != 0 and
/// -i alpha dtheta_y on y != 0, t-independent and finite in the limit t -> 0.
PartialLimit partial_connection_limit(const alcove::AlcovePoint& alpha, Branch branch,
                                      double r);

}  // namespace moduli::local_model
