#include "moduli/local_model.hpp"

#include <cmath>
#include <numbers>

namespace moduli::local_model {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleGuard = 1e-6;
}  // namespace

QuadricPoint::QuadricPoint(cplx x_, cplx y_) : QuadricPoint(x_, y_, x_ * y_) {}

QuadricPoint::QuadricPoint(cplx x_, cplx y_, cplx t_) : x(x_), y(y_), t(t_) {
  if (std::abs(x * y - t) > tol::kPhase)
    throw invariant_error("QuadricPoint: x y != t");
  if (std::abs(x) >= 2.0 || std::abs(y) >= 2.0)
    throw invariant_error("QuadricPoint: outside the polydisk");
}

PathOnQuadric::PathOnQuadric(PointFn position, PointFn velocity)
    : segments_{Segment{std::move(position), std::move(velocity)}} {}

PathOnQuadric::PathOnQuadric(std::vector<Segment> segments)
    : segments_(std::move(segments)) {}

PathOnQuadric::Coords PathOnQuadric::at(double s) const {
  const int m = segment_count();
  const double u = std::clamp(s, 0.0, 1.0) * m;
  const int idx = std::min(static_cast<int>(u), m - 1);
  return segments_[idx].pos(u - idx);
}

PathOnQuadric::Coords PathOnQuadric::velocity(double s) const {
  const int m = segment_count();
  const double u = std::clamp(s, 0.0, 1.0) * m;
  const int idx = std::min(static_cast<int>(u), m - 1);
  auto v = segments_[idx].vel(u - idx);
  return {static_cast<double>(m) * v.x, static_cast<double>(m) * v.y};
}

PathOnQuadric PathOnQuadric::gamma_loop(cplx t, double r) {
  if (r <= 0.0) throw invariant_error("gamma_loop: radius must be positive");
  return PathOnQuadric(
      [t, r](double s) -> Coords {
        const cplx e = std::polar(1.0, kTwoPi * s);
        return {r * e, t / r / e};
      },
      [t, r](double s) -> Coords {
        const cplx e = std::polar(1.0, kTwoPi * s);
        const cplx i2pi(0.0, kTwoPi);
        return {i2pi * r * e, -i2pi * t / r / e};
      });
}

PathOnQuadric PathOnQuadric::x_axis_loop(double r, cplx y0) {
  return PathOnQuadric(
      [r, y0](double s) -> Coords { return {r * std::polar(1.0, kTwoPi * s), y0}; },
      [r](double s) -> Coords {
        return {cplx(0.0, kTwoPi) * r * std::polar(1.0, kTwoPi * s), 0.0};
      });
}

PathOnQuadric PathOnQuadric::y_axis_loop(cplx x0, double r) {
  return PathOnQuadric(
      [x0, r](double s) -> Coords { return {x0, r * std::polar(1.0, kTwoPi * s)}; },
      [r](double s) -> Coords {
        return {0.0, cplx(0.0, kTwoPi) * r * std::polar(1.0, kTwoPi * s)};
      });
}

PathOnQuadric PathOnQuadric::reversed() const {
  std::vector<Segment> segs;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    auto pos = it->pos;
    auto vel = it->vel;
    segs.push_back(Segment{[pos](double s) { return pos(1.0 - s); },
                           [vel](double s) {
                             auto v = vel(1.0 - s);
                             return Coords{-v.x, -v.y};
                           }});
  }
  return PathOnQuadric(std::move(segs));
}

PathOnQuadric PathOnQuadric::then(const PathOnQuadric& second) const {
  std::vector<Segment> segs = segments_;
  segs.insert(segs.end(), second.segments_.begin(), second.segments_.end());
  return PathOnQuadric(std::move(segs));
}

std::vector<QuadricPoint> PathOnQuadric::samples(int count) const {
  std::vector<QuadricPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    auto c = at(static_cast<double>(i) / (count - 1));
    out.emplace_back(c.x, c.y);
  }
  return out;
}

ModelConnection::ModelConnection(alcove::AlcovePoint a, Gauge g)
    : alpha(std::move(a)), gauge(g), frame() {}

ModelConnection::ModelConnection(alcove::AlcovePoint a, Gauge g,
                                 const lie_core::GroupElement& f)
    : alpha(std::move(a)), gauge(g), frame(f.matrix()) {
  if (static_cast<int>(frame.rows()) != alpha.n())
    throw invariant_error("ModelConnection: frame rank mismatch");
}

namespace {

// Diagonal coefficient of -omega evaluated on the path velocity.
Vector minus_omega_diag(const ModelConnection& conn, const PathOnQuadric::Coords& p,
                        const PathOnQuadric::Coords& v) {
  const int n = conn.n();
  cplx factor;
  if (conn.gauge == Gauge::unitary) {
    const double dthx = (v.x != cplx(0.0)) ? std::imag(v.x / p.x) : 0.0;
    const double dthy = (v.y != cplx(0.0)) ? std::imag(v.y / p.y) : 0.0;
    factor = cplx(0.0, 0.5 * (dthx - dthy));
  } else {
    // The three holomorphic chart expressions are the same form away from the
    // axes: (alpha/2)(dx/x - dy/y).
    const cplx dx = (v.x != cplx(0.0)) ? v.x / p.x : cplx(0.0);
    const cplx dy = (v.y != cplx(0.0)) ? v.y / p.y : cplx(0.0);
    factor = 0.5 * (dx - dy);
  }
  Vector c(n);
  for (int i = 0; i < n; ++i) c[i] = -factor * conn.alpha[i];
  return c;
}

Matrix frame_conjugate(const ModelConnection& conn, const Vector& diag) {
  if (!conn.framed()) return Matrix(diag.asDiagonal());
  return conn.frame * diag.asDiagonal() * conn.frame.adjoint();
}

// One Newton-Schulz sweep; holds unitarity drift below 1e-12 per step.
void reunitarize(Matrix& y) {
  const int n = static_cast<int>(y.rows());
  y = 0.5 * y * (3.0 * Matrix::Identity(n, n) - y.adjoint() * y);
}

void check_pole_distance(const ModelConnection& conn, const PathOnQuadric& path,
                         int probes) {
  double min_x = 2.0, min_y = 2.0, min_yt = 1e9, min_xh = 1e9;
  for (int i = 0; i <= probes; ++i) {
    auto c = path.at(static_cast<double>(i) / probes);
    const double ax = std::abs(c.x), ay = std::abs(c.y);
    min_x = std::min(min_x, ax);
    min_y = std::min(min_y, ay);
    if (ax > 0.0) min_yt = std::min(min_yt, ay / ax);
    if (ay > 0.0) min_xh = std::min(min_xh, ax / ay);
  }
  switch (conn.gauge) {
    case Gauge::unitary:
    case Gauge::holomorphic:
      if (min_x < kPoleGuard || min_y < kPoleGuard)
        throw PathTooCloseToSingularity("transport: path within 1e-6 of an axis");
      break;
    case Gauge::blowup_patch_1:
      if (min_yt < kPoleGuard || min_x < kPoleGuard)
        throw PathTooCloseToSingularity("transport: path within 1e-6 of ytilde = 0");
      break;
    case Gauge::blowup_patch_2:
      if (min_xh < kPoleGuard || min_y < kPoleGuard)
        throw PathTooCloseToSingularity("transport: path within 1e-6 of xhat = 0");
      break;
  }
}

}  // namespace

Matrix transport(const ModelConnection& conn, const PathOnQuadric& path, int steps) {
  const int n = conn.n();
  check_pole_distance(conn, path, std::min(steps * path.segment_count(), 4096));

  Matrix y = Matrix::Identity(n, n);
  const double h = 1.0 / steps;
  for (const auto& seg : path.segments()) {
    auto coeff = [&](double s) -> Matrix {
      return frame_conjugate(conn, minus_omega_diag(conn, seg.pos(s), seg.vel(s)));
    };
    for (int i = 0; i < steps; ++i) {
      const double s = i * h;
      const Matrix a1 = coeff(s);
      const Matrix a2 = coeff(s + 0.5 * h);
      const Matrix a4 = coeff(s + h);
      const Matrix k1 = a1 * y;
      const Matrix k2 = a2 * (y + 0.5 * h * k1);
      const Matrix k3 = a2 * (y + 0.5 * h * k2);
      const Matrix k4 = a4 * (y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (conn.gauge == Gauge::unitary) reunitarize(y);
    }
  }
  return y;
}

lie_core::GroupElement transport_unitary(const ModelConnection& conn,
                                         const PathOnQuadric& path, int steps) {
  if (conn.gauge != Gauge::unitary)
    throw invariant_error("transport_unitary: connection not in the unitary gauge");
  Matrix y = transport(conn, path, steps);
  return lie_core::GroupElement(lie_core::project_special_unitary(y));
}

namespace {

// G = r_x^{-alpha/2} r_y^{alpha/2} as a positive diagonal.
RealVector gauge_factor(const alcove::AlcovePoint& alpha, double rx, double ry) {
  const int n = alpha.n();
  RealVector g(n);
  for (int i = 0; i < n; ++i)
    g[i] = std::pow(rx, -0.5 * alpha[i]) * std::pow(ry, 0.5 * alpha[i]);
  return g;
}

}  // namespace

double gauge_transform_check(const alcove::AlcovePoint& alpha, int grid_n, double fd_step) {
  const int n = alpha.n();
  const double h = fd_step;
  double worst = 0.0;

  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double rx = 0.25 + 1.5 * i / (grid_n - 1);
      const double ry = 1.75 - 1.5 * j / (grid_n - 1);
      const cplx x = std::polar(rx, kTwoPi * i / grid_n + 0.3);
      const cplx y = std::polar(ry, -kTwoPi * j / grid_n + 0.7);

      // Four real coordinate directions (Re x, Im x, Re y, Im y).
      const cplx dirs[4][2] = {
          {1.0, 0.0}, {cplx(0, 1), 0.0}, {0.0, 1.0}, {0.0, cplx(0, 1)}};
      for (const auto& d : dirs) {
        const cplx vx = d[0], vy = d[1];
        const double dthx = (vx != cplx(0.0)) ? std::imag(vx / x) : 0.0;
        const double dthy = (vy != cplx(0.0)) ? std::imag(vy / y) : 0.0;
        const cplx unit_factor = cplx(0.0, 0.5) * (dthx - dthy);
        const cplx hol_factor = 0.5 * ((vx != cplx(0.0) ? vx / x : cplx(0.0)) -
                                       (vy != cplx(0.0) ? vy / y : cplx(0.0)));

        const cplx xp = x + h * vx, xm = x - h * vx;
        const cplx yp = y + h * vy, ym = y - h * vy;
        const RealVector gp = gauge_factor(alpha, std::abs(xp), std::abs(yp));
        const RealVector gm = gauge_factor(alpha, std::abs(xm), std::abs(ym));
        const RealVector g0 = gauge_factor(alpha, std::abs(x), std::abs(y));

        for (int a = 0; a < n; ++a) {
          const double dg = (gp[a] - gm[a]) / (2.0 * h);
          // Diagonal G commutes with the diagonal form, so the transformed
          // coefficient is unit_factor * alpha_a - (dG) G^{-1}.
          const cplx transformed = unit_factor * alpha[a] - cplx(dg / g0[a], 0.0);
          const cplx target = hol_factor * alpha[a];
          worst = std::max(worst, std::abs(transformed - target));
        }
      }
    }
  }
  return worst;
}

Matrix residue(const ModelConnection& conn, Divisor center, double radius, cplx t) {
  const int n = conn.n();
  if (radius <= 0.0 || radius >= 2.0)
    throw invariant_error("residue: radius must lie in (0, 2)");

  const bool axis_limit =
      (center == Divisor::x_axis_limit || center == Divisor::y_axis_limit);
  if (axis_limit && std::abs(t) > 0.0)
    throw LoopEnclosesBothDivisors(
        "residue: on the quadric with t != 0 a loop around one axis winds the other "
        "divisor as well");
  switch (center) {
    case Divisor::proper_y:
      if (conn.gauge != Gauge::blowup_patch_1)
        throw invariant_error("residue: proper_y needs blow-up patch 1");
      break;
    case Divisor::proper_x:
      if (conn.gauge != Gauge::blowup_patch_2)
        throw invariant_error("residue: proper_x needs blow-up patch 2");
      break;
    default:
      if (conn.gauge != Gauge::holomorphic)
        throw invariant_error(
            "residue: axis-limit residues are taken in the holomorphic gauge");
  }

  // Coefficient sign of the form (s alpha)/z dz in the chart coordinate.
  double sign = 0.0;
  switch (center) {
    case Divisor::proper_y:
      sign = -0.5;  // d - (alpha/2) dytilde/ytilde
      break;
    case Divisor::proper_x:
    case Divisor::x_axis_limit:
      sign = 0.5;  // d + (alpha/2) dxhat/xhat, and (alpha/2) dx/x on the branch
      break;
    case Divisor::y_axis_limit:
      sign = -0.5;
      break;
  }

  const int m = 1024;
  Vector acc = Vector::Zero(n);
  for (int k = 0; k < m; ++k) {
    const double th = kTwoPi * k / m;
    const cplx z = std::polar(radius, th);
    const cplx dz = cplx(0.0, kTwoPi / m) * z;
    for (int a = 0; a < n; ++a) acc[a] += (sign * conn.alpha[a] / z) * dz;
  }
  acc /= cplx(0.0, kTwoPi);
  return frame_conjugate(conn, acc);
}

PartialLimit partial_connection_limit(const alcove::AlcovePoint& alpha, Branch branch,
                                      double r) {
  if (r <= 0.0 || r >= 2.0)
    throw invariant_error("partial_connection_limit: r must lie in (0, 2)");
  const int n = alpha.n();

  PartialLimit out;
  out.coefficient.resize(n);
  const cplx unit = (branch == Branch::x) ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
  for (int i = 0; i < n; ++i) out.coefficient[i] = unit * alpha[i];

  // The per-dtheta coefficient of the full connection pulled back along the
  // curve direction on Q_t must be t-independent and equal to the limit value.
  ModelConnection conn(alpha, Gauge::unitary);
  double dev = 0.0;
  for (double t : {0.5, 0.1, 0.01, 1e-4}) {
    const double loop_radius = (branch == Branch::x) ? r : t / r;
    if (loop_radius <= 0.0 || loop_radius >= 2.0 || t / loop_radius >= 2.0) continue;
    auto path = PathOnQuadric::gamma_loop(t, loop_radius);
    for (int k = 0; k < 64; ++k) {
      const double s = static_cast<double>(k) / 64;
      const Vector c = -minus_omega_diag(conn, path.at(s), path.velocity(s));
      for (int a = 0; a < n; ++a) {
        const cplx per_theta = c[a] / kTwoPi * ((branch == Branch::x) ? 1.0 : -1.0);
        dev = std::max(dev, std::abs(per_theta - out.coefficient[a]));
      }
    }
  }
  out.t_deviation = dev;

  // Quadrature holonomy of the partial connection around the origin.
  const int m = 1024;
  Vector acc = Vector::Zero(n);
  for (int k = 0; k < m; ++k) acc += out.coefficient * (kTwoPi / m);
  Matrix hol = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a) hol(a, a) = std::exp(-acc[a]);
  out.holonomy = hol;
  return out;
}

}  // namespace moduli::local_model
