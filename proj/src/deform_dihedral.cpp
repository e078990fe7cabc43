#include "sodalite/deform_dihedral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sodalite {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double circumradius() { return regular_circumradius(kEdge); }

// Vertex i of the tetrahedron at position k is element(k) applied to vertex
// perm[k][i] of T1-, as in the ideal ring.
const std::array<std::array<int, 4>, 6>& element_index_map() {
  static const auto map = [] {
    const SixRing& r = ideal_sodalite().ring;
    const D3Frame f = D3Frame::ideal();
    std::array<std::array<int, 4>, 6> m{};
    for (int k = 0; k < 6; ++k) {
      const Mat3 g = f.element(k);
      for (int i = 0; i < 4; ++i) {
        m[static_cast<size_t>(k)][static_cast<size_t>(i)] = -1;
        for (int j = 0; j < 4; ++j)
          if ((f.apply(g, r.tetra[0][j]) - r.tetra[static_cast<size_t>(k)][i]).norm() < 1e-9)
            m[static_cast<size_t>(k)][static_cast<size_t>(i)] = j;
        if (m[static_cast<size_t>(k)][static_cast<size_t>(i)] < 0)
          fail("element_index_map: ideal ring is not D3 symmetric");
      }
    }
    return m;
  }();
  return map;
}

const PeriodMark& residual_mark() {
  static const PeriodMark mark = [] {
    for (const PeriodMark& m : ideal_sodalite().marks)
      if (m.source.tetra == ring::T2m && m.target.tetra == ring::T1m)
        return m;
    fail("residual_mark: no period from T2- to T1-");
  }();
  return mark;
}

GeneratingEdgeFamily edge_family(const D3Frame& frame, double rho) {
  const auto circles = contact_circles(frame, rho);
  GeneratingEdgeFamily fam;
  fam.rho = rho;
  fam.circle_p = circles[0];
  fam.circle_q = circles[5];
  return fam;
}

// Root of f in [a, b] given a sign change; false position with the Illinois
// modification, falling back to bisection when it stalls.
double bracketed_root(const auto& f, double a, double b, double fa, double fb) {
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double c = (a * fb - b * fa) / (fb - fa);
    if (!(c > std::min(a, b) && c < std::max(a, b)) || it % 8 == 7)
      c = 0.5 * (a + b);
    double fc = f(c);
    if (fc == 0.0 || std::abs(b - a) < 1e-15)
      return c;
    if ((fc > 0) == (fb > 0)) {
      b = c;
      fb = fc;
      if (side == -1)
        fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1)
        fb *= 0.5;
      side = 1;
    }
    if (std::abs(fc) < 1e-15)
      return c;
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

double max_vertex_distance(const SixRing& a, const SixRing& b) {
  double d = 0.0;
  for (size_t k = 0; k < 6; ++k)
    for (int i = 0; i < 4; ++i)
      d = std::max(d, (a.tetra[k][i] - b.tetra[k][i]).norm());
  return d;
}

}  // namespace

// CIRCLES AND THE GENERATING EDGE

std::array<Vec3, 6> hexagon_barycenters(const D3Frame& frame, double rho) {
  std::array<Vec3, 6> b;
  for (int k = 0; k < 6; ++k)
    b[static_cast<size_t>(k)] = frame.center + rho * frame.barycenter_direction(k);
  return b;
}

Vec3 ContactCircle::point(double phi) const {
  return center + radius * (std::cos(phi) * u + std::sin(phi) * w);
}

double ContactCircle::angle_of(const Vec3& x) const {
  Vec3 d = x - center;
  return std::atan2(d.dot(w), d.dot(u));
}

std::array<ContactCircle, 6> contact_circles(const D3Frame& frame, double rho) {
  if (!(rho > 0.0))
    throw std::invalid_argument("contact_circles: rho must be positive");
  const auto b = hexagon_barycenters(frame, rho);
  const double r = circumradius();
  std::array<ContactCircle, 6> out;
  for (size_t k = 0; k < 6; ++k) {
    ContactCircle& c = out[k];
    const Vec3& b0 = b[k];
    const Vec3& b1 = b[(k + 1) % 6];
    double half = 0.5 * (b1 - b0).norm();
    c.mirror = kContactMirror[k];
    c.center = 0.5 * (b0 + b1);
    Vec3 radial = c.center - frame.center;
    c.u = (radial - radial.dot(frame.axis) * frame.axis).normalized();
    c.w = frame.axis;
    c.empty = half > r;
    c.radius = c.empty ? 0.0 : std::sqrt(r * r - half * half);
  }
  return out;
}

std::optional<GeneratingEdge> GeneratingEdgeFamily::at(double phi, int branch) const {
  if (circle_p.empty || circle_q.empty)
    return std::nullopt;
  const Vec3 p = circle_p.point(phi);
  const Vec3 d = p - circle_q.center;
  const double r = circle_q.radius;
  const double a = 2.0 * r * d.dot(circle_q.u);
  const double b = 2.0 * r * d.dot(circle_q.w);
  const double c = d.squaredNorm() + r * r - kEdge * kEdge;
  const double amp = std::hypot(a, b);
  if (amp == 0.0 || std::abs(c) > amp * (1.0 + 1e-14))
    return std::nullopt;
  double psi = std::atan2(b, a) + (branch >= 0 ? 1.0 : -1.0) * std::acos(std::clamp(c / amp, -1.0, 1.0));
  return GeneratingEdge{p, circle_q.point(psi)};
}

GeneratingEdgeFamily solve_generating_edge(const D3Frame& frame, double rho) {
  GeneratingEdgeFamily fam = edge_family(frame, rho);
  if (fam.circle_p.empty || fam.circle_q.empty)
    return fam;
  auto slack = [&](double phi) {
    const Vec3 d = fam.circle_p.point(phi) - fam.circle_q.center;
    const double r = fam.circle_q.radius;
    const double amp = 2.0 * r * std::hypot(d.dot(fam.circle_q.u), d.dot(fam.circle_q.w));
    return amp - std::abs(d.squaredNorm() + r * r - kEdge * kEdge);
  };
  auto edge = [&](double lo, double hi) {
    double flo = slack(lo);
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((slack(mid) >= 0) == (flo >= 0))
        lo = mid;
      else
        hi = mid;
    }
    return flo >= 0 ? lo : hi;
  };
  constexpr int n = 1440;
  double start = kNaN;
  double prev_phi = -kPi;
  bool prev_ok = slack(-kPi) >= 0;
  if (prev_ok)
    start = -kPi;
  for (int i = 1; i <= n; ++i) {
    double phi = -kPi + 2.0 * kPi * i / n;
    bool ok = slack(phi) >= 0;
    if (ok && !prev_ok)
      start = edge(prev_phi, phi);
    if (!ok && prev_ok)
      fam.intervals.emplace_back(start, edge(prev_phi, phi));
    prev_ok = ok;
    prev_phi = phi;
  }
  if (prev_ok)
    fam.intervals.emplace_back(start, kPi);
  return fam;
}

// RING CONSTRUCTION

D3RingParams ideal_d3_params() {
  static const D3RingParams params = [] {
    const D3Frame f = D3Frame::ideal();
    const SixRing& r = ideal_sodalite().ring;
    GeneratingEdgeFamily fam = edge_family(f, 1.0);
    D3RingParams out;
    out.rho = 1.0;
    out.phi = fam.circle_p.angle_of(r.contact("P13").position);
    double best = INFINITY;
    for (int branch : {1, -1}) {
      auto e = fam.at(out.phi, branch);
      if (!e)
        continue;
      double d = (e->q - r.contact("Q12").position).norm();
      if (d < best) {
        best = d;
        out.branch = branch;
      }
    }
    if (!(best < 1e-9))
      fail("ideal_d3_params: ideal generating edge not found");
    return out;
  }();
  return params;
}

SixRing ring_from_generating_edge(const D3Frame& frame, double rho, const GeneratingEdge& e) {
  const Vec3 b = frame.center + rho * frame.barycenter_direction(0);
  const double r = circumradius();
  if (std::abs((e.p - b).norm() - r) > 1e-9 || std::abs((e.q - b).norm() - r) > 1e-9 ||
      std::abs((e.p - e.q).norm() - kEdge) > 1e-9)
    fail("ring_from_generating_edge: edge does not fit a regular tetrahedron at the barycenter");
  const Vec3 m = 0.5 * (e.p + e.q);
  const Vec3 opposite = 2.0 * b - m;
  const Vec3 dir = (e.q - e.p).cross(b - m).normalized();
  Tetrahedron t{{e.p, opposite + kHalfEdge * dir, e.q, opposite - kHalfEdge * dir}};
  if ((t.signed_volume() > 0) != (ideal_sodalite().ring.tetra[0].signed_volume() > 0))
    std::swap(t.v[1], t.v[3]);

  const auto& map = element_index_map();
  std::array<Tetrahedron, 6> tetra;
  for (size_t k = 0; k < 6; ++k) {
    const Mat3 g = frame.element(static_cast<int>(k));
    for (int i = 0; i < 4; ++i)
      tetra[k][i] = frame.apply(g, t[map[k][static_cast<size_t>(i)]]);
  }
  return ideal_sodalite().ring.with_tetrahedra(tetra);
}

SixRing build_d3_ring(const D3RingParams& params, const D3Frame& frame) {
  if (!(params.rho > 0.0))
    fail("build_d3_ring: rho must be positive");
  auto e = edge_family(frame, params.rho).at(params.phi, params.branch);
  if (!e)
    fail("build_d3_ring: no generating edge at rho=" + std::to_string(params.rho) +
         " phi=" + std::to_string(params.phi));
  return ring_from_generating_edge(frame, params.rho, *e);
}

PeriodicPlacement d3_placement(const SixRing& ring) {
  PeriodicPlacement p;
  p.ring = ring;
  p.marks = ideal_sodalite().marks;
  p.lattice = lattice_from_marks(p.ring, p.marks);
  p.degenerate = p.lattice.is_degenerate();
  return p;
}

double periodicity_residual(const SixRing& ring) {
  const PeriodMark& m = residual_mark();
  const Vec3 n = fit_d3_frame(ring).normals[kMirror12];
  return (ring.at(m.target) - ring.at(m.source)).dot(n);
}

double periodicity_residual(const D3RingParams& params) {
  if (!(params.rho > 0.0))
    return kNaN;
  auto e = edge_family(D3Frame::ideal(), params.rho).at(params.phi, params.branch);
  if (!e)
    return kNaN;
  return periodicity_residual(ring_from_generating_edge(D3Frame::ideal(), params.rho, *e));
}

bool detect_tetrahedrite(const PeriodicPlacement& p, double tol) {
  return d3_residual(p.ring).value < tol && central_symmetry_residual(p.ring).value > 10.0 * tol;
}

// TILT CURVE

namespace {

TiltPoint make_point(const D3RingParams& params) {
  TiltPoint pt;
  pt.params = params;
  pt.placement = d3_placement(build_d3_ring(params));
  pt.lattice_volume = lattice_volume(pt.placement.lattice);
  pt.central_residual = central_symmetry_residual(pt.placement.ring).value;
  pt.d3_residual = d3_residual(pt.placement.ring).value;
  pt.periodicity_residual = periodicity_residual(pt.placement.ring);
  pt.tetrahedrite = detect_tetrahedrite(pt.placement);
  return pt;
}

// Zero of g on the line s -> g(s) nearest to s = 0 within |s| <= reach.
std::optional<double> nearest_root(const auto& g, double delta, double reach) {
  const double g0 = g(0.0);
  if (g0 == 0.0)
    return 0.0;
  double inner[2] = {g0, g0};
  const int n = static_cast<int>(std::ceil(reach / delta));
  for (int j = 1; j <= n; ++j)
    for (int side = 0; side < 2; ++side) {
      const double sgn = side == 0 ? 1.0 : -1.0;
      const double s0 = sgn * (j - 1) * delta, s1 = sgn * j * delta;
      const double g1 = g(s1);
      const double ga = inner[side];
      inner[side] = g1;
      if (!std::isfinite(ga) || !std::isfinite(g1))
        continue;
      if (g1 == 0.0)
        return s1;
      if ((ga > 0) != (g1 > 0))
        return bracketed_root(g, s0, s1, ga, g1);
    }
  return std::nullopt;
}

}  // namespace

TiltTrace trace_tilt_curve(double step, int max_steps, int direction) {
  if (!(step > 0.0))
    throw std::invalid_argument("trace_tilt_curve: step must be positive");
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("trace_tilt_curve: direction must be +1 or -1");
  TiltTrace trace;
  D3RingParams cur = ideal_d3_params();
  trace.points.push_back(make_point(cur));
  Eigen::Vector2d x(cur.rho, cur.phi);
  Eigen::Vector2d t(0.0, static_cast<double>(direction));
  trace.stop_reason = "max_steps";

  for (int s = 0; s < max_steps; ++s) {
    const Eigen::Vector2d pred = x + step * t;
    const Eigen::Vector2d normal(-t(1), t(0));
    std::optional<TiltPoint> best;
    double best_move = INFINITY;
    for (int branch : {cur.branch, -cur.branch}) {
      auto g = [&](double u) {
        Eigen::Vector2d y = pred + u * normal;
        return periodicity_residual(D3RingParams{y(0), y(1), branch});
      };
      auto root = nearest_root(g, step / 32.0, 2.0 * step);
      if (!root || !(std::abs(g(*root)) < 1e-10))
        continue;
      Eigen::Vector2d y = pred + *root * normal;
      TiltPoint pt = make_point(D3RingParams{y(0), y(1), branch});
      double move = max_vertex_distance(pt.placement.ring, trace.points.back().placement.ring);
      if (move < best_move) {
        best_move = move;
        best = std::move(pt);
      }
    }
    if (!best) {
      trace.stop_reason = "no bracketed corrector root (curve end or branch fold)";
      break;
    }
    ValidationReport rep = validate_placement(best->placement, 1e-8);
    if (!rep.ok()) {
      trace.stop_reason = "validation failed at step " + std::to_string(s + 1);
      break;
    }
    const Eigen::Vector2d y(best->params.rho, best->params.phi);
    t = (y - x).normalized();
    x = y;
    cur = best->params;
    trace.max_step_ratio = std::max(trace.max_step_ratio, best_move / step);
    trace.points.push_back(std::move(*best));
  }
  return trace;
}

// CENTRO + D3

namespace {

// Signed excess of the distance from P13(phi) to the T1- diameter over the
// half edge.
double centro_gap(const D3Frame& f, double rho, double phi) {
  const ContactCircle c = contact_circles(f, rho)[0];
  if (c.empty)
    return kNaN;
  const Vec3 d = f.barycenter_direction(0);
  const Vec3 x = c.point(phi) - f.center;
  return (x - x.dot(d) * d).norm() - kHalfEdge;
}

double ideal_side() { return ideal_d3_params().phi < 0 ? -1.0 : 1.0; }

}  // namespace

double centro_d3_phi(double rho) {
  const D3Frame f = D3Frame::ideal();
  const double side = ideal_side();
  auto g = [&](double phi) { return centro_gap(f, rho, phi); };
  const double g0 = g(side * kPi);
  if (!std::isfinite(g0))
    fail("centro_d3_phi: contact circles are empty at rho=" + std::to_string(rho));
  if (std::abs(g0) <= 1e-13)
    return side * kPi;
  if (g0 > 0)
    fail("centro_d3_phi: rho=" + std::to_string(rho) + " lies beyond the fold");
  constexpr int n = 2000;
  double prev = side * kPi, gprev = g0;
  for (int i = 1; i <= n; ++i) {
    double phi = side * (kPi - kPi * i / n);
    double gi = g(phi);
    if ((gi > 0) != (gprev > 0) || gi == 0.0)
      return bracketed_root(g, prev, phi, gprev, gi);
    prev = phi;
    gprev = gi;
  }
  fail("centro_d3_phi: no root on the ideal side at rho=" + std::to_string(rho));
}

PeriodicPlacement build_centro_d3_ring(double rho) {
  const D3Frame f = D3Frame::ideal();
  const double phi = centro_d3_phi(rho);
  const Vec3 p = contact_circles(f, rho)[0].point(phi);
  const Vec3 d = f.barycenter_direction(0);
  const Vec3 x = p - f.center;
  const Vec3 q = f.center + 2.0 * x.dot(d) * d - x;
  return d3_placement(ring_from_generating_edge(f, rho, GeneratingEdge{p, q}));
}

double centro_d3_fold() {
  static const double fold = [] {
    const D3Frame f = D3Frame::ideal();
    const double side = ideal_side();
    auto g = [&](double rho) { return centro_gap(f, rho, side * kPi); };
    double lo = 1.0, hi = 1.0;
    if (!(g(lo) < 0))
      fail("centro_d3_fold: ideal hexagon is not inside the family");
    const double limit = 2.0 * circumradius();
    while (hi < limit) {
      hi = std::min(limit, hi + 0.001);
      if (g(hi) >= 0)
        break;
      lo = hi;
    }
    if (!(g(hi) >= 0))
      fail("centro_d3_fold: no fold before the circles vanish");
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      double mid = 0.5 * (lo + hi);
      (g(mid) < 0 ? lo : hi) = mid;
    }
    return lo;
  }();
  return fold;
}

double distant_edge_bisector_residual(const SixRing& ring) {
  const D3Frame f = fit_d3_frame(ring);
  double worst = 0.0;
  for (int k = 0; k < 6; ++k) {
    std::vector<Vec3> free;
    for (int i = 0; i < 4; ++i)
      if (!ring.is_contact_slot({k, i}))
        free.push_back(ring.tetra[static_cast<size_t>(k)][i]);
    if (free.size() != 2)
      fail("distant_edge_bisector_residual: ring has wrong contact bookkeeping");
    Vec3 mirrored = free[0] - 2.0 * (free[0] - f.center).dot(f.axis) * f.axis;
    worst = std::max(worst, (mirrored - free[1]).norm());
  }
  return worst;
}

std::vector<double> cage_distance_spectrum(const PeriodicPlacement& p) {
  const SodaliteCage cage = sodalite_cage(p);
  std::vector<Vec3> b;
  for (const Tetrahedron& t : cage.tetrahedra)
    b.push_back(barycenter(t));
  std::vector<double> d;
  for (size_t i = 0; i < b.size(); ++i)
    for (size_t j = i + 1; j < b.size(); ++j)
      d.push_back((b[i] - b[j]).norm());
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace sodalite
