#include "sodalite/geom.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace sodalite {

// ROTATION

Rotation::Rotation(double w, double x, double y, double z) : q_(w, x, y, z) {
  double n = q_.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    fail("Rotation: quaternion must be finite and non-zero");
  q_.coeffs() /= n;
}

Rotation::Rotation(const Eigen::Quaterniond& q) : q_(q) { q_.normalize(); }

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
  double n = axis.norm();
  if (!(n > 0.0))
    fail("Rotation::about_axis: zero axis");
  return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis / n)));
}

Rotation Rotation::from_matrix(const Mat3& m) { return Rotation(Eigen::Quaterniond(m)); }

Rotation Rotation::inverse() const { return Rotation(q_.conjugate()); }

Rotation operator*(const Rotation& a, const Rotation& b) { return Rotation(a.q_ * b.q_); }

RigidMotion RigidMotion::inverse() const {
  Rotation inv = rotation.inverse();
  return {inv, -inv.apply(translation)};
}

RigidMotion operator*(const RigidMotion& a, const RigidMotion& b) {
  return {a.rotation * b.rotation, a.rotation.apply(b.translation) + a.translation};
}

// TETRAHEDRON

double Tetrahedron::signed_volume() const {
  Mat3 m;
  m.col(0) = v[1] - v[0];
  m.col(1) = v[2] - v[0];
  m.col(2) = v[3] - v[0];
  return m.determinant() / 6.0;
}

Tetrahedron Tetrahedron::transformed(const Mat3& m, const Vec3& t) const {
  Tetrahedron r;
  for (size_t i = 0; i < 4; ++i)
    r.v[i] = m * v[i] + t;
  return r;
}

Tetrahedron Tetrahedron::transformed(const RigidMotion& g) const {
  Tetrahedron r;
  for (size_t i = 0; i < 4; ++i)
    r.v[i] = g.apply(v[i]);
  return r;
}

Tetrahedron Tetrahedron::translated(const Vec3& t) const {
  Tetrahedron r = *this;
  for (Vec3& x : r.v)
    x += t;
  return r;
}

bool is_regular_tetrahedron(const Tetrahedron& t, double edge, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("is_regular_tetrahedron: tol must be positive");
  // A degenerate tetrahedron is never regular, whatever `edge` says.
  double scale = std::max(edge, 1e-300);
  if (!(std::abs(t.signed_volume()) > 1e-12 * scale * scale * scale))
    return false;
  for (auto [i, j] : kTetraEdges)
    if (!(std::abs((t[i] - t[j]).norm() - edge) <= tol))
      return false;
  return true;
}

Vec3 barycenter(const Tetrahedron& t) { return (t.v[0] + t.v[1] + t.v[2] + t.v[3]) / 4.0; }

Sphere circumsphere(const Tetrahedron& t) {
  double scale = 0.0;
  for (auto [i, j] : kTetraEdges)
    scale = std::max(scale, (t[i] - t[j]).norm());
  if (!(std::abs(t.signed_volume()) > 1e-12 * scale * scale * scale))
    fail("circumsphere: degenerate (coplanar) tetrahedron has no unique circumsphere");
  Mat3 a;
  Vec3 b;
  for (int i = 1; i < 4; ++i) {
    a.row(i - 1) = 2.0 * (t[i] - t[0]).transpose();
    b(i - 1) = t[i].squaredNorm() - t[0].squaredNorm();
  }
  Vec3 c = a.fullPivLu().solve(b);
  return {c, (t[0] - c).norm()};
}

// LATTICE

Mat3 PeriodLattice::matrix() const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    m.col(i) = g[static_cast<size_t>(i)];
  return m;
}

bool PeriodLattice::is_degenerate() const {
  double scale = g[0].norm() * g[1].norm() * g[2].norm();
  return !(std::abs(determinant()) >= 1e-9 * scale) || scale == 0.0;
}

double lattice_volume(const PeriodLattice& lattice) { return std::abs(lattice.determinant()); }

// CONVEX CELLS

namespace {

struct Plane {
  Vec3 normal;  // unit, outward
  double offset;  // normal . x <= offset inside
};

bool less_with_tol(const Vec3& a, const Vec3& b, double tol) {
  for (int k = 0; k < 3; ++k) {
    if (a(k) < b(k) - tol)
      return true;
    if (a(k) > b(k) + tol)
      return false;
  }
  return false;
}

// Appends p unless a point within tol already exists; returns its index.
int add_unique(std::vector<Vec3>& pts, const Vec3& p, double tol) {
  for (size_t i = 0; i < pts.size(); ++i)
    if ((pts[i] - p).norm() <= tol)
      return static_cast<int>(i);
  pts.push_back(p);
  return static_cast<int>(pts.size()) - 1;
}

// Builds faces from the vertex set and the supporting planes, then puts the
// cell into canonical order.
ConvexCell assemble(std::vector<Vec3> verts, const std::vector<Plane>& planes, double tol) {
  std::sort(verts.begin(), verts.end(),
            [tol](const Vec3& a, const Vec3& b) { return less_with_tol(a, b, tol); });
  ConvexCell cell;
  cell.vertices = verts;
  std::set<std::vector<int>> seen;
  for (const Plane& pl : planes) {
    std::vector<int> on;
    for (size_t i = 0; i < verts.size(); ++i)
      if (std::abs(pl.normal.dot(verts[i]) - pl.offset) <= 1e3 * tol)
        on.push_back(static_cast<int>(i));
    if (on.size() < 3)
      continue;
    Vec3 centroid = Vec3::Zero();
    for (int i : on)
      centroid += verts[static_cast<size_t>(i)];
    centroid /= static_cast<double>(on.size());
    // Reject lower-dimensional contacts (an edge or vertex on the plane).
    Vec3 ref = Vec3::Zero();
    for (int i : on)
      if ((verts[static_cast<size_t>(i)] - centroid).norm() > ref.norm())
        ref = verts[static_cast<size_t>(i)] - centroid;
    Vec3 u = ref.normalized();
    Vec3 w = pl.normal.cross(u);
    double spread = 0.0;
    for (int i : on)
      spread = std::max(spread, std::abs((verts[static_cast<size_t>(i)] - centroid).dot(w)));
    if (spread <= 1e3 * tol)
      continue;
    std::vector<std::pair<double, int>> by_angle;
    for (int i : on) {
      Vec3 d = verts[static_cast<size_t>(i)] - centroid;
      by_angle.emplace_back(std::atan2(d.dot(w), d.dot(u)), i);
    }
    std::sort(by_angle.begin(), by_angle.end());
    std::vector<int> face;
    for (auto& [ang, i] : by_angle)
      face.push_back(i);
    // atan2 about normal x u gives counter-clockwise order seen from outside.
    auto smallest = std::min_element(face.begin(), face.end());
    std::rotate(face.begin(), smallest, face.end());
    std::vector<int> key = face;
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second)
      cell.faces.push_back(std::move(face));
  }
  auto centroid_of = [&cell](const std::vector<int>& f) {
    Vec3 c = Vec3::Zero();
    for (int i : f)
      c += cell.vertices[static_cast<size_t>(i)];
    return Vec3(c / static_cast<double>(f.size()));
  };
  std::sort(cell.faces.begin(), cell.faces.end(),
            [&](const std::vector<int>& a, const std::vector<int>& b) {
              return less_with_tol(centroid_of(a), centroid_of(b), tol);
            });
  return cell;
}

}  // namespace

std::vector<std::pair<int, int>> ConvexCell::edges() const {
  std::set<std::pair<int, int>> e;
  for (const auto& f : faces)
    for (size_t i = 0; i < f.size(); ++i) {
      int a = f[i], b = f[(i + 1) % f.size()];
      e.emplace(std::min(a, b), std::max(a, b));
    }
  return {e.begin(), e.end()};
}

int ConvexCell::euler_characteristic() const {
  return static_cast<int>(vertices.size()) - static_cast<int>(edges().size()) +
         static_cast<int>(faces.size());
}

double ConvexCell::max_face_nonplanarity() const {
  double worst = 0.0;
  for (const auto& f : faces) {
    Vec3 c = Vec3::Zero();
    for (int i : f)
      c += vertices[static_cast<size_t>(i)];
    c /= static_cast<double>(f.size());
    Eigen::MatrixXd m(f.size(), 3);
    for (size_t k = 0; k < f.size(); ++k)
      m.row(static_cast<Eigen::Index>(k)) = (vertices[static_cast<size_t>(f[k])] - c).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    Vec3 n = svd.matrixV().col(2);
    for (int i : f)
      worst = std::max(worst, std::abs((vertices[static_cast<size_t>(i)] - c).dot(n)));
  }
  return worst;
}

int ConvexCell::count_faces(size_t n) const {
  return static_cast<int>(
      std::count_if(faces.begin(), faces.end(), [n](const auto& f) { return f.size() == n; }));
}

bool ConvexCell::is_closed_manifold() const {
  std::map<std::pair<int, int>, int> uses;
  for (const auto& f : faces)
    for (size_t i = 0; i < f.size(); ++i) {
      int a = f[i], b = f[(i + 1) % f.size()];
      ++uses[{std::min(a, b), std::max(a, b)}];
    }
  return std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second == 2; });
}

std::pair<double, double> ConvexCell::edge_length_range() const {
  double lo = INFINITY, hi = 0.0;
  for (auto [a, b] : edges()) {
    double d = (vertices[static_cast<size_t>(a)] - vertices[static_cast<size_t>(b)]).norm();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

ConvexCell voronoi_cell(const PeriodLattice& lattice) {
  if (lattice.is_degenerate())
    fail("voronoi_cell: degenerate lattice");
  std::vector<Plane> planes;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j)
      for (int k = -2; k <= 2; ++k) {
        if (i == 0 && j == 0 && k == 0)
          continue;
        Vec3 p = lattice.point(i, j, k);
        double n = p.norm();
        planes.push_back({p / n, 0.5 * n});
      }
  // Nearest lattice points first: most candidates are rejected early.
  std::sort(planes.begin(), planes.end(),
            [](const Plane& a, const Plane& b) { return a.offset < b.offset; });
  const double tol = kCellTolerance;
  std::vector<Vec3> verts;
  const size_t n = planes.size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t c = b + 1; c < n; ++c) {
        Mat3 m;
        m.row(0) = planes[a].normal.transpose();
        m.row(1) = planes[b].normal.transpose();
        m.row(2) = planes[c].normal.transpose();
        if (std::abs(m.determinant()) < 1e-10)
          continue;
        Vec3 x = m.inverse() * Vec3(planes[a].offset, planes[b].offset, planes[c].offset);
        bool inside = std::all_of(planes.begin(), planes.end(), [&](const Plane& pl) {
          return pl.normal.dot(x) <= pl.offset + tol;
        });
        if (inside)
          add_unique(verts, x, tol);
      }
  return assemble(std::move(verts), planes, tol);
}

ConvexCell convex_hull(std::span<const Vec3> points) {
  const double tol = kCellTolerance;
  std::vector<Vec3> pts;
  for (const Vec3& p : points)
    add_unique(pts, p, tol);
  if (pts.size() < 4)
    fail("convex_hull: need at least four distinct points");
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : pts)
    centroid += p;
  centroid /= static_cast<double>(pts.size());
  double scale = 0.0;
  for (const Vec3& p : pts)
    scale = std::max(scale, (p - centroid).norm());
  std::vector<Plane> planes;
  std::vector<Vec3> hull_pts;
  const size_t n = pts.size();
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      for (size_t c = b + 1; c < n; ++c) {
        Vec3 nrm = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
        if (nrm.norm() < 1e-9 * scale * scale)
          continue;
        nrm.normalize();
        double off = nrm.dot(pts[a]);
        if (nrm.dot(centroid) > off) {
          nrm = -nrm;
          off = -off;
        }
        bool supporting = std::all_of(pts.begin(), pts.end(),
                                      [&](const Vec3& p) { return nrm.dot(p) <= off + tol; });
        if (!supporting)
          continue;
        bool dup = std::any_of(planes.begin(), planes.end(), [&](const Plane& pl) {
          return (pl.normal - nrm).norm() < 1e-9 && std::abs(pl.offset - off) < tol;
        });
        if (!dup)
          planes.push_back({nrm, off});
      }
  if (planes.size() < 4)
    fail("convex_hull: points do not span three dimensions");
  for (const Vec3& p : pts) {
    auto on = std::count_if(planes.begin(), planes.end(),
                            [&](const Plane& pl) { return std::abs(pl.normal.dot(p) - pl.offset) <= tol; });
    if (on >= 3)
      hull_pts.push_back(p);
  }
  return assemble(std::move(hull_pts), planes, tol);
}

}  // namespace sodalite
