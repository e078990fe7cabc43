// Elementary 3D geometry: vectors, rotations, rigid motions, tetrahedra,
// period lattices and convex cells (Voronoi cells and small hulls).

#ifndef SODALITE_GEOM_HPP_
#define SODALITE_GEOM_HPP_

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sodalite {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Thrown for violated preconditions and unsolvable geometric requests.
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw GeometryError(msg); }

inline const double kSqrt2 = std::sqrt(2.0);
/// Half of the framework edge length, a = sqrt(2) - 1.
inline const double kHalfEdge = kSqrt2 - 1.0;
/// Edge length of every framework tetrahedron, 2a.
inline const double kEdge = 2.0 * kHalfEdge;

inline bool all_finite(const Vec3& v) { return v.allFinite(); }

// Unit quaternion, scalar first. Acts on vectors by q v q^-1 (right-handed):
// a rotation by +90 deg about e3 sends e1 to e2.
class Rotation {
public:
  Rotation() : q_(Eigen::Quaterniond::Identity()) {}
  /// Normalizes (w, x, y, z); throws on a zero or non-finite quaternion.
  Rotation(double w, double x, double y, double z);
  static Rotation identity() { return Rotation(); }
  /// Rotation by `angle` radians about `axis` (need not be unit length).
  static Rotation about_axis(const Vec3& axis, double angle);
  static Rotation from_matrix(const Mat3& m);

  double w() const { return q_.w(); }
  double x() const { return q_.x(); }
  double y() const { return q_.y(); }
  double z() const { return q_.z(); }
  std::array<double, 4> wxyz() const { return {q_.w(), q_.x(), q_.y(), q_.z()}; }

  Vec3 apply(const Vec3& v) const { return q_ * v; }
  Vec3 operator()(const Vec3& v) const { return apply(v); }
  Mat3 matrix() const { return q_.toRotationMatrix(); }
  Rotation inverse() const;
  /// (a * b)(v) = a(b(v)); the product is renormalized.
  friend Rotation operator*(const Rotation& a, const Rotation& b);
  double norm() const { return q_.norm(); }

private:
  explicit Rotation(const Eigen::Quaterniond& q);
  Eigen::Quaterniond q_;
};

/// x -> rotation(x) + translation.
struct RigidMotion {
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  static RigidMotion identity() { return {}; }
  /// Rotation about the fixed point `center`.
  static RigidMotion about_point(const Rotation& r, const Vec3& center) {
    return {r, center - r.apply(center)};
  }
  Vec3 apply(const Vec3& v) const { return rotation.apply(v) + translation; }
  Vec3 operator()(const Vec3& v) const { return apply(v); }
  /// Linear part only; used for free vectors such as lattice generators.
  Vec3 apply_vector(const Vec3& v) const { return rotation.apply(v); }
  RigidMotion inverse() const;
  friend RigidMotion operator*(const RigidMotion& a, const RigidMotion& b);
};

struct Tetrahedron {
  std::array<Vec3, 4> v;

  const Vec3& operator[](int i) const { return v[static_cast<size_t>(i)]; }
  Vec3& operator[](int i) { return v[static_cast<size_t>(i)]; }
  /// det[v1-v0, v2-v0, v3-v0] / 6
  double signed_volume() const;
  /// Applies an arbitrary affine map x -> m x + t vertex-wise.
  Tetrahedron transformed(const Mat3& m, const Vec3& t = Vec3::Zero()) const;
  Tetrahedron transformed(const RigidMotion& g) const;
  Tetrahedron translated(const Vec3& t) const;
};

/// The six vertex-index pairs of a tetrahedron, in lexicographic order.
inline constexpr std::array<std::pair<int, int>, 6> kTetraEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

bool is_regular_tetrahedron(const Tetrahedron& t, double edge, double tol);
Vec3 barycenter(const Tetrahedron& t);

struct Sphere {
  Vec3 center;
  double radius;
};
/// Throws GeometryError for (nearly) coplanar input.
Sphere circumsphere(const Tetrahedron& t);

/// Circumradius of a regular tetrahedron with edge `edge`: edge * sqrt(3/8).
inline double regular_circumradius(double edge) { return edge * std::sqrt(3.0 / 8.0); }

struct PeriodLattice {
  std::array<Vec3, 3> g;

  /// Columns are the generators.
  Mat3 matrix() const;
  double determinant() const { return matrix().determinant(); }
  /// Integer combination n1 g1 + n2 g2 + n3 g3.
  Vec3 point(int n1, int n2, int n3) const { return n1 * g[0] + n2 * g[1] + n3 * g[2]; }
  Vec3 point(const std::array<int, 3>& n) const { return point(n[0], n[1], n[2]); }
  /// |det| < 1e-9 * |g1| |g2| |g3|
  bool is_degenerate() const;
};

double lattice_volume(const PeriodLattice& lattice);

/// A convex polytope. Face vertex lists run counter-clockwise seen from
/// outside; the face list is sorted by the lexicographic order of face
/// centroids and each face starts at its smallest vertex index.
struct ConvexCell {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;

  /// Sorted vertex-index pairs, each listed once.
  std::vector<std::pair<int, int>> edges() const;
  /// V - E + F
  int euler_characteristic() const;
  /// Largest distance of a face vertex from the face's best-fit plane.
  double max_face_nonplanarity() const;
  /// Number of faces with exactly `n` vertices.
  int count_faces(size_t n) const;
  /// True when every edge borders exactly two faces.
  bool is_closed_manifold() const;
  /// Min and max edge length.
  std::pair<double, double> edge_length_range() const;
};

/// Vertex dedup tolerance for convex cells (absolute, model units).
inline constexpr double kCellTolerance = 1e-9;

/// Voronoi cell of the origin: intersection of the bisecting half-spaces of
/// all lattice points with coefficients in [-2,2]^3. Throws on a degenerate
/// lattice.
ConvexCell voronoi_cell(const PeriodLattice& lattice);

/// Convex hull of a small point set (brute force over supporting planes,
/// intended for a few dozen points). Throws when the points span less than
/// three dimensions.
ConvexCell convex_hull(std::span<const Vec3> points);

}  // namespace sodalite

#endif  // SODALITE_GEOM_HPP_
