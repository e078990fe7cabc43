// The cube point group, its action on ring labels, and numerical residuals
// for central and dihedral (D3) symmetry of a 6-ring.

#ifndef SODALITE_SYMMETRY_HPP_
#define SODALITE_SYMMETRY_HPP_

#include <array>
#include <string>
#include <vector>

#include "sodalite/framework.hpp"
#include "sodalite/geom.hpp"

namespace sodalite {

/// Coordinate permutation followed by sign changes:
/// (g v)[i] = signs[i] * v[perm[i]].
struct SignedPermutation {
  std::array<int, 3> perm{0, 1, 2};
  std::array<int, 3> signs{1, 1, 1};

  static SignedPermutation identity() { return {}; }
  /// Swap of coordinates i and j (0-based).
  static SignedPermutation transposition(int i, int j);

  Vec3 apply(const Vec3& v) const;
  Mat3 matrix() const;
  SignedPermutation inverse() const;
  bool is_identity() const { return *this == SignedPermutation{}; }
  /// (a * b)(v) = a(b(v))
  friend SignedPermutation operator*(const SignedPermutation& a, const SignedPermutation& b);
  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

/// All 48 elements: permutations in lexicographic order, and for each one the
/// sign patterns (+++), (++-), (+-+), ... The identity comes first.
const std::vector<SignedPermutation>& cube_group();

/// Action of a cube symmetry on the six ring labels of the ideal ring.
struct LabelAction {
  bool stabilizes = false;  // g maps the ring onto itself
  /// Ring position -> ring position; -1 where the image leaves the ring.
  std::array<int, 6> image{};

  bool is_identity() const;
  /// Product of disjoint transpositions/cycles, e.g. "(T1-,T2+)(T3-,T3+)(T2-,T1+)".
  /// Cycles start at their earliest ring position; fixed labels are omitted.
  std::string cycles() const;
  int order() const;
  /// (a.then(b))(k) = b(a(k)).
  LabelAction then(const LabelAction& b) const;
};

/// Matches transformed barycenters of the ideal ring against the ring.
LabelAction ring_label_action(const SignedPermutation& g);

/// Axis, center and the three mirror planes of a D3 arrangement. Mirror m is
/// the one induced by a coordinate transposition in the ideal placement:
/// m = 0 for (12), 1 for (13), 2 for (23).
struct D3Frame {
  Vec3 center;
  Vec3 axis;  // unit
  std::array<Vec3, 3> normals;  // unit, each orthogonal to the axis

  /// The frame of the ideal ring: center (1,1,1)/sqrt2, mirrors x=y, x=z, y=z.
  static D3Frame ideal();

  /// Reflection in mirror m (all mirrors contain the center).
  Vec3 reflect(int m, const Vec3& x) const;
  Mat3 reflection(int m) const;
  /// The group element carrying T1- to the tetrahedron at ring position k,
  /// as a linear map about the center.
  Mat3 element(int k) const;
  Vec3 apply(const Mat3& linear, const Vec3& x) const { return center + linear * (x - center); }
  /// Unit radial direction from the center toward the barycenter at ring
  /// position k (orthogonal to the axis).
  Vec3 barycenter_direction(int k) const;
  /// Largest deviation from the required geometry: unit vectors, normals
  /// orthogonal to the axis, planes at pi/3 or 2pi/3.
  double defect() const;
};

/// Mirror through the contacts P_ij, Q_ij.
inline constexpr int kMirror12 = 0, kMirror13 = 1, kMirror23 = 2;
/// Mirror containing contact k (ring order P13 Q23 P12 Q13 P23 Q12).
inline constexpr std::array<int, 6> kContactMirror = {kMirror13, kMirror23, kMirror12,
                                                      kMirror13, kMirror23, kMirror12};

struct SymmetryResidual {
  double value = 0.0;  // max vertex mismatch, model units
  bool flagged = false;  // the fitted element is unreliable (see producer)
  /// Central: the fitted-center variant. D3: barycenter non-coplanarity.
  double secondary = 0.0;
  /// Central: the inversion center. D3: the fitted frame.
  Vec3 center = Vec3::Zero();
  D3Frame frame{};
};

/// Inversion through the midpoint of P13 and Q13; Ti^s is compared with
/// Ti^-s by nearest vertex. `secondary` uses the least-squares center.
SymmetryResidual central_symmetry_residual(const SixRing& ring);

/// Fits the frame from the ring (center and axis from the barycenter
/// hexagon, each mirror through its two contacts) and reports the largest
/// vertex mismatch under the three reflections. Flagged when the barycenters
/// are not coplanar within 1e-6.
SymmetryResidual d3_residual(const SixRing& ring);

/// Frame fitted as in d3_residual; normals oriented as in the ideal frame.
D3Frame fit_d3_frame(const SixRing& ring, double* nonplanarity = nullptr);

}  // namespace sodalite

#endif  // SODALITE_SYMMETRY_HPP_
