// D3-symmetric rings: contact circles, the generating edge of T1-, ring
// completion by reflection, the periodicity condition, the tilt curve and
// the centro+D3 family.
//
// Coordinates: the barycenter hexagon has circumradius rho about the frame
// center. Contact k (ring order P13 Q23 P12 Q13 P23 Q12) moves on a circle in
// its mirror plane, written center + r (cos(phi) u + sin(phi) w) with u the
// outward radial direction and w the frame axis. The generating edge is
// P13 (on circle 0, angle phi) to Q12 (on circle 5, one of two roots).

#ifndef SODALITE_DEFORM_DIHEDRAL_HPP_
#define SODALITE_DEFORM_DIHEDRAL_HPP_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sodalite/framework.hpp"
#include "sodalite/geom.hpp"
#include "sodalite/symmetry.hpp"

namespace sodalite {

std::array<Vec3, 6> hexagon_barycenters(const D3Frame& frame, double rho);

struct ContactCircle {
  bool empty = false;
  int mirror = 0;
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  Vec3 u = Vec3::Zero();  // outward radial, unit
  Vec3 w = Vec3::Zero();  // frame axis

  Vec3 point(double phi) const;
  /// Angle of the projection of x onto the circle plane.
  double angle_of(const Vec3& x) const;
};

/// Circles of points at the regular circumradius from both barycenters of
/// each consecutive pair. Empty when the spheres are disjoint.
std::array<ContactCircle, 6> contact_circles(const D3Frame& frame, double rho);

struct GeneratingEdge {
  Vec3 p;  // P13
  Vec3 q;  // Q12
};

struct GeneratingEdgeFamily {
  double rho = 0.0;
  ContactCircle circle_p;
  ContactCircle circle_q;
  /// Closed phi-intervals inside [-pi, pi] where an edge exists.
  std::vector<std::pair<double, double>> intervals;

  bool empty() const { return intervals.empty(); }
  /// branch = +1 or -1 selects between the two Q12 roots; nullopt when
  /// infeasible at phi.
  std::optional<GeneratingEdge> at(double phi, int branch) const;
};

GeneratingEdgeFamily solve_generating_edge(const D3Frame& frame, double rho);

struct D3RingParams {
  double rho = 1.0;
  double phi = 0.0;
  int branch = 1;
};

/// The parameters reproducing the ideal ring.
D3RingParams ideal_d3_params();

/// Throws GeometryError when the parameters are infeasible.
SixRing build_d3_ring(const D3RingParams& params, const D3Frame& frame = D3Frame::ideal());
/// Ring from a given generating edge. Throws unless p and q sit at the
/// circumradius from the T1- barycenter and 2(sqrt2-1) apart.
SixRing ring_from_generating_edge(const D3Frame& frame, double rho, const GeneratingEdge& e);

/// Ideal marks carried over, lattice read off the realized marks.
PeriodicPlacement d3_placement(const SixRing& ring);

/// Component of the period T2-.v1 -> T1-.v3 along the fitted mirror-12 normal.
double periodicity_residual(const SixRing& ring);
/// periodicity_residual(build_d3_ring(params)); NaN when infeasible.
double periodicity_residual(const D3RingParams& params);

/// True iff d3_residual < tol and central_symmetry_residual > 10 tol.
bool detect_tetrahedrite(const PeriodicPlacement& p, double tol = 1e-8);

struct TiltPoint {
  D3RingParams params;
  PeriodicPlacement placement;
  double lattice_volume = 0.0;
  double central_residual = 0.0;
  double d3_residual = 0.0;
  double periodicity_residual = 0.0;
  bool tetrahedrite = false;
};

struct TiltTrace {
  std::vector<TiltPoint> points;  // points[0] is the ideal placement
  std::string stop_reason;
  /// Largest vertex displacement between consecutive points divided by step.
  double max_step_ratio = 0.0;
};

/// Pseudo-arclength continuation of periodicity_residual = 0 in (rho, phi),
/// leaving the ideal point along +-phi. The corrector takes the sign change
/// nearest the predictor along the normal and accepts |residual| < 1e-10.
/// Every accepted point is validated at 1e-8.
TiltTrace trace_tilt_curve(double step = 0.005, int max_steps = 400, int direction = 1);

/// Angle of P13 for the centro+D3 ring: the generating edge is bisected
/// perpendicularly by the diameter through the T1- barycenter. The root on
/// the ideal side of the inward point is used. Throws when none exists.
double centro_d3_phi(double rho);
PeriodicPlacement build_centro_d3_ring(double rho);
/// Largest rho for which centro_d3_phi exists.
double centro_d3_fold();

/// Largest |S(v1) - v3| over the edges v1v3 not touching a contact, with S the
/// reflection in the fitted hexagon plane.
double distant_edge_bisector_residual(const SixRing& ring);

/// Sorted pairwise distances between the barycenters of the cage.
std::vector<double> cage_distance_spectrum(const PeriodicPlacement& p);

}  // namespace sodalite

#endif  // SODALITE_DEFORM_DIHEDRAL_HPP_
