// The sodalite framework as a 6-ring of regular tetrahedra with marked
// periods: the ideal placement, validation, quotient graph, sodalite cage and
// patch generation.

#ifndef SODALITE_FRAMEWORK_HPP_
#define SODALITE_FRAMEWORK_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "sodalite/geom.hpp"

namespace sodalite {

enum class Sign { minus = -1, plus = 1 };

/// Label T_i^s of a ring tetrahedron, i in {1,2,3}.
struct RingLabel {
  int index;
  Sign sign;

  std::string name() const;  // "T1-", "T3+", ...
  friend bool operator==(const RingLabel&, const RingLabel&) = default;
};

/// Cyclic ring order T1-, T3+, T2-, T1+, T3-, T2+. Everything indexed by
/// "ring position" refers to this order.
inline constexpr std::array<RingLabel, 6> kRingOrder = {{{1, Sign::minus},
                                                         {3, Sign::plus},
                                                         {2, Sign::minus},
                                                         {1, Sign::plus},
                                                         {3, Sign::minus},
                                                         {2, Sign::plus}}};

int ring_position(const RingLabel& label);
/// Parses "T1-" style names; throws std::invalid_argument.
RingLabel parse_ring_label(std::string_view name);

namespace ring {
inline constexpr int T1m = 0, T3p = 1, T2m = 2, T1p = 3, T3m = 4, T2p = 5;
}

/// Vertex `vertex` (0..3) of the tetrahedron at ring position `tetra`.
struct VertexRef {
  int tetra;
  int vertex;
  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

/// The shared vertex of the tetrahedra at ring positions k and k+1 (mod 6).
/// Names follow the spatial hexagon P13 Q23 P12 Q13 P23 Q12.
struct Contact {
  std::string name;
  VertexRef first;
  VertexRef second;
  Vec3 position;
};

inline constexpr std::array<std::string_view, 6> kContactNames = {"P13", "Q23", "P12",
                                                                  "Q13", "P23", "Q12"};

struct SixRing {
  std::array<Tetrahedron, 6> tetra;
  std::array<Contact, 6> contacts;

  const Tetrahedron& operator[](const RingLabel& l) const {
    return tetra[static_cast<size_t>(ring_position(l))];
  }
  const Vec3& at(const VertexRef& r) const {
    return tetra[static_cast<size_t>(r.tetra)][r.vertex];
  }
  std::array<Vec3, 6> barycenters() const;
  const Contact& contact(std::string_view name) const;
  /// True when `r` is one of the two slots of some contact.
  bool is_contact_slot(const VertexRef& r) const;

  /// Same contact bookkeeping, new tetrahedra. Contact positions are taken
  /// from the first slot, and the second slot is snapped onto it when the two
  /// agree within 1e-9 so shared vertices stay bitwise identical.
  SixRing with_tetrahedra(const std::array<Tetrahedron, 6>& t) const;
  SixRing transformed(const Mat3& m, const Vec3& shift = Vec3::Zero()) const;
};

/// target = source + sum_k coeffs[k] * lambda_k
struct PeriodMark {
  VertexRef source;
  VertexRef target;
  std::array<int, 3> coeffs;
};

struct PeriodicPlacement {
  SixRing ring;
  PeriodLattice lattice;
  std::array<PeriodMark, 6> marks;
  /// Set by constructions that detect dependent generators.
  bool degenerate = false;

  Vec3 realized_period(const PeriodMark& m) const { return ring.at(m.target) - ring.at(m.source); }
  PeriodicPlacement transformed(const Mat3& m, const Vec3& shift = Vec3::Zero()) const;
};

/// The ring tetrahedron T1- touching the cube at (1,0,1).
Tetrahedron reference_tetrahedron();
/// Center of the ideal ring, (1,1,1)/sqrt(2).
Vec3 ideal_ring_center();
/// The generators sqrt2(1,-1,-1), sqrt2(-1,1,-1), sqrt2(-1,-1,1).
PeriodLattice ideal_lattice();
/// The 24 tetrahedra of the cage around the origin, deterministic order.
std::vector<Tetrahedron> ideal_cage_tetrahedra();

/// The maximal-symmetry placement (cached; identical on every call).
const PeriodicPlacement& ideal_sodalite();

/// For every distinct ring vertex and signed generator, records a mark when
/// the translate lands on another ring vertex within `tol`. Reverse
/// duplicates are dropped; throws unless exactly two marks per generator
/// remain.
std::array<PeriodMark, 6> detect_period_marks(const SixRing& ring, const PeriodLattice& lattice,
                                              double tol = 1e-9);

/// Reads the generators off the marks: lambda_k is the realized vector of the
/// first mark whose coefficients are +-e_k. Throws if a generator is missing.
PeriodLattice lattice_from_marks(const SixRing& ring, const std::array<PeriodMark, 6>& marks);

struct ValidationCheck {
  std::string name;
  bool ok = true;
  double worst = 0.0;  // largest deviation seen; for "lattice", |det| / prod |g_k|
  std::vector<std::string> failures;
};

struct ValidationReport {
  double tol = 0.0;
  std::vector<ValidationCheck> checks;

  bool ok() const;
  const ValidationCheck& check(std::string_view name) const;
  std::string summary() const;
};

/// Checks, in order: "regular_tetrahedra", "contacts", "period_marks",
/// "generator_pairs", "lattice".
ValidationReport validate_placement(const PeriodicPlacement& p, double tol);

struct QuotientGraph {
  struct Edge {
    int u;
    int v;
    std::array<int, 3> period;  // in the generator basis
  };
  int vertex_orbits = 0;
  int edge_orbits = 0;
  std::vector<Edge> edges;
  /// Orbit id of each of the 24 vertex slots (ring position * 4 + vertex).
  std::array<int, 24> slot_orbit{};

  std::vector<int> degrees() const;
  bool connected() const;
};

/// Throws GeometryError if the placement does not validate at 1e-9.
QuotientGraph quotient_graph(const PeriodicPlacement& p);

struct SodaliteCage {
  std::vector<Tetrahedron> tetrahedra;
  /// Ring position and lattice coefficients that produce each tetrahedron.
  std::vector<std::pair<int, std::array<int, 3>>> source;
  ConvexCell hull;  // of the barycenters
  Vec3 center;  // mean of the barycenters
};

/// The 24 lattice translates of ring tetrahedra forming one cage. The
/// (ring position, translation) pattern is taken from the ideal cage around
/// the origin and applied to `p`. Throws if `p` does not validate at 1e-8.
SodaliteCage sodalite_cage(const PeriodicPlacement& p);

/// Ring tetrahedra translated by n1 g1 + n2 g2 + n3 g3 for all n in
/// [-shells, shells]^3; coefficient triples in lexicographic order, ring
/// order inside each triple.
std::vector<Tetrahedron> generate_patch(const PeriodicPlacement& p, int shells);

}  // namespace sodalite

#endif  // SODALITE_FRAMEWORK_HPP_
