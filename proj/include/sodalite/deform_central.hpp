// The centrally symmetric deformations: T2+ held fixed, T1- and T3- rotated
// about their contacts with T2+, the rest completed by inversion.

#ifndef SODALITE_DEFORM_CENTRAL_HPP_
#define SODALITE_DEFORM_CENTRAL_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "sodalite/framework.hpp"
#include "sodalite/geom.hpp"
#include "sodalite/rigidity.hpp"

namespace sodalite {

struct CentralParams {
  Rotation r_a;  // T1- about Q12
  Rotation r_b;  // T3- about P23
};

/// Flag threshold for dependent generators: |det| below this.
inline const double kDegenerateDet = 1e-9 * 16.0 * kSqrt2;

/// Builds the ring from `base` (the ideal placement by default). Marks are
/// carried over from the base; the lattice is read off the realized marks
/// and `degenerate` is set below kDegenerateDet.
PeriodicPlacement central_deform(const CentralParams& params);
PeriodicPlacement central_deform(const CentralParams& params, const PeriodicPlacement& base);

/// Uniform rotation from a normalized Gaussian quaternion.
Rotation random_rotation(std::mt19937_64& rng);
/// Standard normal draw with a fixed algorithm, so streams are portable.
double standard_normal(std::mt19937_64& rng);

/// Stream for sample `index` of a run with `seed`.
std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index);
CentralParams sample_central_params(std::uint64_t seed, std::uint64_t index);

std::vector<PeriodicPlacement> sample_central(int n, std::uint64_t seed);

/// Columns: d/dt central_deform along rotations about e1, e2, e3 for r_a,
/// then for r_b, at the identity, by central differences with step h.
/// Rows follow the variable layout of build_constraint_system(ideal).
MatrixXd central_tangent_basis(double h = 1e-5);

}  // namespace sodalite

#endif  // SODALITE_DEFORM_CENTRAL_HPP_
