// Helpers shared by the unit tests.

#ifndef SODALITE_TESTS_SUPPORT_HPP_
#define SODALITE_TESTS_SUPPORT_HPP_

#include <random>

#include "sodalite/deform_central.hpp"
#include "sodalite/framework.hpp"

namespace sodalite::testing {

inline double ring_distance(const SixRing& a, const SixRing& b) {
  double d = 0.0;
  for (size_t k = 0; k < 6; ++k)
    for (int i = 0; i < 4; ++i)
      d = std::max(d, (a.tetra[k][i] - b.tetra[k][i]).norm());
  return d;
}

inline RigidMotion random_motion(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RigidMotion g;
  g.rotation = random_rotation(rng);
  g.translation = Vec3(standard_normal(rng), standard_normal(rng), standard_normal(rng));
  return g;
}

inline PeriodicPlacement moved(const PeriodicPlacement& p, const RigidMotion& g) {
  return p.transformed(g.rotation.matrix(), g.translation);
}

}  // namespace sodalite::testing

#endif  // SODALITE_TESTS_SUPPORT_HPP_
