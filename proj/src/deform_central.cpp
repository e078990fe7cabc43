#include "sodalite/deform_central.hpp"

#include <cmath>
#include <numbers>

namespace sodalite {

namespace {

// Vertex i of the tetrahedron at position k is the inversion image of vertex
// map[k][i] of the tetrahedron at position k+3, as in the base ring.
std::array<std::array<int, 4>, 6> inversion_index_map(const SixRing& ring, const Vec3& c) {
  std::array<std::array<int, 4>, 6> map{};
  for (size_t k = 0; k < 6; ++k) {
    const Tetrahedron& from = ring.tetra[(k + 3) % 6];
    for (int i = 0; i < 4; ++i) {
      int best = -1;
      for (int j = 0; j < 4; ++j)
        if ((2.0 * c - from[j] - ring.tetra[k][i]).norm() <= 1e-9)
          best = j;
      if (best < 0)
        fail("central_deform: base ring is not centrally symmetric");
      map[k][static_cast<size_t>(i)] = best;
    }
  }
  return map;
}

}  // namespace

PeriodicPlacement central_deform(const CentralParams& params) {
  return central_deform(params, ideal_sodalite());
}

PeriodicPlacement central_deform(const CentralParams& params, const PeriodicPlacement& base) {
  const SixRing& b = base.ring;
  const Contact& q12 = b.contact("Q12");
  const Contact& p23 = b.contact("P23");
  const Contact& p13 = b.contact("P13");
  const Contact& q13 = b.contact("Q13");
  const auto map = inversion_index_map(b, 0.5 * (p13.position + q13.position));

  std::array<Tetrahedron, 6> t;
  t[ring::T2p] = b.tetra[ring::T2p];
  t[ring::T1m] = b.tetra[ring::T1m].transformed(RigidMotion::about_point(params.r_a, q12.position));
  t[ring::T3m] = b.tetra[ring::T3m].transformed(RigidMotion::about_point(params.r_b, p23.position));
  const Vec3 c = 0.5 * (t[ring::T1m][p13.first.vertex] + t[ring::T3m][q13.second.vertex]);
  for (int k : {ring::T1p, ring::T3p, ring::T2m}) {
    const Tetrahedron& from = t[static_cast<size_t>((k + 3) % 6)];
    for (int i = 0; i < 4; ++i)
      t[static_cast<size_t>(k)][i] = 2.0 * c - from[map[static_cast<size_t>(k)][static_cast<size_t>(i)]];
  }

  PeriodicPlacement p;
  p.ring = b.with_tetrahedra(t);
  p.marks = base.marks;
  p.lattice = lattice_from_marks(p.ring, p.marks);
  p.degenerate = std::abs(p.lattice.determinant()) < kDegenerateDet;
  return p;
}

double standard_normal(std::mt19937_64& rng) {
  // Box-Muller on two 53-bit uniforms in (0, 1].
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  double u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rotation random_rotation(std::mt19937_64& rng) {
  for (;;) {
    double w = standard_normal(rng), x = standard_normal(rng), y = standard_normal(rng),
           z = standard_normal(rng);
    if (w * w + x * x + y * y + z * z > 1e-12)
      return Rotation(w, x, y, z);
  }
}

std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

CentralParams sample_central_params(std::uint64_t seed, std::uint64_t index) {
  std::mt19937_64 rng = sample_stream(seed, index);
  CentralParams params;
  params.r_a = random_rotation(rng);
  params.r_b = random_rotation(rng);
  return params;
}

std::vector<PeriodicPlacement> sample_central(int n, std::uint64_t seed) {
  if (n < 0)
    throw std::invalid_argument("sample_central: n must be non-negative");
  std::vector<PeriodicPlacement> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out.push_back(central_deform(sample_central_params(seed, static_cast<std::uint64_t>(i))));
  return out;
}

MatrixXd central_tangent_basis(double h) {
  if (!(h > 0.0 && h <= 1e-4))
    throw std::invalid_argument("central_tangent_basis: h must lie in (0, 1e-4]");
  const ConstraintSystem cs = build_constraint_system(ideal_sodalite());
  MatrixXd out(cs.variables(), 6);
  for (int col = 0; col < 6; ++col) {
    Vec3 axis = Vec3::Unit(col % 3);
    auto at = [&](double t) {
      CentralParams params;
      (col < 3 ? params.r_a : params.r_b) = Rotation::about_axis(axis, t);
      return cs.pack(central_deform(params));
    };
    out.col(col) = (at(h) - at(-h)) / (2.0 * h);
  }
  return out;
}

}  // namespace sodalite
