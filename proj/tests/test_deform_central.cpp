#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sodalite/deform_central.hpp"
#include "sodalite/symmetry.hpp"
#include "support.hpp"

using namespace sodalite;

TEST_CASE("identity parameters reproduce the ideal placement") {
  PeriodicPlacement p = central_deform({});
  const PeriodicPlacement& ideal = ideal_sodalite();
  CHECK(testing::ring_distance(p.ring, ideal.ring) < 1e-12);
  for (size_t k = 0; k < 3; ++k)
    CHECK((p.lattice.g[k] - ideal.lattice.g[k]).norm() < 1e-12);
  CHECK_FALSE(p.degenerate);
}

TEST_CASE("T2+ and the contacts with it stay fixed") {
  PeriodicPlacement p = central_deform(sample_central_params(3, 0));
  const SixRing& ideal = ideal_sodalite().ring;
  for (int i = 0; i < 4; ++i)
    CHECK((p.ring.tetra[ring::T2p][i] - ideal.tetra[ring::T2p][i]).norm() < 1e-15);
  CHECK((p.ring.contact("Q12").position - ideal.contact("Q12").position).norm() < 1e-15);
  CHECK((p.ring.contact("P23").position - ideal.contact("P23").position).norm() < 1e-15);
}

TEST_CASE("random samples stay on the component") {
  int degenerate = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    PeriodicPlacement p = central_deform(sample_central_params(42, i));
    if (p.degenerate) {
      ++degenerate;
      continue;
    }
    ValidationReport rep = validate_placement(p, 1e-9);
    CHECK_MESSAGE(rep.ok(), "sample " << i << "\n" << rep.summary());
    CHECK(central_symmetry_residual(p.ring).value < 1e-10);
    for (const Contact& c : p.ring.contacts)
      CHECK((p.ring.at(c.first) - p.ring.at(c.second)).norm() < 1e-12);
  }
  CHECK(degenerate < 10);
}

TEST_CASE("sampling is deterministic") {
  CHECK(sample_central(0, 42).empty());
  CHECK_THROWS_AS(sample_central(-1, 42), std::invalid_argument);
  auto a = sample_central(5, 42);
  auto b = sample_central(5, 42);
  auto c = sample_central(5, 43);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(testing::ring_distance(a[i].ring, b[i].ring) == 0.0);
    CHECK(testing::ring_distance(a[i].ring, c[i].ring) > 0.0);
  }
  // Sample i depends only on (seed, i).
  CHECK(testing::ring_distance(sample_central(3, 42)[2].ring, a[2].ring) == 0.0);
}

TEST_CASE("random rotations are unit and spread out") {
  std::mt19937_64 rng = sample_stream(1, 2);
  Vec3 mean = Vec3::Zero();
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    Rotation r = random_rotation(rng);
    CHECK(std::abs(r.norm() - 1.0) < 1e-15);
    mean += r(Vec3::UnitZ());
  }
  // Uniform rotations send e3 uniformly over the sphere; mean ~ 0 with sd 1/sqrt(3n).
  CHECK((mean / n).norm() < 5.0 / std::sqrt(3.0 * n));
}

TEST_CASE("lattice determinant along a rotation path") {
  const Vec3 axis = Vec3(1, 1, 1).normalized();
  auto det = [&](double th) {
    Rotation r = Rotation::about_axis(axis, th);
    return central_deform({r, r}).lattice.determinant();
  };
  const int n = 400;
  double prev = det(0.0);
  int crossings = 0;
  for (int i = 1; i <= n; ++i) {
    double th = std::numbers::pi * i / n;
    double cur = det(th);
    CHECK(std::abs(cur - prev) < 0.5);  // continuity at this resolution
    if ((cur > 0) != (prev > 0)) {
      ++crossings;
      double lo = th - std::numbers::pi / n, hi = th;
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        ((det(mid) > 0) == (prev > 0) ? lo : hi) = mid;
      }
      Rotation r = Rotation::about_axis(axis, 0.5 * (lo + hi));
      CHECK(central_deform({r, r}).degenerate);
    }
    prev = cur;
  }
  MESSAGE("determinant sign changes on [0, pi]: " << crossings);
}

TEST_CASE("equivariance under a global rotation") {
  const Rotation g(0.3, -0.5, 0.7, 0.2);
  const PeriodicPlacement base = ideal_sodalite().transformed(g.matrix());
  for (std::uint64_t i = 0; i < 5; ++i) {
    CentralParams p = sample_central_params(9, i);
    CentralParams conj{g * p.r_a * g.inverse(), g * p.r_b * g.inverse()};
    PeriodicPlacement lhs = central_deform(conj, base);
    PeriodicPlacement rhs = central_deform(p).transformed(g.matrix());
    CHECK(testing::ring_distance(lhs.ring, rhs.ring) < 1e-9);
    for (size_t k = 0; k < 3; ++k)
      CHECK((lhs.lattice.g[k] - rhs.lattice.g[k]).norm() < 1e-9);
  }
}

TEST_CASE("Lipschitz bound near the identity") {
  const double eps = 1e-6;
  double k_max = 0.0;
  for (int col = 0; col < 6; ++col) {
    CentralParams p;
    (col < 3 ? p.r_a : p.r_b) = Rotation::about_axis(Vec3::Unit(col % 3), eps);
    k_max = std::max(k_max, testing::ring_distance(central_deform(p).ring, ideal_sodalite().ring) / eps);
  }
  MESSAGE("measured Lipschitz constant " << k_max);
  CHECK(k_max <= 10.0);
}

TEST_CASE("tangent basis") {
  CHECK_THROWS_AS(central_tangent_basis(0.0), std::invalid_argument);
  CHECK_THROWS_AS(central_tangent_basis(1e-3), std::invalid_argument);
  const double h = 1e-4;
  MatrixXd t = central_tangent_basis(h);
  MatrixXd t2 = central_tangent_basis(h / 2);
  REQUIRE(t.rows() == 63);
  REQUIRE(t.cols() == 6);
  ConstraintSystem cs = build_constraint_system(ideal_sodalite());
  MatrixXd j = cs.jacobian(cs.base);
  for (int c = 0; c < 6; ++c)
    CHECK((j * t.col(c)).norm() < 1e-6);
  MatrixXd normalized = t;
  for (int c = 0; c < 6; ++c)
    normalized.col(c).normalize();
  VectorXd sv = full_singular_values(normalized);
  CHECK(sv(5) > 1e-6);
  CHECK(numerical_rank(normalized, 1e-6) == 6);
  CHECK((t - t2).cwiseAbs().maxCoeff() < 10 * h * h);
}
