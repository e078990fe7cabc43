#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sodalite/deform_dihedral.hpp"
#include "sodalite/rigidity.hpp"
#include "support.hpp"

using namespace sodalite;

namespace {

MatrixXd finite_difference_jacobian(const ConstraintSystem& cs, const VectorXd& x, double h) {
  MatrixXd j(cs.constraints(), cs.variables());
  for (int c = 0; c < cs.variables(); ++c) {
    VectorXd xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    j.col(c) = (cs.residual(xp) - cs.residual(xm)) / (2 * h);
  }
  return j;
}

std::vector<PeriodicPlacement> test_placements() {
  return {ideal_sodalite(), central_deform(sample_central_params(42, 0)),
          trace_tilt_curve(0.005, 30, 1).points.back().placement, build_centro_d3_ring(0.95)};
}

}  // namespace

TEST_CASE("structural counts") {
  ConstraintSystem cs = build_constraint_system(ideal_sodalite());
  CHECK(cs.vertex_count == 18);
  CHECK(cs.variables() == 63);
  CHECK(cs.constraints() == 54);
  CHECK(cs.edges.size() == 36);
  CHECK(cs.periods.size() == 6);
  CHECK(cs.variables() - cs.constraints() - 6 == 3);
  CHECK(cs.residual(cs.base).norm() < 1e-10);
  for (const PeriodicPlacement& p : test_placements())
    CHECK(build_constraint_system(p).residual(build_constraint_system(p).base).cwiseAbs().maxCoeff() < 1e-8);

  PeriodicPlacement broken = ideal_sodalite();
  broken.marks[1].coeffs = {0, 0, 1};
  CHECK_THROWS_AS(build_constraint_system(broken), GeometryError);
}

TEST_CASE("analytic Jacobian against finite differences") {
  for (const PeriodicPlacement& p : test_placements()) {
    ConstraintSystem cs = build_constraint_system(p);
    MatrixXd j = cs.jacobian(cs.base);
    for (double h : {1e-6, 5e-7}) {
      double err = (j - finite_difference_jacobian(cs, cs.base, h)).cwiseAbs().maxCoeff();
      CHECK(err < 1e-6);
    }
  }
}

TEST_CASE("Jacobian structure") {
  ConstraintSystem cs = build_constraint_system(ideal_sodalite());
  VectorXd x = cs.base;
  VectorXd y = x + 0.01 * VectorXd::Ones(x.size());
  MatrixXd a = cs.jacobian(x), b = cs.jacobian(y);
  const int rows = static_cast<int>(cs.edges.size());
  CHECK((a.bottomRows(a.rows() - rows) - b.bottomRows(b.rows() - rows)).norm() == 0.0);

  // Moving one vertex changes exactly the constraints that mention it.
  const int v = 7;
  VectorXd z = x;
  z.segment<3>(3 * v) += Vec3(1e-3, -2e-3, 5e-4);
  VectorXd dr = cs.residual(z) - cs.residual(x);
  int row = 0;
  for (const auto& e : cs.edges) {
    bool touches = e[0] == v || e[1] == v;
    CHECK((std::abs(dr(row)) > 0) == touches);
    ++row;
  }
  for (const auto& pr : cs.periods) {
    bool touches = pr.source == v || pr.target == v;
    CHECK((dr.segment<3>(row).norm() > 0) == touches);
    row += 3;
  }
  CHECK_THROWS_AS(cs.jacobian(VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("trivial motions") {
  for (const PeriodicPlacement& p : test_placements()) {
    ConstraintSystem cs = build_constraint_system(p);
    MatrixXd t = trivial_motion_basis(p);
    MatrixXd j = cs.jacobian(cs.base);
    for (int c = 0; c < 6; ++c)
      CHECK((j * t.col(c)).norm() < 1e-10);
    CHECK(numerical_rank(t, 1e-10) == 6);
    CHECK(t.block(54, 0, 9, 3).norm() == 0.0);
  }
}

TEST_CASE("flex dimension") {
  const PeriodicPlacement& ideal = ideal_sodalite();
  FlexReport r = flex_dimension(ideal, 1e-8);
  MESSAGE("kernel " << r.kernel_dimension << ", nontrivial " << r.nontrivial);
  CHECK(r.nontrivial >= 3);
  CHECK(r.kernel_dimension == r.nontrivial + 6);
  CHECK(r.singular_values.size() == 63);
  CHECK(r.trivial_residual < 1e-12);
  MatrixXd gram = r.basis.transpose() * r.basis;
  CHECK((gram - MatrixXd::Identity(r.nontrivial, r.nontrivial)).norm() < 1e-10);
  CHECK((trivial_motion_basis(ideal).transpose() * r.basis).norm() < 1e-10);
  ConstraintSystem cs = build_constraint_system(ideal);
  CHECK((cs.jacobian(cs.base) * r.basis).norm() < 1e-8);

  for (double tol : {1e-10, 1e-9, 1e-7, 1e-6})
    CHECK(flex_dimension(ideal, tol).nontrivial == r.nontrivial);
  CHECK_THROWS_AS(flex_dimension(ideal, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(flex_dimension(ideal, 1e-40), GeometryError);

  SUBCASE("singular values under rigid motion") {
    PeriodicPlacement moved = testing::moved(ideal, testing::random_motion(4));
    VectorXd s = flex_dimension(moved, 1e-8).singular_values;
    for (int i = 0; i < 63; ++i)
      CHECK(std::abs(s(i) - r.singular_values(i)) <= 1e-9 * r.singular_values(0));
  }
}

TEST_CASE("finite linkages") {
  Tetrahedron t = ideal_sodalite().ring.tetra[0];
  LinkageReport one = linkage_dof(std::span<const Tetrahedron>(&t, 1));
  CHECK(one.variables == 12);
  CHECK(one.constraints == 6);
  CHECK(one.dof == 0);

  std::array<Tetrahedron, 2> pair = {ideal_sodalite().ring.tetra[0], ideal_sodalite().ring.tetra[1]};
  LinkageReport two = linkage_dof(pair);
  CHECK(two.variables == 21);
  CHECK(two.constraints == 12);
  CHECK(two.dof == 3);

  LinkageReport ring = finite_linkage_report(ideal_sodalite().ring);
  CHECK(ring.variables == 54);
  CHECK(ring.constraints == 36);
  CHECK(ring.dof == 12);
  CHECK(ring.gap_ratio > 1e4);
  CHECK(finite_linkage_dof(ideal_sodalite().ring) == 12);
}
