#include "sodalite/rigidity.hpp"

#include <algorithm>
#include <limits>

namespace sodalite {

VectorXd ConstraintSystem::pack(const PeriodicPlacement& p) const {
  VectorXd x = VectorXd::Zero(variables());
  for (int s = 23; s >= 0; --s)
    x.segment<3>(3 * slot_variable[static_cast<size_t>(s)]) = p.ring.at({s / 4, s % 4});
  for (int k = 0; k < 3; ++k)
    x.segment<3>(3 * vertex_count + 3 * k) = p.lattice.g[static_cast<size_t>(k)];
  return x;
}

VectorXd ConstraintSystem::residual(const VectorXd& x) const {
  if (x.size() != variables())
    throw std::invalid_argument("ConstraintSystem::residual: wrong variable count");
  VectorXd r(constraints());
  int row = 0;
  for (const auto& [u, v] : edges)
    r(row++) = (x.segment<3>(3 * u) - x.segment<3>(3 * v)).squaredNorm() - edge_length_sq;
  const int g0 = 3 * vertex_count;
  for (const Period& pr : periods) {
    Vec3 d = x.segment<3>(3 * pr.target) - x.segment<3>(3 * pr.source);
    for (int k = 0; k < 3; ++k)
      d -= pr.coeffs[static_cast<size_t>(k)] * x.segment<3>(g0 + 3 * k);
    r.segment<3>(row) = d;
    row += 3;
  }
  return r;
}

MatrixXd ConstraintSystem::jacobian(const VectorXd& x) const {
  if (x.size() != variables())
    throw std::invalid_argument("ConstraintSystem::jacobian: wrong variable count");
  MatrixXd j = MatrixXd::Zero(constraints(), variables());
  int row = 0;
  for (const auto& [u, v] : edges) {
    Vec3 d = 2.0 * (x.segment<3>(3 * u) - x.segment<3>(3 * v));
    j.block<1, 3>(row, 3 * u) = d.transpose();
    j.block<1, 3>(row, 3 * v) = -d.transpose();
    ++row;
  }
  const int g0 = 3 * vertex_count;
  for (const Period& pr : periods) {
    j.block<3, 3>(row, 3 * pr.target) += Mat3::Identity();
    j.block<3, 3>(row, 3 * pr.source) -= Mat3::Identity();
    for (int k = 0; k < 3; ++k)
      j.block<3, 3>(row, g0 + 3 * k) -= pr.coeffs[static_cast<size_t>(k)] * Mat3::Identity();
    row += 3;
  }
  return j;
}

ConstraintSystem build_constraint_system(const PeriodicPlacement& p) {
  ValidationReport rep = validate_placement(p, 1e-9);
  if (!rep.ok())
    fail("build_constraint_system: invalid placement\n" + rep.summary());
  ConstraintSystem cs;
  cs.slot_variable.fill(-1);
  for (const Contact& c : p.ring.contacts) {
    int first = c.first.tetra * 4 + c.first.vertex;
    int second = c.second.tetra * 4 + c.second.vertex;
    // Assigned in slot order below; remember the pairing as a negative link.
    cs.slot_variable[static_cast<size_t>(std::max(first, second))] = -2 - std::min(first, second);
  }
  for (size_t s = 0; s < 24; ++s) {
    int& v = cs.slot_variable[s];
    v = v <= -2 ? cs.slot_variable[static_cast<size_t>(-2 - v)] : cs.vertex_count++;
  }
  for (int k = 0; k < 6; ++k)
    for (const auto& [a, b] : kTetraEdges)
      cs.edges.push_back({cs.slot_variable[static_cast<size_t>(4 * k + a)],
                          cs.slot_variable[static_cast<size_t>(4 * k + b)]});
  for (const PeriodMark& m : p.marks)
    cs.periods.push_back({cs.slot_variable[static_cast<size_t>(4 * m.source.tetra + m.source.vertex)],
                          cs.slot_variable[static_cast<size_t>(4 * m.target.tetra + m.target.vertex)],
                          m.coeffs});
  cs.base = cs.pack(p);
  return cs;
}

MatrixXd trivial_motion_basis(const PeriodicPlacement& p) {
  ConstraintSystem cs = build_constraint_system(p);
  MatrixXd t = MatrixXd::Zero(cs.variables(), 6);
  for (int v = 0; v < cs.vertex_count; ++v)
    t.block<3, 3>(3 * v, 0) = Mat3::Identity();
  for (int a = 0; a < 3; ++a) {
    Vec3 w = Vec3::Unit(a);
    for (int i = 0; i < cs.variables() / 3; ++i)
      t.block<3, 1>(3 * i, 3 + a) = w.cross(Vec3(cs.base.segment<3>(3 * i)));
  }
  return t;
}

VectorXd full_singular_values(const MatrixXd& m) {
  const Eigen::Index n = std::max(m.rows(), m.cols());
  MatrixXd sq = MatrixXd::Zero(n, m.cols());
  sq.topRows(m.rows()) = m;
  Eigen::JacobiSVD<MatrixXd> svd(sq);
  return svd.singularValues();
}

int numerical_rank(const VectorXd& sv, double tol) {
  if (sv.size() == 0 || sv(0) == 0.0)
    return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0))
      ++r;
  return r;
}

int numerical_rank(const MatrixXd& m, double tol) { return numerical_rank(full_singular_values(m), tol); }

MatrixXd kernel_basis(const MatrixXd& m, double tol) {
  const Eigen::Index n = std::max(m.rows(), m.cols());
  MatrixXd sq = MatrixXd::Zero(n, m.cols());
  sq.topRows(m.rows()) = m;
  Eigen::JacobiSVD<MatrixXd> svd(sq, Eigen::ComputeFullV);
  int r = numerical_rank(svd.singularValues(), tol);
  return svd.matrixV().rightCols(m.cols() - r);
}

FlexReport flex_dimension(const PeriodicPlacement& p, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("flex_dimension: tol must be positive");
  ConstraintSystem cs = build_constraint_system(p);
  MatrixXd j = cs.jacobian(cs.base);
  FlexReport rep;
  rep.tol = tol;
  rep.singular_values = full_singular_values(j);
  MatrixXd kernel = kernel_basis(j, tol);
  rep.kernel_dimension = static_cast<int>(kernel.cols());
  if (rep.kernel_dimension < 6)
    fail("flex_dimension: kernel of dimension " + std::to_string(rep.kernel_dimension) +
         " cannot contain the trivial motions; tolerance " + std::to_string(tol) + " too small");

  MatrixXd triv = trivial_motion_basis(p);
  const double smax = rep.singular_values(0);
  for (Eigen::Index c = 0; c < 6; ++c)
    rep.trivial_residual =
        std::max(rep.trivial_residual, (j * triv.col(c)).norm() / (smax * triv.col(c).norm()));

  Eigen::HouseholderQR<MatrixXd> qr(triv);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(triv.rows(), 6);
  MatrixXd rest = kernel - q * (q.transpose() * kernel);
  Eigen::JacobiSVD<MatrixXd> svd(rest, Eigen::ComputeThinU);
  int keep = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 0.5)
      ++keep;
  rep.nontrivial = keep;
  rep.basis = svd.matrixU().leftCols(keep);
  return rep;
}

LinkageReport linkage_dof(std::span<const Tetrahedron> tetrahedra, double tol, double merge_tol) {
  std::vector<Vec3> joints;
  std::vector<std::array<int, 2>> edges;
  for (const Tetrahedron& t : tetrahedra) {
    std::array<int, 4> id{};
    for (int i = 0; i < 4; ++i) {
      auto it = std::find_if(joints.begin(), joints.end(),
                             [&](const Vec3& x) { return (x - t[i]).norm() <= merge_tol; });
      id[static_cast<size_t>(i)] = static_cast<int>(it - joints.begin());
      if (it == joints.end())
        joints.push_back(t[i]);
    }
    for (const auto& [a, b] : kTetraEdges)
      edges.push_back({id[static_cast<size_t>(a)], id[static_cast<size_t>(b)]});
  }
  LinkageReport rep;
  rep.variables = 3 * static_cast<int>(joints.size());
  rep.constraints = static_cast<int>(edges.size());
  MatrixXd j = MatrixXd::Zero(rep.constraints, rep.variables);
  for (size_t row = 0; row < edges.size(); ++row) {
    auto [u, v] = edges[row];
    Vec3 d = 2.0 * (joints[static_cast<size_t>(u)] - joints[static_cast<size_t>(v)]);
    j.block<1, 3>(static_cast<Eigen::Index>(row), 3 * u) = d.transpose();
    j.block<1, 3>(static_cast<Eigen::Index>(row), 3 * v) = -d.transpose();
  }
  VectorXd sv = full_singular_values(j);
  rep.rank = numerical_rank(sv, tol);
  rep.dof = rep.variables - rep.rank - 6;
  if (rep.rank > 0) {
    double floor = std::numeric_limits<double>::epsilon() * sv(0);
    double discarded = rep.rank < sv.size() ? std::max(sv(rep.rank), floor) : floor;
    rep.gap_ratio = sv(rep.rank - 1) / discarded;
  }
  return rep;
}

LinkageReport finite_linkage_report(const SixRing& ring, double tol) {
  return linkage_dof(std::span<const Tetrahedron>(ring.tetra), tol);
}

int finite_linkage_dof(const SixRing& ring, double tol) { return finite_linkage_report(ring, tol).dof; }

}  // namespace sodalite
