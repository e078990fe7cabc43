// Periodic constraint system of a 6-ring placement: squared edge lengths plus
// period identifications, its Jacobian, trivial motions and flex counts.

#ifndef SODALITE_RIGIDITY_HPP_
#define SODALITE_RIGIDITY_HPP_

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sodalite/framework.hpp"
#include "sodalite/geom.hpp"

namespace sodalite {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ConstraintSystem {
  struct Period {
    int source;  // vertex variable index
    int target;
    std::array<int, 3> coeffs;
  };

  /// Vertex variable of each slot (ring position * 4 + vertex).
  std::array<int, 24> slot_variable{};
  int vertex_count = 0;  // 18 for a ring
  std::vector<std::array<int, 2>> edges;  // vertex variable pairs
  std::vector<Period> periods;
  double edge_length_sq = kEdge * kEdge;
  VectorXd base;  // packed base placement

  int variables() const { return 3 * vertex_count + 9; }
  int constraints() const { return static_cast<int>(edges.size() + 3 * periods.size()); }

  /// Vertex coordinates in variable order, then g1, g2, g3.
  VectorXd pack(const PeriodicPlacement& p) const;
  /// Edge rows |x_u - x_v|^2 - edge^2 first, then x_t - x_s - sum n_k g_k.
  VectorXd residual(const VectorXd& x) const;
  MatrixXd jacobian(const VectorXd& x) const;
};

/// Throws GeometryError unless `p` validates at 1e-9.
ConstraintSystem build_constraint_system(const PeriodicPlacement& p);

/// Columns: translations along e1, e2, e3 (lattice untouched), then
/// infinitesimal rotations about e1, e2, e3 through the origin.
MatrixXd trivial_motion_basis(const PeriodicPlacement& p);

/// Singular values of `m` padded with zero rows to a square matrix, so there
/// is one value per column, descending.
VectorXd full_singular_values(const MatrixXd& m);
/// Number of singular values above tol * sigma_max.
int numerical_rank(const VectorXd& singular_values, double tol);
int numerical_rank(const MatrixXd& m, double tol);
/// Orthonormal basis of {x : m x ~ 0} at relative tolerance tol.
MatrixXd kernel_basis(const MatrixXd& m, double tol);

struct FlexReport {
  double tol = 0.0;
  int kernel_dimension = 0;  // including trivial motions
  int nontrivial = 0;
  VectorXd singular_values;  // one per variable, descending
  MatrixXd basis;  // variables x nontrivial, orthonormal, orthogonal to trivial motions
  /// Largest |J t| over the trivial motions, relative to sigma_max.
  double trivial_residual = 0.0;
};

/// Throws GeometryError when the kernel cannot hold the six trivial motions.
FlexReport flex_dimension(const PeriodicPlacement& p, double tol = 1e-8);

struct LinkageReport {
  int variables = 0;
  int constraints = 0;
  int rank = 0;
  int dof = 0;  // kernel dimension minus 6
  /// sigma_{rank-1} / sigma_rank; the discarded value is floored at
  /// machine epsilon times sigma_max.
  double gap_ratio = 0.0;
};

/// Edge-length-only system of tetrahedra sharing vertices; vertices closer
/// than merge_tol are one joint.
LinkageReport linkage_dof(std::span<const Tetrahedron> tetrahedra, double tol = 1e-8,
                          double merge_tol = 1e-9);
LinkageReport finite_linkage_report(const SixRing& ring, double tol = 1e-8);
int finite_linkage_dof(const SixRing& ring, double tol = 1e-8);

}  // namespace sodalite

#endif  // SODALITE_RIGIDITY_HPP_
