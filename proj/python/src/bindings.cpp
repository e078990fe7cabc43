#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sodalite/deform_central.hpp"
#include "sodalite/deform_dihedral.hpp"
#include "sodalite/framework.hpp"
#include "sodalite/io.hpp"
#include "sodalite/rigidity.hpp"
#include "sodalite/symmetry.hpp"

namespace py = pybind11;
using namespace sodalite;

namespace {

// 24 x 3, ring position major.
Eigen::MatrixXd vertex_matrix(const PeriodicPlacement& p) {
  Eigen::MatrixXd m(24, 3);
  for (int k = 0; k < 6; ++k)
    for (int i = 0; i < 4; ++i)
      m.row(4 * k + i) = p.ring.tetra[static_cast<size_t>(k)][i].transpose();
  return m;
}

Eigen::Matrix3d generator_rows(const PeriodicPlacement& p) {
  Eigen::Matrix3d m;
  for (int k = 0; k < 3; ++k)
    m.row(k) = p.lattice.g[static_cast<size_t>(k)].transpose();
  return m;
}

Rotation rotation_from(const std::array<double, 4>& q) { return Rotation(q[0], q[1], q[2], q[3]); }

py::dict validation_dict(const ValidationReport& r) {
  py::dict checks;
  for (const ValidationCheck& c : r.checks)
    checks[py::str(c.name)] = py::dict(py::arg("ok") = c.ok, py::arg("worst") = c.worst,
                                       py::arg("failures") = c.failures);
  return py::dict(py::arg("ok") = r.ok(), py::arg("tol") = r.tol, py::arg("checks") = checks);
}

py::dict tilt_point_dict(const TiltPoint& pt) {
  return py::dict(py::arg("rho") = pt.params.rho, py::arg("phi") = pt.params.phi,
                  py::arg("branch") = pt.params.branch, py::arg("lattice_volume") = pt.lattice_volume,
                  py::arg("central_residual") = pt.central_residual, py::arg("d3_residual") = pt.d3_residual,
                  py::arg("periodicity_residual") = pt.periodicity_residual,
                  py::arg("tetrahedrite") = pt.tetrahedrite);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Periodic frameworks of regular tetrahedra around the sodalite placement";

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<DocumentError>(m, "DocumentError", PyExc_ValueError);

  py::class_<PeriodicPlacement>(m, "Placement")
      .def_property_readonly("vertices", &vertex_matrix, "24 x 3 vertex slots, four per ring tetrahedron")
      .def_property_readonly("generators", &generator_rows, "lattice generators as rows")
      .def_readonly("degenerate", &PeriodicPlacement::degenerate)
      .def_property_readonly("lattice_volume", [](const PeriodicPlacement& p) { return lattice_volume(p.lattice); })
      .def("validate", [](const PeriodicPlacement& p, double tol) { return validation_dict(validate_placement(p, tol)); },
           py::arg("tol") = 1e-9)
      .def("central_residual", [](const PeriodicPlacement& p) { return central_symmetry_residual(p.ring).value; })
      .def("d3_residual", [](const PeriodicPlacement& p) { return d3_residual(p.ring).value; })
      .def("periodicity_residual", [](const PeriodicPlacement& p) { return periodicity_residual(p.ring); })
      .def("bisector_residual", [](const PeriodicPlacement& p) { return distant_edge_bisector_residual(p.ring); })
      .def("is_tetrahedrite", [](const PeriodicPlacement& p, double tol) { return detect_tetrahedrite(p, tol); },
           py::arg("tol") = 1e-8)
      .def("moved",
           [](const PeriodicPlacement& p, const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
             return p.transformed(r, t);
           },
           py::arg("rotation"), py::arg("shift") = Eigen::Vector3d::Zero())
      .def("to_json", &placement_to_json)
      .def("to_obj", [](const PeriodicPlacement& p) { return export_obj(std::span<const Tetrahedron>(p.ring.tetra)); })
      .def("patch_obj",
           [](const PeriodicPlacement& p, int shells) {
             std::vector<Tetrahedron> t = generate_patch(p, shells);
             return export_obj(std::span<const Tetrahedron>(t));
           },
           py::arg("shells") = 1);

  m.def("ideal", []() { return ideal_sodalite(); });
  m.def("from_json", &placement_from_json, py::arg("text"));
  m.def("read_placement", &read_placement, py::arg("path"));
  m.def("write_placement", &write_placement, py::arg("path"), py::arg("placement"));

  m.def("central_deform",
        [](const std::array<double, 4>& r_a, const std::array<double, 4>& r_b) {
          return central_deform(CentralParams{rotation_from(r_a), rotation_from(r_b)});
        },
        py::arg("r_a") = std::array<double, 4>{1, 0, 0, 0}, py::arg("r_b") = std::array<double, 4>{1, 0, 0, 0},
        "Rotations as (w, x, y, z) quaternions");
  m.def("sample_central", &sample_central, py::arg("n"), py::arg("seed"));
  m.def("central_tangent_basis", &central_tangent_basis, py::arg("h") = 1e-5);

  m.def("trace_tilt_curve",
        [](double step, int max_steps, int direction) {
          TiltTrace tr = trace_tilt_curve(step, max_steps, direction);
          py::list points;
          std::vector<PeriodicPlacement> placements;
          for (const TiltPoint& pt : tr.points) {
            points.append(tilt_point_dict(pt));
            placements.push_back(pt.placement);
          }
          return py::dict(py::arg("points") = points, py::arg("placements") = placements,
                          py::arg("stop_reason") = tr.stop_reason, py::arg("csv") = tilt_csv(tr));
        },
        py::arg("step") = 0.005, py::arg("max_steps") = 400, py::arg("direction") = 1);
  m.def("build_d3_ring",
        [](double rho, double phi, int branch) { return d3_placement(build_d3_ring(D3RingParams{rho, phi, branch})); },
        py::arg("rho"), py::arg("phi"), py::arg("branch") = 1);
  m.def("ideal_d3_params", []() {
    D3RingParams p = ideal_d3_params();
    return py::make_tuple(p.rho, p.phi, p.branch);
  });
  m.def("build_centro_d3_ring", &build_centro_d3_ring, py::arg("rho"));
  m.def("centro_d3_fold", &centro_d3_fold);

  m.def("flex_dimension",
        [](const PeriodicPlacement& p, double tol) {
          FlexReport r = flex_dimension(p, tol);
          return py::dict(py::arg("kernel_dimension") = r.kernel_dimension, py::arg("nontrivial") = r.nontrivial,
                          py::arg("singular_values") = r.singular_values, py::arg("basis") = r.basis,
                          py::arg("trivial_residual") = r.trivial_residual);
        },
        py::arg("placement"), py::arg("tol") = 1e-8);
  m.def("jacobian", [](const PeriodicPlacement& p) {
    ConstraintSystem cs = build_constraint_system(p);
    return cs.jacobian(cs.base);
  });
  m.def("finite_linkage_dof",
        [](const PeriodicPlacement& p, double tol) {
          LinkageReport r = finite_linkage_report(p.ring, tol);
          return py::dict(py::arg("dof") = r.dof, py::arg("rank") = r.rank, py::arg("variables") = r.variables,
                          py::arg("constraints") = r.constraints, py::arg("gap_ratio") = r.gap_ratio);
        },
        py::arg("placement"), py::arg("tol") = 1e-8);

  m.def("kelvin_cell", []() {
    ConvexCell c = voronoi_cell(ideal_lattice());
    Eigen::MatrixXd v(static_cast<Eigen::Index>(c.vertices.size()), 3);
    for (size_t i = 0; i < c.vertices.size(); ++i)
      v.row(static_cast<Eigen::Index>(i)) = c.vertices[i].transpose();
    return py::dict(py::arg("vertices") = v, py::arg("faces") = c.faces, py::arg("edges") = c.edges(),
                    py::arg("obj") = export_cell_obj(c));
  });
  m.def("cube_group_order", []() { return cube_group().size(); });
  m.def("transposition_action", [](int i, int j) { return ring_label_action(SignedPermutation::transposition(i, j)).cycles(); });
}
