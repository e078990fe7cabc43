// sodalite: command-line front end for the framework library.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sodalite/deform_central.hpp"
#include "sodalite/deform_dihedral.hpp"
#include "sodalite/framework.hpp"
#include "sodalite/io.hpp"
#include "sodalite/rigidity.hpp"
#include "sodalite/symmetry.hpp"

namespace fs = std::filesystem;
using namespace sodalite;

namespace {

constexpr int kInvalid = 2;

bool allow_invalid = false;

// Prints the report and returns the exit code it implies.
int report(const ValidationReport& rep, const std::string& what) {
  std::cout << what << ": " << (rep.ok() ? "valid" : "INVALID") << " (tol " << rep.tol << ")\n"
            << rep.summary();
  return rep.ok() || allow_invalid ? 0 : kInvalid;
}

int cmd_ideal(const std::string& out) {
  write_placement(out, ideal_sodalite());
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_validate(const std::string& path, double tol) {
  return report(validate_placement(read_placement(path), tol), path);
}

int cmd_sample_central(int n, std::uint64_t seed, const std::string& dir) {
  fs::create_directories(dir);
  int degenerate = 0, invalid = 0;
  double worst_central = 0.0;
  for (int i = 0; i < n; ++i) {
    PeriodicPlacement p = central_deform(sample_central_params(seed, static_cast<std::uint64_t>(i)));
    char name[32];
    std::snprintf(name, sizeof name, "sample_%05d.json", i);
    write_placement((fs::path(dir) / name).string(), p);
    if (p.degenerate) {
      ++degenerate;
      continue;
    }
    if (!validate_placement(p, 1e-9).ok())
      ++invalid;
    worst_central = std::max(worst_central, central_symmetry_residual(p.ring).value);
  }
  std::printf("samples %d seed %llu\n", n, static_cast<unsigned long long>(seed));
  std::printf("degenerate %d (fraction %.6f)\n", degenerate, n > 0 ? double(degenerate) / n : 0.0);
  std::printf("invalid %d\n", invalid);
  std::printf("max central residual %.3e\n", worst_central);
  return invalid == 0 || allow_invalid ? 0 : kInvalid;
}

int cmd_tilt(double step, int max_steps, int direction, const std::string& csv, int obj_every) {
  TiltTrace trace = trace_tilt_curve(step, max_steps, direction);
  write_text_file(csv, tilt_csv(trace));
  if (obj_every > 0) {
    fs::path base = fs::path(csv).replace_extension();
    for (size_t i = 0; i < trace.points.size(); i += static_cast<size_t>(obj_every)) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_%05zu.obj", i);
      const auto& t = trace.points[i].placement.ring.tetra;
      write_text_file(base.string() + suffix, export_obj(std::span<const Tetrahedron>(t)));
    }
  }
  const TiltPoint& last = trace.points.back();
  std::printf("points %zu (stop: %s)\n", trace.points.size(), trace.stop_reason.c_str());
  std::printf("end rho %.6f phi %.6f volume %.6f central %.3e\n", last.params.rho, last.params.phi,
              last.lattice_volume, last.central_residual);
  std::printf("max step displacement ratio %.4f\n", trace.max_step_ratio);
  return 0;
}

int cmd_centro(double rho, const std::string& out) {
  PeriodicPlacement p = build_centro_d3_ring(rho);
  write_placement(out, p);
  std::printf("central residual %.3e, d3 residual %.3e, distant-edge bisector residual %.3e (fold rho %.12f)\n",
              central_symmetry_residual(p.ring).value, d3_residual(p.ring).value,
              distant_edge_bisector_residual(p.ring), centro_d3_fold());
  return report(validate_placement(p, 1e-9), out);
}

int cmd_rigidity(const std::string& path, double tol, const std::string& out) {
  PeriodicPlacement p = read_placement(path);
  ValidationReport rep = validate_placement(p, 1e-9);
  if (!rep.ok()) {
    report(rep, path);
    std::cerr << "error: rigidity needs a valid placement\n";
    return kInvalid;
  }
  ConstraintSystem cs = build_constraint_system(p);
  FlexReport fr = flex_dimension(p, tol);
  LinkageReport lr = finite_linkage_report(p.ring, tol);
  if (!out.empty())
    write_text_file(out, flex_report_json(fr, cs));
  std::printf("variables %d constraints %d\n", cs.variables(), cs.constraints());
  std::printf("kernel %d, nontrivial flexes %d (tol %.1e)\n", fr.kernel_dimension, fr.nontrivial, tol);
  std::printf("finite linkage dof %d (gap ratio %.3e)\n", lr.dof, lr.gap_ratio);
  return 0;
}

int cmd_kelvin(const std::string& out) {
  ConvexCell cell = voronoi_cell(ideal_lattice());
  write_text_file(out, export_cell_obj(cell));
  auto [lo, hi] = cell.edge_length_range();
  std::printf("vertices %zu edges %zu faces %zu (hexagons %d, squares %d), edge length %.12f..%.12f\n",
              cell.vertices.size(), cell.edges().size(), cell.faces.size(), cell.count_faces(6),
              cell.count_faces(4), lo, hi);
  return 0;
}

int cmd_export(const std::string& path, int shells, const std::string& out) {
  PeriodicPlacement p = read_placement(path);
  ValidationReport rep = validate_placement(p, 1e-9);
  if (!rep.ok() && !allow_invalid)
    return report(rep, path);
  std::vector<Tetrahedron> patch = generate_patch(p, shells);
  write_text_file(out, export_obj(patch));
  std::printf("tetrahedra %zu\n", patch.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sodalite framework: ideal placement, deformations and rigidity"};
  app.require_subcommand(1);
  app.add_flag("--allow-invalid", allow_invalid, "Exit 0 even when validation fails");

  std::string out, path, csv, dir;
  double tol = 1e-9, step = 0.005, rho = 1.0;
  int n = 0, max_steps = 400, direction = 1, obj_every = 0, shells = 0;
  std::uint64_t seed = 0;

  auto* ideal = app.add_subcommand("ideal", "Write the ideal placement");
  ideal->add_option("--out", out, "Output JSON")->required();

  auto* validate = app.add_subcommand("validate", "Validate a placement");
  validate->add_option("placement", path, "Placement JSON")->required();
  validate->add_option("--tol", tol, "Tolerance")->capture_default_str();

  auto* sample = app.add_subcommand("sample-central", "Sample the centrally symmetric component");
  sample->add_option("-n", n, "Number of samples")->required()->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", seed, "RNG seed")->required();
  sample->add_option("--out-dir", dir, "Output directory")->required();

  auto* tilt = app.add_subcommand("tilt", "Trace the tilt curve");
  tilt->add_option("--step", step, "Arclength step")->capture_default_str();
  tilt->add_option("--max-steps", max_steps, "Step limit")->capture_default_str();
  tilt->add_option("--direction", direction, "+1 or -1")->capture_default_str()->check(CLI::IsMember({1, -1}));
  tilt->add_option("--csv", csv, "Output CSV")->required();
  tilt->add_option("--obj-every", obj_every, "Also write every k-th ring as OBJ");

  auto* centro = app.add_subcommand("centro-d3", "Build a ring with central and D3 symmetry");
  centro->add_option("--rho", rho, "Barycenter hexagon circumradius")->required();
  centro->add_option("--out", out, "Output JSON")->required();

  double rtol = 1e-8;
  std::string report_path;
  auto* rig = app.add_subcommand("rigidity", "Infinitesimal flex analysis");
  rig->add_option("placement", path, "Placement JSON")->required();
  rig->add_option("--tol", rtol, "Relative rank tolerance")->capture_default_str();
  rig->add_option("--report", report_path, "Output JSON report");

  auto* kelvin = app.add_subcommand("kelvin", "Voronoi cell of the ideal lattice");
  kelvin->add_option("--obj", out, "Output OBJ")->required();

  auto* exp = app.add_subcommand("export", "Export a patch of the framework");
  exp->add_option("placement", path, "Placement JSON")->required();
  exp->add_option("--shells", shells, "Lattice shells around the ring")->capture_default_str();
  exp->add_option("--obj", out, "Output OBJ")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ideal)
      return cmd_ideal(out);
    if (*validate)
      return cmd_validate(path, tol);
    if (*sample)
      return cmd_sample_central(n, seed, dir);
    if (*tilt)
      return cmd_tilt(step, max_steps, direction, csv, obj_every);
    if (*centro)
      return cmd_centro(rho, out);
    if (*rig)
      return cmd_rigidity(path, rtol, report_path);
    if (*kelvin)
      return cmd_kelvin(out);
    if (*exp)
      return cmd_export(path, shells, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
