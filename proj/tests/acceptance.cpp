// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "sodalite/deform_central.hpp"
#include "sodalite/deform_dihedral.hpp"
#include "sodalite/framework.hpp"
#include "sodalite/io.hpp"
#include "sodalite/rigidity.hpp"
#include "sodalite/symmetry.hpp"

namespace fs = std::filesystem;
using namespace sodalite;

namespace {

const double s2 = std::sqrt(2.0);

struct Criterion {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok)
      failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double ring_distance(const SixRing& a, const SixRing& b) {
  double d = 0.0;
  for (size_t k = 0; k < 6; ++k)
    for (int i = 0; i < 4; ++i)
      d = std::max(d, (a.tetra[k][i] - b.tetra[k][i]).norm());
  return d;
}

// 1. Ideal placement coordinates, generators, pair sums and index.
void ideal_exactness(Criterion& c) {
  const PeriodicPlacement& p = ideal_sodalite();
  const Tetrahedron& t = p.ring[RingLabel{1, Sign::minus}];
  const std::array<Vec3, 4> vertices = {Vec3(1, 0, 1), Vec3(1, 0, 2 * s2 - 1), Vec3(s2 - 1, s2 - 1, s2),
                                   Vec3(s2 - 1, 1 - s2, s2)};
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    d = std::max(d, (t[i] - vertices[static_cast<size_t>(i)]).norm());
  c.require(d <= 1e-12, "tetrahedron coordinates off by " + num(d));

  const std::array<Vec3, 3> generators = {s2 * Vec3(1, -1, -1), s2 * Vec3(-1, 1, -1), s2 * Vec3(-1, -1, 1)};
  d = 0.0;
  for (size_t k = 0; k < 3; ++k)
    d = std::max(d, (p.lattice.g[k] - generators[k]).norm());
  c.require(d <= 1e-12, "generators off by " + num(d));

  const auto& g = p.lattice.g;
  const std::array<Vec3, 3> sums = {g[1] + g[2], g[2] + g[0], g[0] + g[1]};
  for (size_t k = 0; k < 3; ++k) {
    c.require((sums[k] + 2 * s2 * Vec3::Unit(static_cast<int>(k))).norm() <= 1e-12, "pair sum " + std::to_string(k));
    c.require(std::abs(sums[k].norm() - 2 * s2) <= 1e-12, "pair-sum norm " + std::to_string(k));
    c.require(std::abs(sums[k].dot(sums[(k + 1) % 3])) <= 1e-12, "pair sums not orthogonal");
  }
  PeriodLattice sub{sums};
  double ratio = std::abs(sub.determinant()) / std::abs(p.lattice.determinant());
  c.require(std::abs(ratio - 2.0) <= 1e-12, "index " + num(ratio));
  c.note("sublattice index " + num(ratio));
}

// 2. Kelvin cell.
void kelvin_cell(Criterion& c) {
  const PeriodicPlacement& p = ideal_sodalite();
  ConvexCell cell = voronoi_cell(p.lattice);
  c.require(cell.vertices.size() == 24, "vertices " + std::to_string(cell.vertices.size()));
  c.require(cell.count_faces(6) == 8, "hexagons " + std::to_string(cell.count_faces(6)));
  c.require(cell.count_faces(4) == 6, "squares " + std::to_string(cell.count_faces(4)));
  c.require(cell.faces.size() == 14, "faces " + std::to_string(cell.faces.size()));
  c.require(cell.edges().size() == 36, "edges " + std::to_string(cell.edges().size()));

  SodaliteCage cage = sodalite_cage(p);
  double worst = 0.0;
  for (const Vec3& v : cell.vertices) {
    double best = INFINITY;
    for (const Tetrahedron& t : cage.tetrahedra)
      best = std::min(best, (barycenter(t) - v).norm());
    worst = std::max(worst, best);
  }
  c.require(cage.tetrahedra.size() == 24 && worst <= 1e-9, "cell vertices vs cage barycenters " + num(worst));

  auto b = p.ring.barycenters();
  double hex = 0.0;
  for (size_t k = 0; k < 6; ++k)
    hex = std::max(hex, std::abs((b[k] - b[(k + 1) % 6]).norm() - 1.0));
  c.require(hex <= 1e-10, "hexagon edge deviation " + num(hex));

  auto [lo, hi] = cell.edge_length_range();
  char buf[160];
  std::snprintf(buf, sizeof buf, "measured cell edge %.12f..%.12f; the stated edge length 3 is not confirmed", lo, hi);
  c.note(buf);
}

// 3. Group order, transitivity, ring permutation of the first transposition.
void symmetry_bookkeeping(Criterion& c) {
  const auto& group = cube_group();
  c.require(group.size() == 48, "group order " + std::to_string(group.size()));
  std::vector<Tetrahedron> cage = ideal_cage_tetrahedra();
  std::set<int> orbit;
  for (const auto& g : group) {
    Vec3 b = barycenter(cage[0].transformed(g.matrix()));
    for (size_t i = 0; i < cage.size(); ++i)
      if ((barycenter(cage[i]) - b).norm() < 1e-12)
        orbit.insert(static_cast<int>(i));
  }
  c.require(cage.size() == 24 && orbit.size() == 24, "orbit size " + std::to_string(orbit.size()));
  std::string cyc = ring_label_action(SignedPermutation::transposition(0, 1)).cycles();
  c.require(cyc == "(T1-,T2+)(T3-,T3+)(T2-,T1+)", "cycles " + cyc);
  c.note("transposition (12) acts as " + cyc);
}

// 4. Six-dimensional component.
void central_component(Criterion& c) {
  int degenerate = 0, invalid = 0;
  double worst_central = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    PeriodicPlacement p = central_deform(sample_central_params(42, i));
    if (p.degenerate) {
      ++degenerate;
      continue;
    }
    ValidationReport rep = validate_placement(p, 1e-9);
    if (!rep.ok() || !rep.check("generator_pairs").ok)
      ++invalid;
    worst_central = std::max(worst_central, central_symmetry_residual(p.ring).value);
  }
  c.require(invalid == 0, std::to_string(invalid) + " samples fail validation");
  c.require(worst_central < 1e-10, "central residual " + num(worst_central));
  c.note("degenerate " + std::to_string(degenerate) + "/1000, max central residual " + num(worst_central));

  double d = ring_distance(central_deform({}).ring, ideal_sodalite().ring);
  c.require(d <= 1e-12, "identity parameters off by " + num(d));

  ConstraintSystem cs = build_constraint_system(ideal_sodalite());
  MatrixXd j = cs.jacobian(cs.base);
  MatrixXd t = central_tangent_basis(1e-5);
  double res = 0.0;
  for (int k = 0; k < 6; ++k)
    res = std::max(res, (j * t.col(k)).norm());
  c.require(res < 1e-6, "tangent residual " + num(res));
  MatrixXd tn = t;
  for (int k = 0; k < 6; ++k)
    tn.col(k).normalize();
  c.require(numerical_rank(tn, 1e-6) == 6, "tangent rank " + std::to_string(numerical_rank(tn, 1e-6)));
  c.note("tangent residual " + num(res) + ", smallest normalized singular value " + num(full_singular_values(tn)(5)));
}

// 5. Finite linkage count.
void finite_linkage(Criterion& c) {
  LinkageReport r = finite_linkage_report(ideal_sodalite().ring);
  c.require(r.dof == 12, "dof " + std::to_string(r.dof));
  c.require(r.gap_ratio > 1e4, "gap ratio " + num(r.gap_ratio));
  c.note("dof " + std::to_string(r.dof) + ", gap ratio " + num(r.gap_ratio));
}

MatrixXd tilt_tangent(const ConstraintSystem& cs, double h) {
  TiltTrace fwd = trace_tilt_curve(h, 1, 1);
  TiltTrace back = trace_tilt_curve(h, 1, -1);
  if (fwd.points.size() < 2 || back.points.size() < 2)
    fail("tilt tangent: trace did not leave the ideal point");
  return (cs.pack(fwd.points[1].placement) - cs.pack(back.points[1].placement)) / (2 * h);
}

// 6. Infinitesimal flexes.
void flex_bound(Criterion& c) {
  const PeriodicPlacement& ideal = ideal_sodalite();
  FlexReport r = flex_dimension(ideal, 1e-8);
  c.require(r.nontrivial >= 3, "nontrivial flexes " + std::to_string(r.nontrivial));

  ConstraintSystem cs = build_constraint_system(ideal);
  MatrixXd j = cs.jacobian(cs.base);
  MatrixXd dirs(63, 7);
  dirs.leftCols(6) = central_tangent_basis(1e-5);
  dirs.col(6) = tilt_tangent(cs, 1e-5);
  double res = 0.0;
  for (int k = 0; k < 7; ++k) {
    res = std::max(res, (j * dirs.col(k)).norm() / dirs.col(k).norm());
    dirs.col(k).normalize();
  }
  c.require(res < 1e-6, "explicit tangents leave the kernel: " + num(res));
  int rank = numerical_rank(dirs, 1e-6);
  c.require(rank >= 7, "rank of explicit tangents " + std::to_string(rank));

  MatrixXd with_trivial(63, 13);
  with_trivial << trivial_motion_basis(ideal), dirs;
  for (int k = 0; k < 6; ++k)
    with_trivial.col(k).normalize();
  int beyond = numerical_rank(with_trivial, 1e-6) - 6;
  c.note("kernel " + std::to_string(r.kernel_dimension) + ", nontrivial " + std::to_string(r.nontrivial) +
         "; explicit tangents rank " + std::to_string(rank) + " (" + std::to_string(beyond) +
         " beyond trivial motions)");
}

// 7. Tilt curve.
void tilt_curve(Criterion& c) {
  for (int dir : {1, -1}) {
    const std::string tag = dir > 0 ? "+1: " : "-1: ";
    TiltTrace tr = trace_tilt_curve(0.005, 400, dir);
    int valid = 0;
    bool d3_ok = true, volume_down = true, tetrahedrite = true;
    double max_central = 0.0;
    for (size_t i = 0; i < tr.points.size(); ++i) {
      const TiltPoint& pt = tr.points[i];
      if (validate_placement(pt.placement, 1e-8).ok())
        ++valid;
      d3_ok = d3_ok && pt.d3_residual < 1e-8;
      max_central = std::max(max_central, pt.central_residual);
      if (i > 0)
        volume_down = volume_down && pt.lattice_volume < tr.points[i - 1].lattice_volume;
      if (i > 1)
        tetrahedrite = tetrahedrite && detect_tetrahedrite(pt.placement);
    }
    c.require(valid >= 50 && valid == static_cast<int>(tr.points.size()),
              tag + std::to_string(valid) + " valid of " + std::to_string(tr.points.size()));
    c.require(d3_ok, tag + "d3 residual above 1e-8");
    c.require(tr.points[0].central_residual < 1e-12, tag + "central residual at start " + num(tr.points[0].central_residual));
    c.require(max_central > 1e-2, tag + "max central residual " + num(max_central));
    c.require(tetrahedrite, tag + "tetrahedrite not detected beyond the first steps");
    c.require(volume_down, tag + "lattice volume not strictly decreasing");
    char buf[200];
    std::snprintf(buf, sizeof buf, "direction %+d: %zu points (%s), volume %.4f -> %.4f, max central %.3f", dir,
                  tr.points.size(), tr.stop_reason.c_str(), tr.points.front().lattice_volume,
                  tr.points.back().lattice_volume, max_central);
    c.note(buf);
  }
}

// 8. Centro + D3 family and the common bisecting plane.
void centro_family(Criterion& c) {
  const double fold = centro_d3_fold();
  PeriodicPlacement p = build_centro_d3_ring(fold);
  double cen = central_symmetry_residual(p.ring).value;
  double d3 = d3_residual(p.ring).value;
  double bis = distant_edge_bisector_residual(p.ring);
  c.require(validate_placement(p, 1e-9).ok(), "centro+D3 ring does not validate");
  c.require(cen < 1e-9, "central residual " + num(cen));
  c.require(d3 < 1e-9, "d3 residual " + num(d3));
  c.require(bis < 1e-8, "distant-edge bisector residual " + num(bis));
  double at_one = ring_distance(build_centro_d3_ring(1.0).ring, ideal_sodalite().ring);
  c.require(at_one < 1e-8, "rho = 1 differs from the ideal ring by " + num(at_one));
  char buf[160];
  std::snprintf(buf, sizeof buf, "common bisecting plane at rho = %.12f (residual %.1e); rho = 1 recovers the ideal ring",
                fold, bis);
  c.note(buf);
}

MatrixXd fd_jacobian(const ConstraintSystem& cs, double h) {
  MatrixXd j(cs.constraints(), cs.variables());
  for (int k = 0; k < cs.variables(); ++k) {
    VectorXd xp = cs.base, xm = cs.base;
    xp(k) += h;
    xm(k) -= h;
    j.col(k) = (cs.residual(xp) - cs.residual(xm)) / (2 * h);
  }
  return j;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream x(a, std::ios::binary), y(b, std::ios::binary);
  std::string sx((std::istreambuf_iterator<char>(x)), {}), sy((std::istreambuf_iterator<char>(y)), {});
  return x.good() || x.eof() ? sx == sy && !sx.empty() : false;
}

// 9. Jacobian, invariance, CLI reproducibility.
void hygiene(Criterion& c) {
  std::vector<PeriodicPlacement> ps = {ideal_sodalite(), central_deform(sample_central_params(42, 3)),
                                       trace_tilt_curve(0.005, 40, -1).points.back().placement,
                                       build_centro_d3_ring(0.96)};
  double jerr = 0.0;
  for (const PeriodicPlacement& p : ps) {
    ConstraintSystem cs = build_constraint_system(p);
    jerr = std::max(jerr, (cs.jacobian(cs.base) - fd_jacobian(cs, 1e-6)).cwiseAbs().maxCoeff());
  }
  c.require(jerr < 1e-6, "Jacobian vs finite differences " + num(jerr));

  double inv = 0.0;
  std::mt19937_64 rng = sample_stream(2024, 0);
  for (const PeriodicPlacement& p : ps)
    for (int trial = 0; trial < 3; ++trial) {
      Rotation r = random_rotation(rng);
      Vec3 shift(standard_normal(rng), standard_normal(rng), standard_normal(rng));
      PeriodicPlacement q = p.transformed(r.matrix(), shift);
      inv = std::max(inv, std::abs(central_symmetry_residual(q.ring).value - central_symmetry_residual(p.ring).value));
      inv = std::max(inv, std::abs(d3_residual(q.ring).value - d3_residual(p.ring).value));
      inv = std::max(inv, std::abs(periodicity_residual(q.ring) - periodicity_residual(p.ring)));
      ConstraintSystem cp = build_constraint_system(p), cq = build_constraint_system(q);
      inv = std::max(inv, (cp.residual(cp.base) - cq.residual(cq.base)).cwiseAbs().maxCoeff());
      inv = std::max(inv, std::abs(distant_edge_bisector_residual(q.ring) - distant_edge_bisector_residual(p.ring)));
    }
  c.require(inv < 1e-9, "rigid-motion invariance " + num(inv));

  const fs::path root = fs::temp_directory_path() / ("sodalite_acceptance_" + std::to_string(getpid()));
  std::vector<std::string> runs;
  for (const char* tag : {"a", "b"}) {
    const fs::path dir = root / tag;
    fs::create_directories(dir);
    const std::string cli = "cd \"" + dir.string() + "\" && \"" + SODALITE_CLI + "\" ";
    const std::vector<std::string> cmds = {
        "ideal --out ideal.json",
        "validate ideal.json",
        "sample-central -n 25 --seed 42 --out-dir samples",
        "tilt --step 0.005 --max-steps 80 --direction -1 --csv tilt.csv --obj-every 40",
        "centro-d3 --rho 0.97 --out centro.json",
        "rigidity ideal.json --report flex.json",
        "kelvin --obj kelvin.obj",
        "export ideal.json --shells 1 --obj patch.obj"};
    int i = 0;
    for (const std::string& cmd : cmds) {
      int rc = std::system((cli + cmd + " > stdout_" + std::to_string(i++) + ".txt 2>&1").c_str());
      c.require(rc == 0, "command failed: " + cmd);
    }
  }
  int files = 0, differ = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file())
      continue;
    ++files;
    fs::path other = root / "b" / fs::relative(e.path(), root / "a");
    if (!same_bytes(e.path(), other)) {
      ++differ;
      c.require(false, "not reproducible: " + fs::relative(e.path(), root / "a").string());
    }
  }
  c.require(files > 30, "too few CLI outputs: " + std::to_string(files));
  fs::remove_all(root);
  c.note("Jacobian error " + num(jerr) + ", invariance " + num(inv) + ", " + std::to_string(files) +
         " CLI outputs byte-identical across runs: " + (differ == 0 ? "yes" : "no"));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"ideal placement exactness", ideal_exactness},
      {"Kelvin cell", kelvin_cell},
      {"symmetry bookkeeping", symmetry_bookkeeping},
      {"six-dimensional central component", central_component},
      {"finite-linkage count", finite_linkage},
      {"infinitesimal flex bound", flex_bound},
      {"tilt curve", tilt_curve},
      {"centro+D3 family", centro_family},
      {"numerical hygiene", hygiene},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("[%s] criterion %zu: %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str());
    for (const std::string& n : c.notes)
      std::printf("       %s\n", n.c_str());
    for (const std::string& f : c.failures)
      std::printf("       failed: %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
