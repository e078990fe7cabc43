#include "sodalite/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace sodalite {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::string slot_name(const VertexRef& r) {
  return kRingOrder[static_cast<size_t>(r.tetra)].name() + "." + std::to_string(r.vertex);
}

[[noreturn]] void bad(const std::string& where, const std::string& msg) { throw DocumentError(where, msg); }

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object())
    bad(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end())
    bad(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number())
    bad(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer())
    bad(where, "expected an integer");
  return j.get<int>();
}

Vec3 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    bad(where, "expected [x, y, z]");
  return {number(j[0], where + "/0"), number(j[1], where + "/1"), number(j[2], where + "/2")};
}

const json& array_of(const json& j, size_t n, const std::string& where) {
  if (!j.is_array())
    bad(where, "expected an array");
  if (j.size() != n)
    bad(where, "expected " + std::to_string(n) + " entries, found " + std::to_string(j.size()));
  return j;
}

}  // namespace

// PLACEMENT DOCUMENTS

std::string placement_to_json(const PeriodicPlacement& p) {
  std::array<int, 24> index{};
  index.fill(-1);
  std::vector<Vec3> vertices;
  for (const Contact& c : p.ring.contacts) {
    const Vec3& a = p.ring.at(c.first);
    const Vec3& b = p.ring.at(c.second);
    if (a.x() == b.x() && a.y() == b.y() && a.z() == b.z()) {
      int lo = std::min(c.first.tetra * 4 + c.first.vertex, c.second.tetra * 4 + c.second.vertex);
      int hi = std::max(c.first.tetra * 4 + c.first.vertex, c.second.tetra * 4 + c.second.vertex);
      index[static_cast<size_t>(hi)] = -2 - lo;
    }
  }
  for (size_t s = 0; s < 24; ++s) {
    int& i = index[s];
    if (i <= -2) {
      i = index[static_cast<size_t>(-2 - i)];
    } else {
      i = static_cast<int>(vertices.size());
      vertices.push_back(p.ring.at({static_cast<int>(s / 4), static_cast<int>(s % 4)}));
    }
  }
  auto slot_index = [&](const VertexRef& r) { return index[static_cast<size_t>(r.tetra * 4 + r.vertex)]; };

  json doc;
  doc["schema_version"] = kPlacementSchemaVersion;
  doc["vertices"] = json::array();
  for (const Vec3& v : vertices)
    doc["vertices"].push_back(vec_json(v));
  doc["tetrahedra"] = json::array();
  for (int k = 0; k < 6; ++k)
    doc["tetrahedra"].push_back({{"label", kRingOrder[static_cast<size_t>(k)].name()},
                                 {"vertices", {slot_index({k, 0}), slot_index({k, 1}),
                                               slot_index({k, 2}), slot_index({k, 3})}}});
  doc["contacts"] = json::array();
  for (const Contact& c : p.ring.contacts)
    doc["contacts"].push_back({{"name", c.name},
                               {"first", {{"label", kRingOrder[static_cast<size_t>(c.first.tetra)].name()},
                                          {"vertex", c.first.vertex}}},
                               {"second", {{"label", kRingOrder[static_cast<size_t>(c.second.tetra)].name()},
                                           {"vertex", c.second.vertex}}}});
  doc["lattice"] = json::array();
  for (const Vec3& g : p.lattice.g)
    doc["lattice"].push_back(vec_json(g));
  doc["period_marks"] = json::array();
  for (const PeriodMark& m : p.marks)
    doc["period_marks"].push_back({{"source", slot_index(m.source)},
                                   {"target", slot_index(m.target)},
                                   {"source_slot", slot_name(m.source)},
                                   {"target_slot", slot_name(m.target)},
                                   {"coefficients", m.coeffs}});
  doc["degenerate"] = p.degenerate;
  return doc.dump(2) + "\n";
}

PeriodicPlacement placement_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offsets are more useful as line/column.
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    bad("line " + std::to_string(line) + ", column " + std::to_string(col), e.what());
  }

  const json& version = field(doc, "schema_version", "");
  if (!version.is_number_integer() || version.get<int>() != kPlacementSchemaVersion)
    bad("/schema_version", "unsupported schema version " + version.dump());

  const json& jv = field(doc, "vertices", "");
  if (!jv.is_array())
    bad("/vertices", "expected an array");
  std::vector<Vec3> vertices;
  for (size_t i = 0; i < jv.size(); ++i)
    vertices.push_back(vec_from(jv[i], "/vertices/" + std::to_string(i)));
  auto vertex = [&](const json& j, const std::string& where) {
    int i = integer(j, where);
    if (i < 0 || static_cast<size_t>(i) >= vertices.size())
      bad(where, "vertex index " + std::to_string(i) + " out of range");
    return i;
  };

  const json& jt = field(doc, "tetrahedra", "");
  if (!jt.is_array())
    bad("/tetrahedra", "expected an array");
  std::array<bool, 6> seen{};
  std::array<std::array<int, 4>, 6> tet_index{};
  std::array<Tetrahedron, 6> tetra;
  for (size_t i = 0; i < jt.size(); ++i) {
    const std::string where = "/tetrahedra/" + std::to_string(i);
    const json& label = field(jt[i], "label", where);
    if (!label.is_string())
      bad(where + "/label", "expected a string");
    int k;
    try {
      k = ring_position(parse_ring_label(label.get<std::string>()));
    } catch (const std::invalid_argument&) {
      bad(where + "/label", "unknown label " + label.dump());
    }
    if (seen[static_cast<size_t>(k)])
      bad(where + "/label", "duplicate label " + label.dump());
    seen[static_cast<size_t>(k)] = true;
    const json& idx = array_of(field(jt[i], "vertices", where), 4, where + "/vertices");
    for (int v = 0; v < 4; ++v) {
      int n = vertex(idx[static_cast<size_t>(v)], where + "/vertices/" + std::to_string(v));
      tet_index[static_cast<size_t>(k)][static_cast<size_t>(v)] = n;
      tetra[static_cast<size_t>(k)][v] = vertices[static_cast<size_t>(n)];
    }
  }
  for (size_t k = 0; k < 6; ++k)
    if (!seen[k])
      bad("/tetrahedra", "missing tetrahedron " + kRingOrder[k].name());

  PeriodicPlacement p;
  p.ring.tetra = tetra;
  const json& jc = array_of(field(doc, "contacts", ""), 6, "/contacts");
  auto slot = [&](const json& j, const std::string& where) {
    const json& label = field(j, "label", where);
    VertexRef r{};
    try {
      r.tetra = ring_position(parse_ring_label(label.is_string() ? label.get<std::string>() : ""));
    } catch (const std::invalid_argument&) {
      bad(where + "/label", "unknown label " + label.dump());
    }
    r.vertex = integer(field(j, "vertex", where), where + "/vertex");
    if (r.vertex < 0 || r.vertex > 3)
      bad(where + "/vertex", "vertex must be 0..3");
    return r;
  };
  for (size_t i = 0; i < 6; ++i) {
    const std::string where = "/contacts/" + std::to_string(i);
    Contact& c = p.ring.contacts[i];
    const json& name = field(jc[i], "name", where);
    if (!name.is_string() || name.get<std::string>() != kContactNames[i])
      bad(where + "/name", "expected \"" + std::string(kContactNames[i]) + "\"");
    c.name = name.get<std::string>();
    c.first = slot(field(jc[i], "first", where), where + "/first");
    c.second = slot(field(jc[i], "second", where), where + "/second");
    c.position = p.ring.at(c.first);
  }

  const json& jl = array_of(field(doc, "lattice", ""), 3, "/lattice");
  for (size_t k = 0; k < 3; ++k)
    p.lattice.g[k] = vec_from(jl[k], "/lattice/" + std::to_string(k));

  // A vertex index names a slot; the first slot using it wins.
  std::map<int, VertexRef> slot_of;
  for (int k = 5; k >= 0; --k)
    for (int v = 3; v >= 0; --v)
      slot_of[tet_index[static_cast<size_t>(k)][static_cast<size_t>(v)]] = VertexRef{k, v};
  auto mark_slot = [&](const json& j, const std::string& where) {
    int n = vertex(j, where);
    auto it = slot_of.find(n);
    if (it == slot_of.end())
      bad(where, "vertex " + std::to_string(n) + " belongs to no tetrahedron");
    return it->second;
  };
  const json& jm = array_of(field(doc, "period_marks", ""), 6, "/period_marks");
  for (size_t i = 0; i < 6; ++i) {
    const std::string where = "/period_marks/" + std::to_string(i);
    PeriodMark& m = p.marks[i];
    m.source = mark_slot(field(jm[i], "source", where), where + "/source");
    m.target = mark_slot(field(jm[i], "target", where), where + "/target");
    const json& co = array_of(field(jm[i], "coefficients", where), 3, where + "/coefficients");
    for (size_t k = 0; k < 3; ++k)
      m.coeffs[k] = integer(co[k], where + "/coefficients/" + std::to_string(k));
  }
  if (auto it = doc.find("degenerate"); it != doc.end()) {
    if (!it->is_boolean())
      bad("/degenerate", "expected a boolean");
    p.degenerate = it->get<bool>();
  }
  return p;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out)
    throw std::runtime_error("error writing " + path);
}

PeriodicPlacement read_placement(const std::string& path) { return placement_from_json(read_text_file(path)); }

void write_placement(const std::string& path, const PeriodicPlacement& p) {
  write_text_file(path, placement_to_json(p));
}

// OBJ

namespace {

std::string fmt(const char* f, double a, double b, double c) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

std::string export_obj(std::span<const Tetrahedron> tetrahedra, double dedup_tol) {
  if (!(dedup_tol >= 0.0))
    throw std::invalid_argument("export_obj: dedup_tol must be non-negative");
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
  for (const Tetrahedron& t : tetrahedra) {
    std::array<int, 4> id{};
    for (int i = 0; i < 4; ++i) {
      size_t j = 0;
      while (j < verts.size() && (verts[j] - t[i]).norm() > dedup_tol)
        ++j;
      if (j == verts.size())
        verts.push_back(t[i]);
      id[static_cast<size_t>(i)] = static_cast<int>(j);
    }
    // Outward for positive signed volume.
    std::array<std::array<int, 3>, 4> f = {{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}};
    for (auto& tri : f) {
      if (t.signed_volume() < 0)
        std::swap(tri[1], tri[2]);
      faces.push_back({id[static_cast<size_t>(tri[0])], id[static_cast<size_t>(tri[1])],
                       id[static_cast<size_t>(tri[2])]});
    }
  }
  std::string out = "# sodalite tetrahedra: " + std::to_string(tetrahedra.size()) + "\n";
  for (const Vec3& v : verts)
    out += fmt("v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
  for (const auto& f : faces)
    out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " +
           std::to_string(f[2] + 1) + "\n";
  return out;
}

std::string export_cell_obj(const ConvexCell& cell) {
  std::string out = "# convex cell: " + std::to_string(cell.vertices.size()) + " vertices, " +
                    std::to_string(cell.faces.size()) + " faces\n";
  for (const Vec3& v : cell.vertices)
    out += fmt("v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
  for (const auto& f : cell.faces) {
    out += "f";
    for (int i : f)
      out += " " + std::to_string(i + 1);
    out += "\n";
  }
  return out;
}

ObjMesh parse_obj(const std::string& text) {
  ObjMesh mesh;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#')
      continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        bad("line " + std::to_string(n), "malformed vertex");
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> face;
      std::string tok;
      while (ls >> tok) {
        int i = 0;
        try {
          i = std::stoi(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          bad("line " + std::to_string(n), "malformed face index \"" + tok + "\"");
        }
        if (i < 1 || static_cast<size_t>(i) > mesh.vertices.size())
          bad("line " + std::to_string(n), "face index out of range");
        face.push_back(i - 1);
      }
      if (face.size() < 3)
        bad("line " + std::to_string(n), "face needs three vertices");
      mesh.faces.push_back(std::move(face));
    }
  }
  return mesh;
}

// CSV AND REPORTS

std::string tilt_csv(const TiltTrace& trace) {
  std::string out = "rho,phi,lattice_volume,central_residual,d3_residual,periodicity_residual,tetrahedrite_flag\n";
  char buf[256];
  for (const TiltPoint& pt : trace.points) {
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%d\n", pt.params.rho, pt.params.phi,
                  pt.lattice_volume, pt.central_residual, pt.d3_residual, pt.periodicity_residual,
                  pt.tetrahedrite ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string flex_report_json(const FlexReport& r, const ConstraintSystem& cs) {
  json doc;
  doc["tol"] = r.tol;
  doc["variables"] = cs.variables();
  doc["constraints"] = cs.constraints();
  doc["naive_count"] = cs.variables() - cs.constraints() - 6;
  doc["kernel_dimension"] = r.kernel_dimension;
  doc["nontrivial_flexes"] = r.nontrivial;
  doc["trivial_residual"] = r.trivial_residual;
  doc["singular_values"] = std::vector<double>(r.singular_values.data(),
                                               r.singular_values.data() + r.singular_values.size());
  doc["basis"] = json::array();
  for (Eigen::Index c = 0; c < r.basis.cols(); ++c) {
    VectorXd col = r.basis.col(c);
    doc["basis"].push_back(std::vector<double>(col.data(), col.data() + col.size()));
  }
  return doc.dump(2) + "\n";
}

}  // namespace sodalite
