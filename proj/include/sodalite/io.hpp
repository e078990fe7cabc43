// Placement JSON documents, OBJ geometry, tilt-curve CSV and flex reports.

#ifndef SODALITE_IO_HPP_
#define SODALITE_IO_HPP_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sodalite/deform_dihedral.hpp"
#include "sodalite/framework.hpp"
#include "sodalite/geom.hpp"
#include "sodalite/rigidity.hpp"

namespace sodalite {

inline constexpr int kPlacementSchemaVersion = 1;

/// Malformed document. `location` is a JSON pointer for schema errors or
/// "line L, column C" for syntax errors.
class DocumentError : public std::runtime_error {
public:
  DocumentError(std::string location, const std::string& msg)
      : std::runtime_error(location + ": " + msg), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

private:
  std::string location_;
};

/// Two-space indented JSON with shortest round-trip numbers and a trailing
/// newline. Contact slots share one vertex entry when bitwise equal.
std::string placement_to_json(const PeriodicPlacement& p);
/// Parses without validating geometry; throws DocumentError.
PeriodicPlacement placement_from_json(const std::string& text);

PeriodicPlacement read_placement(const std::string& path);
void write_placement(const std::string& path, const PeriodicPlacement& p);

/// Vertices merged within dedup_tol (first occurrence wins), then four
/// outward triangles per tetrahedron; 1-based indices.
std::string export_obj(std::span<const Tetrahedron> tetrahedra, double dedup_tol = 1e-9);
/// One polygon per face.
std::string export_cell_obj(const ConvexCell& cell);

struct ObjMesh {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;  // 0-based
};
/// Reads "v" and "f" records; throws DocumentError("line N", ...).
ObjMesh parse_obj(const std::string& text);

/// Header plus one row per point; reals as %.16e, flag as 0/1.
std::string tilt_csv(const TiltTrace& trace);

std::string flex_report_json(const FlexReport& r, const ConstraintSystem& cs);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace sodalite

#endif  // SODALITE_IO_HPP_
