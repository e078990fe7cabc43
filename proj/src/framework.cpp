#include "sodalite/framework.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "sodalite/symmetry.hpp"

namespace sodalite {

// LABELS

std::string RingLabel::name() const {
  return "T" + std::to_string(index) + (sign == Sign::plus ? "+" : "-");
}

int ring_position(const RingLabel& label) {
  for (size_t k = 0; k < kRingOrder.size(); ++k)
    if (kRingOrder[k] == label)
      return static_cast<int>(k);
  throw std::invalid_argument("ring_position: invalid label " + label.name());
}

RingLabel parse_ring_label(std::string_view name) {
  for (const RingLabel& l : kRingOrder)
    if (l.name() == name)
      return l;
  throw std::invalid_argument("unknown ring label '" + std::string(name) + "'");
}

// SIX RING

std::array<Vec3, 6> SixRing::barycenters() const {
  std::array<Vec3, 6> b;
  for (size_t k = 0; k < 6; ++k)
    b[k] = barycenter(tetra[k]);
  return b;
}

const Contact& SixRing::contact(std::string_view name) const {
  for (const Contact& c : contacts)
    if (c.name == name)
      return c;
  throw std::invalid_argument("no contact named '" + std::string(name) + "'");
}

bool SixRing::is_contact_slot(const VertexRef& r) const {
  return std::any_of(contacts.begin(), contacts.end(),
                     [&r](const Contact& c) { return c.first == r || c.second == r; });
}

SixRing SixRing::with_tetrahedra(const std::array<Tetrahedron, 6>& t) const {
  SixRing r;
  r.tetra = t;
  r.contacts = contacts;
  for (Contact& c : r.contacts) {
    c.position = r.at(c.first);
    Vec3& other = r.tetra[static_cast<size_t>(c.second.tetra)][c.second.vertex];
    if ((other - c.position).norm() <= 1e-9)
      other = c.position;
  }
  return r;
}

SixRing SixRing::transformed(const Mat3& m, const Vec3& shift) const {
  std::array<Tetrahedron, 6> t;
  for (size_t k = 0; k < 6; ++k)
    t[k] = tetra[k].transformed(m, shift);
  return with_tetrahedra(t);
}

PeriodicPlacement PeriodicPlacement::transformed(const Mat3& m, const Vec3& shift) const {
  PeriodicPlacement p = *this;
  p.ring = ring.transformed(m, shift);
  for (Vec3& g : p.lattice.g)
    g = m * g;
  return p;
}

// IDEAL PLACEMENT

Tetrahedron reference_tetrahedron() {
  const double s = kSqrt2;
  return {{Vec3(1, 0, 1), Vec3(1, 0, 2 * s - 1), Vec3(s - 1, s - 1, s), Vec3(s - 1, 1 - s, s)}};
}

Vec3 ideal_ring_center() { return Vec3(1, 1, 1) / kSqrt2; }

PeriodLattice ideal_lattice() {
  const double s = kSqrt2;
  return {{Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)}};
}

std::vector<Tetrahedron> ideal_cage_tetrahedra() {
  Tetrahedron ref = reference_tetrahedron();
  std::vector<Tetrahedron> cage;
  for (const SignedPermutation& g : cube_group()) {
    Tetrahedron t = ref.transformed(g.matrix());
    Vec3 b = barycenter(t);
    bool seen = std::any_of(cage.begin(), cage.end(), [&b](const Tetrahedron& u) {
      return (barycenter(u) - b).norm() <= 1e-9;
    });
    if (!seen)
      cage.push_back(t);
  }
  return cage;
}

namespace {

bool share_vertex(const Tetrahedron& a, const Tetrahedron& b, int* ia = nullptr,
                  int* ib = nullptr) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if ((a[i] - b[j]).norm() <= 1e-9) {
        if (ia)
          *ia = i;
        if (ib)
          *ib = j;
        return true;
      }
  return false;
}

PeriodicPlacement build_ideal() {
  const Vec3 c = ideal_ring_center();
  std::vector<Tetrahedron> candidates;
  for (const Tetrahedron& t : ideal_cage_tetrahedra())
    if (std::abs((barycenter(t) - c).norm() - 1.0) <= 1e-9)
      candidates.push_back(t);
  if (candidates.size() != 6)
    fail("ideal_sodalite: ring selection found " + std::to_string(candidates.size()) +
         " tetrahedra");

  // T1- is the reference tetrahedron; T2+ is its image under x<->y, so T3+
  // is its other neighbour. Walk the ring from there.
  auto find_by_barycenter = [&](const Vec3& b) -> int {
    for (size_t i = 0; i < candidates.size(); ++i)
      if ((barycenter(candidates[i]) - b).norm() <= 1e-9)
        return static_cast<int>(i);
    fail("ideal_sodalite: ring tetrahedron not found");
  };
  Vec3 b0 = barycenter(reference_tetrahedron());
  int first = find_by_barycenter(b0);
  int t2p = find_by_barycenter(SignedPermutation::transposition(0, 1).apply(b0));
  std::vector<int> walk = {first};
  int prev = t2p;
  while (walk.size() < 6) {
    int cur = walk.back();
    int next = -1;
    for (int i = 0; i < 6; ++i)
      if (i != cur && i != prev &&
          share_vertex(candidates[static_cast<size_t>(cur)], candidates[static_cast<size_t>(i)]) &&
          std::find(walk.begin(), walk.end(), i) == walk.end()) {
        next = i;
        break;
      }
    if (next < 0)
      fail("ideal_sodalite: ring walk failed");
    prev = cur;
    walk.push_back(next);
  }
  if (walk.back() != t2p)
    fail("ideal_sodalite: ring walk did not close through T2+");

  SixRing ring;
  for (size_t k = 0; k < 6; ++k)
    ring.tetra[k] = candidates[static_cast<size_t>(walk[k])];
  for (int k = 0; k < 6; ++k) {
    int n = (k + 1) % 6;
    int ia = -1, ib = -1;
    if (!share_vertex(ring.tetra[static_cast<size_t>(k)], ring.tetra[static_cast<size_t>(n)], &ia,
                      &ib))
      fail("ideal_sodalite: consecutive tetrahedra do not touch");
    ring.contacts[static_cast<size_t>(k)] = {std::string(kContactNames[static_cast<size_t>(k)]),
                                             {k, ia},
                                             {n, ib},
                                             Vec3::Zero()};
  }
  ring = ring.with_tetrahedra(ring.tetra);

  PeriodicPlacement p;
  p.ring = ring;
  p.lattice = ideal_lattice();
  p.marks = detect_period_marks(ring, p.lattice, 1e-9);
  return p;
}

}  // namespace

const PeriodicPlacement& ideal_sodalite() {
  static const PeriodicPlacement ideal = build_ideal();
  return ideal;
}

// PERIOD MARKS

std::array<PeriodMark, 6> detect_period_marks(const SixRing& ring, const PeriodLattice& lattice,
                                              double tol) {
  // One slot per distinct vertex: the second slot of a contact is skipped.
  std::vector<VertexRef> distinct;
  for (int k = 0; k < 6; ++k)
    for (int v = 0; v < 4; ++v) {
      VertexRef r{k, v};
      bool second = std::any_of(ring.contacts.begin(), ring.contacts.end(),
                                [&r](const Contact& c) { return c.second == r; });
      if (!second)
        distinct.push_back(r);
    }
  std::vector<PeriodMark> found;
  for (const VertexRef& s : distinct)
    for (int k = 0; k < 3; ++k)
      for (int sign : {1, -1}) {
        Vec3 target = ring.at(s) + sign * lattice.g[static_cast<size_t>(k)];
        for (const VertexRef& t : distinct) {
          if (t == s || (ring.at(t) - target).norm() > tol)
            continue;
          PeriodMark m{s, t, {0, 0, 0}};
          m.coeffs[static_cast<size_t>(k)] = 1;
          if (sign < 0)
            std::swap(m.source, m.target);
          bool dup = std::any_of(found.begin(), found.end(), [&m](const PeriodMark& f) {
            return f.source == m.source && f.target == m.target && f.coeffs == m.coeffs;
          });
          if (!dup)
            found.push_back(m);
        }
      }
  std::sort(found.begin(), found.end(), [](const PeriodMark& a, const PeriodMark& b) {
    auto gen = [](const PeriodMark& m) {
      return static_cast<int>(std::find(m.coeffs.begin(), m.coeffs.end(), 1) - m.coeffs.begin());
    };
    return std::pair(gen(a), a.source) < std::pair(gen(b), b.source);
  });
  std::array<int, 3> per_generator{0, 0, 0};
  for (const PeriodMark& m : found)
    for (size_t k = 0; k < 3; ++k)
      per_generator[k] += m.coeffs[k];
  if (found.size() != 6 || per_generator != std::array<int, 3>{2, 2, 2})
    fail("detect_period_marks: expected 6 marks, two per generator; found " +
         std::to_string(found.size()));
  std::array<PeriodMark, 6> marks;
  std::copy(found.begin(), found.end(), marks.begin());
  return marks;
}

namespace {

// Index of the generator a unit-coefficient mark uses and its sign; -1 if the
// coefficients are not +-e_k.
std::pair<int, int> unit_generator(const PeriodMark& m) {
  int idx = -1, sign = 0, nonzero = 0;
  for (int k = 0; k < 3; ++k) {
    int c = m.coeffs[static_cast<size_t>(k)];
    if (c != 0) {
      ++nonzero;
      idx = k;
      sign = c;
    }
  }
  if (nonzero != 1 || (sign != 1 && sign != -1))
    return {-1, 0};
  return {idx, sign};
}

}  // namespace

PeriodLattice lattice_from_marks(const SixRing& ring, const std::array<PeriodMark, 6>& marks) {
  PeriodLattice lat;
  std::array<bool, 3> have{false, false, false};
  for (const PeriodMark& m : marks) {
    auto [k, sign] = unit_generator(m);
    if (k < 0 || have[static_cast<size_t>(k)])
      continue;
    lat.g[static_cast<size_t>(k)] = sign * (ring.at(m.target) - ring.at(m.source));
    have[static_cast<size_t>(k)] = true;
  }
  if (!(have[0] && have[1] && have[2]))
    fail("lattice_from_marks: every generator needs a unit mark");
  return lat;
}

// VALIDATION

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.ok; });
}

const ValidationCheck& ValidationReport::check(std::string_view name) const {
  for (const ValidationCheck& c : checks)
    if (c.name == name)
      return c;
  throw std::invalid_argument("no validation check named '" + std::string(name) + "'");
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os.precision(3);
  for (const ValidationCheck& c : checks) {
    os << (c.ok ? "ok   " : "FAIL ") << c.name << " (worst " << std::scientific << c.worst << ")";
    for (const std::string& f : c.failures)
      os << ' ' << f;
    os << '\n';
  }
  return os.str();
}

ValidationReport validate_placement(const PeriodicPlacement& p, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("validate_placement: tol must be positive");
  ValidationReport rep;
  rep.tol = tol;
  const SixRing& r = p.ring;

  ValidationCheck regular{"regular_tetrahedra", true, 0.0, {}};
  for (size_t k = 0; k < 6; ++k) {
    double worst = 0.0;
    for (auto [i, j] : kTetraEdges)
      worst = std::max(worst, std::abs((r.tetra[k][i] - r.tetra[k][j]).norm() - kEdge));
    if (!std::isfinite(worst))
      worst = INFINITY;
    regular.worst = std::max(regular.worst, worst);
    if (!is_regular_tetrahedron(r.tetra[k], kEdge, tol))
      regular.failures.push_back(kRingOrder[k].name());
  }

  ValidationCheck contacts{"contacts", true, 0.0, {}};
  for (const Contact& c : r.contacts) {
    double d = (r.at(c.first) - r.at(c.second)).norm();
    contacts.worst = std::max(contacts.worst, d);
    if (!(d <= tol))
      contacts.failures.push_back(c.name);
  }

  ValidationCheck marks{"period_marks", true, 0.0, {}};
  for (size_t i = 0; i < p.marks.size(); ++i) {
    const PeriodMark& m = p.marks[i];
    Vec3 expected = p.lattice.point(m.coeffs);
    double d = (p.realized_period(m) - expected).norm();
    marks.worst = std::max(marks.worst, d);
    if (!(d <= tol))
      marks.failures.push_back("mark" + std::to_string(i) + ":" + kRingOrder[static_cast<size_t>(m.source.tetra)].name() + "." +
                               std::to_string(m.source.vertex) + "->" +
                               kRingOrder[static_cast<size_t>(m.target.tetra)].name() + "." +
                               std::to_string(m.target.vertex));
  }

  ValidationCheck pairs{"generator_pairs", true, 0.0, {}};
  for (int k = 0; k < 3; ++k) {
    std::vector<Vec3> realized;
    for (const PeriodMark& m : p.marks) {
      auto [g, sign] = unit_generator(m);
      if (g == k)
        realized.push_back(sign * p.realized_period(m));
    }
    if (realized.size() != 2) {
      pairs.failures.push_back("lambda" + std::to_string(k + 1) + ":uses=" +
                               std::to_string(realized.size()));
      pairs.worst = INFINITY;
      continue;
    }
    double d = (realized[0] - realized[1]).norm();
    pairs.worst = std::max(pairs.worst, d);
    if (!(d <= tol))
      pairs.failures.push_back("lambda" + std::to_string(k + 1));
  }

  ValidationCheck lattice{"lattice", true, 0.0, {}};
  double scale = p.lattice.g[0].norm() * p.lattice.g[1].norm() * p.lattice.g[2].norm();
  lattice.worst = scale > 0.0 ? std::abs(p.lattice.determinant()) / scale : 0.0;
  if (p.lattice.is_degenerate() || p.degenerate)
    lattice.failures.push_back("degenerate");

  for (ValidationCheck* c : {&regular, &contacts, &marks, &pairs, &lattice}) {
    c->ok = c->failures.empty();
    rep.checks.push_back(std::move(*c));
  }
  return rep;
}

// QUOTIENT GRAPH

namespace {

void require_valid(const PeriodicPlacement& p, double tol, const char* who) {
  ValidationReport rep = validate_placement(p, tol);
  if (!rep.ok())
    fail(std::string(who) + ": placement does not validate\n" + rep.summary());
}

int slot_index(const VertexRef& r) { return r.tetra * 4 + r.vertex; }

}  // namespace

std::vector<int> QuotientGraph::degrees() const {
  std::vector<int> deg(static_cast<size_t>(vertex_orbits), 0);
  for (const Edge& e : edges) {
    ++deg[static_cast<size_t>(e.u)];
    ++deg[static_cast<size_t>(e.v)];
  }
  return deg;
}

bool QuotientGraph::connected() const {
  if (vertex_orbits == 0)
    return true;
  std::vector<bool> seen(static_cast<size_t>(vertex_orbits), false);
  std::deque<int> queue = {0};
  seen[0] = true;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const Edge& e : edges)
      for (auto [a, b] : {std::pair(e.u, e.v), std::pair(e.v, e.u)})
        if (a == u && !seen[static_cast<size_t>(b)]) {
          seen[static_cast<size_t>(b)] = true;
          queue.push_back(b);
        }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

QuotientGraph quotient_graph(const PeriodicPlacement& p) {
  require_valid(p, 1e-9, "quotient_graph");
  using Offset = std::array<int, 3>;
  // Identifications between slots: pos(b) = pos(a) + offset * lambda.
  std::vector<std::vector<std::pair<int, Offset>>> adj(24);
  auto link = [&adj](int a, int b, Offset off) {
    adj[static_cast<size_t>(a)].emplace_back(b, off);
    adj[static_cast<size_t>(b)].emplace_back(a, Offset{-off[0], -off[1], -off[2]});
  };
  for (const Contact& c : p.ring.contacts)
    link(slot_index(c.first), slot_index(c.second), {0, 0, 0});
  for (const PeriodMark& m : p.marks)
    link(slot_index(m.source), slot_index(m.target), m.coeffs);

  QuotientGraph g;
  std::array<Offset, 24> offset{};
  g.slot_orbit.fill(-1);
  for (int s = 0; s < 24; ++s) {
    if (g.slot_orbit[static_cast<size_t>(s)] >= 0)
      continue;
    int orbit = g.vertex_orbits++;
    g.slot_orbit[static_cast<size_t>(s)] = orbit;
    offset[static_cast<size_t>(s)] = {0, 0, 0};
    std::deque<int> queue = {s};
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      for (auto [b, off] : adj[static_cast<size_t>(a)]) {
        Offset ob;
        for (size_t k = 0; k < 3; ++k)
          ob[k] = offset[static_cast<size_t>(a)][k] + off[k];
        if (g.slot_orbit[static_cast<size_t>(b)] < 0) {
          g.slot_orbit[static_cast<size_t>(b)] = orbit;
          offset[static_cast<size_t>(b)] = ob;
          queue.push_back(b);
        } else if (offset[static_cast<size_t>(b)] != ob) {
          fail("quotient_graph: inconsistent periodic identifications");
        }
      }
    }
  }
  for (int k = 0; k < 6; ++k)
    for (auto [i, j] : kTetraEdges) {
      int a = k * 4 + i, b = k * 4 + j;
      QuotientGraph::Edge e{g.slot_orbit[static_cast<size_t>(a)],
                            g.slot_orbit[static_cast<size_t>(b)],
                            {}};
      for (size_t c = 0; c < 3; ++c)
        e.period[c] = offset[static_cast<size_t>(b)][c] - offset[static_cast<size_t>(a)][c];
      g.edges.push_back(e);
    }
  g.edge_orbits = static_cast<int>(g.edges.size());
  return g;
}

// CAGE AND PATCHES

namespace {

// (ring position, lattice coefficients) of the 24 tetrahedra around the
// origin in the ideal placement.
const std::vector<std::pair<int, std::array<int, 3>>>& ideal_cage_pattern() {
  static const auto pattern = [] {
    const PeriodicPlacement& ideal = ideal_sodalite();
    std::vector<std::pair<int, std::array<int, 3>>> out;
    for (const Tetrahedron& t : ideal_cage_tetrahedra()) {
      Vec3 b = barycenter(t);
      bool found = false;
      for (int k = 0; k < 6 && !found; ++k)
        for (int i = -2; i <= 2 && !found; ++i)
          for (int j = -2; j <= 2 && !found; ++j)
            for (int l = -2; l <= 2 && !found; ++l) {
              Vec3 shift = ideal.lattice.point(i, j, l);
              if ((barycenter(ideal.ring.tetra[static_cast<size_t>(k)]) + shift - b).norm() <= 1e-9) {
                out.push_back({k, {i, j, l}});
                found = true;
              }
            }
      if (!found)
        fail("sodalite_cage: ideal cage tetrahedron is not a ring translate");
    }
    return out;
  }();
  return pattern;
}

}  // namespace

SodaliteCage sodalite_cage(const PeriodicPlacement& p) {
  require_valid(p, 1e-8, "sodalite_cage");
  SodaliteCage cage;
  cage.source = ideal_cage_pattern();
  std::vector<Vec3> bary;
  cage.center = Vec3::Zero();
  for (const auto& [k, n] : cage.source) {
    Tetrahedron t = p.ring.tetra[static_cast<size_t>(k)].translated(p.lattice.point(n));
    cage.tetrahedra.push_back(t);
    bary.push_back(barycenter(t));
    cage.center += bary.back();
  }
  cage.center /= static_cast<double>(bary.size());
  cage.hull = convex_hull(bary);
  return cage;
}

std::vector<Tetrahedron> generate_patch(const PeriodicPlacement& p, int shells) {
  if (shells < 0)
    throw std::invalid_argument("generate_patch: shells must be >= 0");
  std::vector<Tetrahedron> out;
  for (int i = -shells; i <= shells; ++i)
    for (int j = -shells; j <= shells; ++j)
      for (int k = -shells; k <= shells; ++k) {
        Vec3 shift = p.lattice.point(i, j, k);
        for (const Tetrahedron& t : p.ring.tetra)
          out.push_back(t.translated(shift));
      }
  return out;
}

}  // namespace sodalite
