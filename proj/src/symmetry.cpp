#include "sodalite/symmetry.hpp"

#include <algorithm>

namespace sodalite {

// SIGNED PERMUTATIONS

SignedPermutation SignedPermutation::transposition(int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2 || i == j)
    throw std::invalid_argument("SignedPermutation::transposition: bad indices");
  SignedPermutation g;
  std::swap(g.perm[static_cast<size_t>(i)], g.perm[static_cast<size_t>(j)]);
  return g;
}

Vec3 SignedPermutation::apply(const Vec3& v) const {
  Vec3 out;
  for (int i = 0; i < 3; ++i)
    out(i) = signs[static_cast<size_t>(i)] * v(perm[static_cast<size_t>(i)]);
  return out;
}

Mat3 SignedPermutation::matrix() const {
  Mat3 m = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    m(i, perm[static_cast<size_t>(i)]) = signs[static_cast<size_t>(i)];
  return m;
}

SignedPermutation SignedPermutation::inverse() const {
  SignedPermutation r;
  for (size_t i = 0; i < 3; ++i) {
    r.perm[static_cast<size_t>(perm[i])] = static_cast<int>(i);
    r.signs[static_cast<size_t>(perm[i])] = signs[i];
  }
  return r;
}

SignedPermutation operator*(const SignedPermutation& a, const SignedPermutation& b) {
  SignedPermutation r;
  for (size_t i = 0; i < 3; ++i) {
    size_t ai = static_cast<size_t>(a.perm[i]);
    r.perm[i] = b.perm[ai];
    r.signs[i] = a.signs[i] * b.signs[ai];
  }
  return r;
}

const std::vector<SignedPermutation>& cube_group() {
  static const std::vector<SignedPermutation> group = [] {
    std::vector<SignedPermutation> g;
    std::array<int, 3> p{0, 1, 2};
    do {
      for (int bits = 0; bits < 8; ++bits) {
        SignedPermutation e;
        e.perm = p;
        for (int i = 0; i < 3; ++i)
          e.signs[static_cast<size_t>(i)] = ((bits >> (2 - i)) & 1) ? -1 : 1;
        g.push_back(e);
      }
    } while (std::next_permutation(p.begin(), p.end()));
    return g;
  }();
  return group;
}

// LABEL ACTION

bool LabelAction::is_identity() const {
  for (int k = 0; k < 6; ++k)
    if (image[static_cast<size_t>(k)] != k)
      return false;
  return true;
}

std::string LabelAction::cycles() const {
  if (!stabilizes)
    return "non-stabilizing";
  std::string out;
  std::array<bool, 6> seen{};
  for (int k = 0; k < 6; ++k) {
    if (seen[static_cast<size_t>(k)] || image[static_cast<size_t>(k)] == k)
      continue;
    std::vector<int> members;
    for (int j = k; !seen[static_cast<size_t>(j)]; j = image[static_cast<size_t>(j)]) {
      seen[static_cast<size_t>(j)] = true;
      members.push_back(j);
    }
    // written from its first minus label
    auto start = std::find_if(members.begin(), members.end(),
                              [](int j) { return kRingOrder[static_cast<size_t>(j)].sign == Sign::minus; });
    if (start != members.end())
      std::rotate(members.begin(), start, members.end());
    std::string cyc = "(";
    for (int j : members) {
      if (cyc.size() > 1)
        cyc += ",";
      cyc += kRingOrder[static_cast<size_t>(j)].name();
    }
    out += cyc + ")";
  }
  return out.empty() ? "()" : out;
}

int LabelAction::order() const {
  if (!stabilizes)
    return 0;
  LabelAction power = *this;
  for (int n = 1; n <= 720; ++n) {
    if (power.is_identity())
      return n;
    power = power.then(*this);
  }
  return 0;
}

LabelAction LabelAction::then(const LabelAction& b) const {
  LabelAction r;
  r.stabilizes = stabilizes && b.stabilizes;
  for (size_t k = 0; k < 6; ++k) {
    int i = image[k];
    r.image[k] = i < 0 ? -1 : b.image[static_cast<size_t>(i)];
  }
  return r;
}

LabelAction ring_label_action(const SignedPermutation& g) {
  const std::array<Vec3, 6> bary = ideal_sodalite().ring.barycenters();
  LabelAction act;
  act.stabilizes = true;
  for (size_t k = 0; k < 6; ++k) {
    Vec3 img = g.apply(bary[k]);
    act.image[k] = -1;
    for (size_t j = 0; j < 6; ++j)
      if ((bary[j] - img).norm() <= 1e-9)
        act.image[k] = static_cast<int>(j);
    if (act.image[k] < 0)
      act.stabilizes = false;
  }
  return act;
}

// D3 FRAME

D3Frame D3Frame::ideal() {
  D3Frame f;
  f.center = ideal_ring_center();
  f.axis = Vec3(1, 1, 1).normalized();
  f.normals = {Vec3(1, -1, 0).normalized(), Vec3(1, 0, -1).normalized(),
               Vec3(0, 1, -1).normalized()};
  return f;
}

Mat3 D3Frame::reflection(int m) const {
  const Vec3& n = normals.at(static_cast<size_t>(m));
  return Mat3::Identity() - 2.0 * n * n.transpose();
}

Vec3 D3Frame::reflect(int m, const Vec3& x) const { return apply(reflection(m), x); }

Mat3 D3Frame::element(int k) const {
  const Mat3 r12 = reflection(kMirror12), r13 = reflection(kMirror13), r23 = reflection(kMirror23);
  switch (k) {
    case ring::T1m: return Mat3::Identity();
    case ring::T3p: return r13;
    case ring::T2m: return r13 * r12;
    case ring::T1p: return r23;
    case ring::T3m: return r12 * r13;
    case ring::T2p: return r12;
    default: throw std::invalid_argument("D3Frame::element: ring position out of range");
  }
}

Vec3 D3Frame::barycenter_direction(int k) const {
  Vec3 d = normals[kMirror12] - normals[kMirror13];
  d -= d.dot(axis) * axis;
  return (element(k) * d.normalized()).normalized();
}

double D3Frame::defect() const {
  double worst = std::abs(axis.norm() - 1.0);
  for (size_t i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(normals[i].norm() - 1.0));
    worst = std::max(worst, std::abs(normals[i].dot(axis)));
    for (size_t j = i + 1; j < 3; ++j)
      worst = std::max(worst, std::abs(std::abs(normals[i].dot(normals[j])) - 0.5));
  }
  return worst;
}

// RESIDUALS

namespace {

// Largest distance from map(x) to the nearest vertex of `to`, over x in `from`.
template <class Map>
double mismatch(const Tetrahedron& from, const Tetrahedron& to, Map map) {
  double worst = 0.0;
  for (const Vec3& x : from.v) {
    Vec3 y = map(x);
    double best = INFINITY;
    for (const Vec3& z : to.v)
      best = std::min(best, (y - z).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

double inversion_residual(const SixRing& ring, const Vec3& c) {
  double worst = 0.0;
  for (size_t k = 0; k < 6; ++k)
    worst = std::max(worst, mismatch(ring.tetra[k], ring.tetra[(k + 3) % 6],
                                     [&c](const Vec3& x) { return Vec3(2.0 * c - x); }));
  return worst;
}

// Contacts P_ij and Q_ij lying on mirror m.
constexpr std::array<std::pair<int, int>, 3> kMirrorContacts = {{{2, 5}, {0, 3}, {4, 1}}};

}  // namespace

SymmetryResidual central_symmetry_residual(const SixRing& ring) {
  SymmetryResidual res;
  res.center = 0.5 * (ring.contacts[0].position + ring.contacts[3].position);
  res.value = inversion_residual(ring, res.center);
  Vec3 fitted = Vec3::Zero();
  for (const Tetrahedron& t : ring.tetra)
    for (const Vec3& x : t.v)
      fitted += x;
  fitted /= 24.0;
  res.secondary = inversion_residual(ring, fitted);
  return res;
}

D3Frame fit_d3_frame(const SixRing& ring, double* nonplanarity) {
  const std::array<Vec3, 6> b = ring.barycenters();
  D3Frame f;
  f.center = Vec3::Zero();
  for (const Vec3& x : b)
    f.center += x;
  f.center /= 6.0;
  Eigen::Matrix<double, 6, 3> m;
  for (int k = 0; k < 6; ++k)
    m.row(k) = (b[static_cast<size_t>(k)] - f.center).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(m, Eigen::ComputeFullV);
  f.axis = svd.matrixV().col(2);
  Vec3 turn = Vec3::Zero();
  for (size_t k = 0; k < 6; ++k)
    turn += (b[k] - f.center).cross(b[(k + 1) % 6] - f.center);
  if (turn.dot(f.axis) < 0)
    f.axis = -f.axis;
  if (nonplanarity) {
    double np = 0.0;
    for (const Vec3& x : b)
      np = std::max(np, std::abs((x - f.center).dot(f.axis)));
    *nonplanarity = np;
  }
  // Orient each normal like the ideal frame does relative to T1-.
  const D3Frame ideal = D3Frame::ideal();
  Vec3 ideal_d = barycenter(ideal_sodalite().ring.tetra[0]) - ideal.center;
  Vec3 d = b[0] - f.center;
  d -= d.dot(f.axis) * f.axis;
  for (size_t mi = 0; mi < 3; ++mi) {
    auto [pc, qc] = kMirrorContacts[mi];
    Vec3 radial = ring.contacts[static_cast<size_t>(pc)].position -
                  ring.contacts[static_cast<size_t>(qc)].position;
    radial -= radial.dot(f.axis) * f.axis;
    Vec3 n = f.axis.cross(radial).normalized();
    double want = ideal.normals[mi].dot(ideal_d) > 0 ? 1.0 : -1.0;
    if (n.dot(d) * want < 0)
      n = -n;
    f.normals[mi] = n;
  }
  return f;
}

SymmetryResidual d3_residual(const SixRing& ring) {
  SymmetryResidual res;
  double nonplanar = 0.0;
  res.frame = fit_d3_frame(ring, &nonplanar);
  res.center = res.frame.center;
  res.secondary = nonplanar;
  res.flagged = nonplanar > 1e-6;
  static const std::array<LabelAction, 3> pairing = {
      ring_label_action(SignedPermutation::transposition(0, 1)),
      ring_label_action(SignedPermutation::transposition(0, 2)),
      ring_label_action(SignedPermutation::transposition(1, 2))};
  for (int m = 0; m < 3; ++m)
    for (size_t k = 0; k < 6; ++k) {
      int partner = pairing[static_cast<size_t>(m)].image[k];
      res.value = std::max(res.value, mismatch(ring.tetra[k], ring.tetra[static_cast<size_t>(partner)],
                                               [&](const Vec3& x) { return res.frame.reflect(m, x); }));
    }
  return res;
}

}  // namespace sodalite
