#pragma once

// Fuchsian group machinery: presets, orbit enumeration, translation lengths,
// primitive conjugacy classes, and Dirichlet-domain folding.

#include <cstdint>
#include <string>
#include <vector>

#include "geoflow/disk.hpp"
#include "geoflow/errors.hpp"

namespace geoflow {

// Isometry as a unit-determinant 2x2 real matrix (half-plane chart), acting
// on the disk through a fixed Cayley conjugation. Equality is matrix equality
// up to global sign.
struct GroupElement {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  std::vector<std::int16_t> word;  // signed 1-based generator indices

  static GroupElement identity() { return {}; }
  static GroupElement translation(double length);   // along the real diameter
  static GroupElement rotation(double phi);         // about the disk origin

  GroupElement compose(const GroupElement& o) const;
  GroupElement inverse() const;
  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  bool same_as(const GroupElement& o, double tol = 1e-8) const;

  Mobius mobius() const;
  DiskPoint apply(const DiskPoint& p) const { return mobius().apply(p); }
  BoundaryPoint apply(const BoundaryPoint& p) const { return mobius().apply(p); }
  UnitTangent apply(const UnitTangent& v) const { return mobius().apply(v); }
  double displacement(const DiskPoint& o) const {
    return mobius().dist_to_image(o);
  }

  bool is_hyperbolic(double tol = 1e-9) const {
    return std::fabs(trace()) > 2.0 + tol;
  }
  // (repelling, attracting) fixed points on the boundary circle
  std::pair<BoundaryPoint, BoundaryPoint> axis_endpoints() const;
};

double translation_length(const GroupElement& g);  // throws NonHyperbolic

enum class GroupKind { CocompactSurface, SchottkyFree };

struct GroupPreset {
  std::string name;
  GroupKind kind = GroupKind::SchottkyFree;
  bool relator_aware = false;
  std::vector<GroupElement> generators;  // without inverses

  std::vector<GroupElement> symmetric_generators() const;  // with inverses
  double max_generator_displacement(const DiskPoint& o) const;

  // cocompact octagon data (zeros for free presets)
  double circumradius = 0.0;
  double apothem = 0.0;
  std::vector<cplx> domain_vertices;  // Dirichlet domain at the origin

  bool cocompact() const { return kind == GroupKind::CocompactSurface; }
  bool in_domain(const DiskPoint& z, double tol = 1e-9) const;
  double domain_area() const;  // quadrature; throws for free presets
};

// name in {genus2-octagon, schottky2, schottky3, cyclic}
GroupPreset preset(const std::string& name);

struct OrbitEntry {
  GroupElement g;
  double disp = 0.0;
};

struct OrbitTable {
  std::vector<OrbitEntry> entries;  // sorted by displacement, identity first
  DiskPoint origin;
  double radius = 0.0;

  std::size_t size() const { return entries.size(); }
};

struct OrbitBudget {
  std::size_t max_entries = 4'000'000;
  std::size_t max_visited = 40'000'000;
};

// All gamma with d(o, gamma o) <= R, each exactly once. BFS over words with
// pruning at R + 2 * max generator displacement.
OrbitTable enumerate_orbit(const GroupPreset& g, const DiskPoint& o, double R,
                           const OrbitBudget& budget = {});

struct ConjClass {
  GroupElement representative;
  double length = 0.0;
  bool primitive = true;
  std::string multiplicity_key;
};

struct ConjClassOptions {
  double conj_search_radius = -1.0;  // < 0: default 2t/3 + 4
  OrbitBudget budget{};
};

// One entry per free-homotopy class with translation length <= t.
std::vector<ConjClass> conj_classes_up_to(const GroupPreset& g, double t,
                                          const ConjClassOptions& opts = {});

// (z', gamma) with z' = gamma z in the Dirichlet domain centered at origin
std::pair<DiskPoint, GroupElement> fold_to_domain(const GroupPreset& g,
                                                  const DiskPoint& z);
std::pair<UnitTangent, GroupElement> fold_to_domain(const GroupPreset& g,
                                                    const UnitTangent& v);

}  // namespace geoflow
