#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rectiscope/density.hpp"
#include "rectiscope/dyadic.hpp"
#include "rectiscope/mass_tree.hpp"
#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Relative slack for the floating-point certificate comparisons.
inline constexpr double kReportTolerance = 1e-12;

/// Parameters of one good/bad partition: the top cube Q0, the S threshold N,
/// the badness ratio epsilon (0 < epsilon < 1/mu(Q0)) and the depth K.
struct PartitionConfig {
  DyadicCubeId root;
  double threshold = 1.0;
  double epsilon = 0.5;
  int depth = 0;
};

/// Atoms of Q0 with S_K(x) <= N. Since S_K <= S this contains the untruncated level set.
struct LevelSet {
  DyadicCubeId root;
  double threshold = 0.0;
  int depth = 0;
  /// mu(Q0).
  double eta = 0.0;
  std::vector<std::size_t> atoms;
  double mass = 0.0;
};

LevelSet level_set_a(const SsumReport& s, const MassTree& tree, const DiscreteMeasure& mu,
                     const DyadicCubeId& root, double threshold);

enum class CubeLabel { good, bad };

std::string to_string(CubeLabel label);

struct PartitionCube {
  NodeRef node;
  DyadicCubeId id;
  CubeLabel label = CubeLabel::bad;
  /// mu(A ∩ Q).
  double mass_a = 0.0;
  double mass = 0.0;
  /// Position of the parent in GoodBadPartition::cubes; -1 for Q0.
  std::ptrdiff_t parent = -1;
};

struct GoodBadPartition {
  PartitionConfig config;
  double eta = 0.0;
  double mass_a = 0.0;
  /// Every stored cube inside Q0 down to the configured depth, by level then coordinates.
  std::vector<PartitionCube> cubes;
  std::vector<std::size_t> a_atoms;
  /// Atoms of A lying in no bad cube.
  std::vector<std::size_t> b_atoms;
  double b_mass = 0.0;
  double good_diameter_sum = 0.0;
};

/// Q is bad iff its parent is bad or mu(A ∩ Q) <= epsilon * mu(A) * mu(Q).
/// With mu(A) = 0 every cube is bad.
GoodBadPartition classify_cubes(const MassTree& tree, const DiscreteMeasure& mu,
                                const LevelSet& a, const PartitionConfig& config);

struct PartitionProperties {
  bool inheritance = true;
  std::size_t inheritance_violations = 0;
  /// mu(B) >= (1 - epsilon eta) mu(A).
  bool mass_retained = true;
  double mass_b = 0.0;
  double mass_bound = 0.0;
  /// sum over good cubes of diam Q < N / epsilon, strictly.
  bool diameter_sum = true;
  double diameter_total = 0.0;
  double diameter_bound = 0.0;

  bool all() const { return inheritance && mass_retained && diameter_sum; }
};

/// Measures the three partition properties without throwing.
PartitionProperties measure_partition_properties(const GoodBadPartition& partition,
                                                 double tolerance = kReportTolerance);

/// As measure_partition_properties, but a failed property throws InvariantViolation.
PartitionProperties partition_properties_check(const GoodBadPartition& partition,
                                               double tolerance = kReportTolerance);

/// Segments joining each good cube's center to its parent's center.
struct CurveTree {
  std::vector<std::vector<double>> vertices;
  /// parent[i] < i for every non-root vertex; -1 marks the root (vertex 0).
  std::vector<std::ptrdiff_t> parent;
  std::vector<DyadicCubeId> cubes;
  double length = 0.0;
  double half_good_diameter_sum = 0.0;
  /// True when Q0 was bad and no tree exists.
  bool root_bad = false;

  std::size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

CurveTree build_tree(const GoodBadPartition& partition);

struct LengthCertificate {
  double length = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// length < N / (2 epsilon); a failure throws InvariantViolation.
LengthCertificate tree_length_certificate(const CurveTree& tree, const PartitionConfig& config);

/// Closed polyline; t in [0, 1] maps to arc length t * length, a Lipschitz parameterization.
struct Polyline {
  std::vector<std::vector<double>> vertices;
  double length = 0.0;

  std::vector<double> point_at(double t) const;
};

/// Closed depth-first tour visiting every tree edge exactly twice.
Polyline parameterize_curve(const CurveTree& tree);

/// Tour length <= 2 * tree length. Both lengths are correctly rounded sums,
/// so the comparison is exact.
bool euler_tour_bound_holds(const Polyline& tour, const CurveTree& tree);

double distance_to_polyline(const Polyline& curve, std::span<const double> x);

struct CoverageReport {
  std::size_t b_count = 0;
  /// max over B atoms of the distance to the curve; 0 when B is empty.
  double max_distance = 0.0;
  /// sum of diam Q over good level-`level` cubes containing B atoms.
  double h1_estimate = 0.0;
  int level = 0;
};

CoverageReport coverage_report(const GoodBadPartition& partition, const DiscreteMeasure& mu,
                               const Polyline& curve, int level);
CoverageReport coverage_report(const GoodBadPartition& partition, const DiscreteMeasure& mu,
                               const Polyline& curve);

struct FamilyMember {
  double epsilon = 0.0;
  GoodBadPartition partition;
  PartitionProperties properties;
  CurveTree tree;
  LengthCertificate certificate;
  Polyline curve;
  CoverageReport coverage;
};

struct FamilyReport {
  LevelSet a;
  std::vector<FamilyMember> members;
  /// mu(A \ union of the B_i).
  double uncovered_mass = 0.0;
  /// eta * mu(A) * min epsilon_i.
  double uncovered_bound = 0.0;
};

/// Runs partition, tree and tour for each epsilon and measures the uncovered A-mass.
FamilyReport extract_rectifiable_family(const MassTree& tree, const DiscreteMeasure& mu,
                                        const DyadicCubeId& root, double threshold,
                                        std::span<const double> epsilons, int depth,
                                        int jobs = 1, double tolerance = kReportTolerance);

}  // namespace rectiscope
