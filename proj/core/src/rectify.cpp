#include "rectiscope/rectify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "rectiscope/errors.hpp"
#include "rectiscope/parallel.hpp"

namespace rectiscope {

namespace {

NodeRef ancestor_at(const MassTree& tree, std::size_t atom, int level) {
  NodeRef cur = tree.leaf_of_atom(atom);
  while (cur.level > level) cur = *tree.parent(cur);
  return cur;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Correctly rounded sum of doubles (Shewchuk's non-overlapping partials).
// A tour covers each tree edge twice, so its exact sum is exactly twice the
// tree's and the factor-2 bound holds with no slack.
class ExactSum {
 public:
  void add(double x) {
    std::size_t kept = 0;
    for (double y : partials_) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[kept++] = lo;
      x = hi;
    }
    partials_.resize(kept);
    partials_.push_back(x);
  }

  double value() const {
    if (partials_.empty()) return 0.0;
    std::size_t n = partials_.size() - 1;
    double hi = partials_[n], lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Round half-even correction when the remaining partials push past a tie.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

double segment_distance(std::span<const double> a, std::span<const double> b,
                        std::span<const double> x) {
  double len2 = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ab = b[i] - a[i];
    len2 += ab * ab;
    dot += (x[i] - a[i]) * ab;
  }
  const double t = len2 > 0.0 ? std::clamp(dot / len2, 0.0, 1.0) : 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = x[i] - (a[i] + t * (b[i] - a[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

NodeRef require_root(const MassTree& tree, const DyadicCubeId& root) {
  if (root.dimension() != tree.dimension()) throw InputError("Q0 dimension does not match data");
  if (root.level < 0 || root.level > tree.depth()) {
    throw DepthError("Q0 level must lie in [0, tree depth]");
  }
  auto node = tree.find(root);
  if (!node || !(tree.mass(*node) > 0.0)) {
    throw InputError("mu(Q0) must be positive; Q0 = " + root.to_string());
  }
  return *node;
}

void validate_config(const PartitionConfig& config, double eta, const MassTree& tree) {
  if (!std::isfinite(config.threshold) || !(config.threshold > 0.0)) {
    throw InputError("N must be finite and > 0");
  }
  if (!(config.epsilon > 0.0) || !(config.epsilon * eta < 1.0)) {
    throw InputError("epsilon must satisfy 0 < epsilon < 1/mu(Q0) = " + std::to_string(1.0 / eta));
  }
  if (config.depth < config.root.level || config.depth > tree.depth()) {
    throw DepthError("partition depth must lie in [level(Q0), tree depth]");
  }
}

}  // namespace

LevelSet level_set_a(const SsumReport& s, const MassTree& tree, const DiscreteMeasure& mu,
                     const DyadicCubeId& root, double threshold) {
  if (s.atoms.size() != mu.size()) throw InputError("S report does not match the measure");
  if (std::isnan(threshold)) throw InputError("N must not be NaN");
  const NodeRef node = require_root(tree, root);
  LevelSet a;
  a.root = root;
  a.threshold = threshold;
  a.depth = s.depth;
  a.eta = tree.mass(node);
  for (std::size_t i : tree.atoms_in(node)) {
    const AtomSsum& row = s.atoms[i];
    if (!row.error && row.partial_sum <= threshold) {
      a.atoms.push_back(i);
      a.mass += mu.weight(i);
    }
  }
  return a;
}

std::string to_string(CubeLabel label) { return label == CubeLabel::good ? "good" : "bad"; }

GoodBadPartition classify_cubes(const MassTree& tree, const DiscreteMeasure& mu,
                                const LevelSet& a, const PartitionConfig& config) {
  const NodeRef root = require_root(tree, config.root);
  GoodBadPartition p;
  p.config = config;
  p.eta = tree.mass(root);
  validate_config(config, p.eta, tree);
  p.a_atoms = a.atoms;
  for (std::size_t i : a.atoms) {
    if (!config.root.contains(DyadicCubeId::containing(mu.position(i), config.root.level))) {
      throw InputError("level set A contains an atom outside Q0");
    }
    p.mass_a += mu.weight(i);
  }

  // Index every stored cube of the subtree by (level, index within level).
  std::vector<std::vector<std::ptrdiff_t>> position(static_cast<std::size_t>(config.depth) + 1);
  for (const NodeRef node : tree.descendants(root)) {
    if (node.level > config.depth) break;
    auto& slots = position[node.level];
    if (slots.empty()) slots.assign(tree.cube_count(node.level), -1);
    slots[node.index] = static_cast<std::ptrdiff_t>(p.cubes.size());
    PartitionCube cube;
    cube.node = node;
    cube.id = tree.id(node);
    cube.mass = tree.mass(node);
    if (auto parent = tree.parent(node); parent && node.level > root.level) {
      cube.parent = position[parent->level][parent->index];
    }
    p.cubes.push_back(std::move(cube));
  }

  for (std::size_t i : a.atoms) {
    const NodeRef leaf = ancestor_at(tree, i, config.depth);
    p.cubes[position[leaf.level][leaf.index]].mass_a += mu.weight(i);
  }
  for (auto it = p.cubes.rbegin(); it != p.cubes.rend(); ++it) {
    if (it->node.level == config.depth) continue;
    double sum = 0.0;
    for (auto c : tree.children(it->node)) sum += p.cubes[position[it->node.level + 1][c]].mass_a;
    it->mass_a = sum;
  }

  const double scale = config.epsilon * p.mass_a;
  for (auto& cube : p.cubes) {
    const bool parent_bad = cube.parent >= 0 && p.cubes[cube.parent].label == CubeLabel::bad;
    const bool bad = !(p.mass_a > 0.0) || parent_bad || cube.mass_a <= scale * cube.mass;
    cube.label = bad ? CubeLabel::bad : CubeLabel::good;
    if (!bad) p.good_diameter_sum += cube_geometry(cube.id).diameter;
  }

  for (std::size_t i : a.atoms) {
    const NodeRef leaf = ancestor_at(tree, i, config.depth);
    if (p.cubes[position[leaf.level][leaf.index]].label == CubeLabel::good) {
      p.b_atoms.push_back(i);
      p.b_mass += mu.weight(i);
    }
  }
  return p;
}

PartitionProperties measure_partition_properties(const GoodBadPartition& partition,
                                                 double tolerance) {
  PartitionProperties r;
  for (const auto& cube : partition.cubes) {
    if (cube.parent >= 0 && partition.cubes[cube.parent].label == CubeLabel::bad &&
        cube.label != CubeLabel::bad) {
      ++r.inheritance_violations;
    }
  }
  r.inheritance = r.inheritance_violations == 0;

  const auto& cfg = partition.config;
  r.mass_b = partition.b_mass;
  r.mass_bound = (1.0 - cfg.epsilon * partition.eta) * partition.mass_a;
  r.mass_retained = r.mass_b >= r.mass_bound - tolerance * partition.mass_a;

  r.diameter_total = partition.good_diameter_sum;
  r.diameter_bound = cfg.threshold / cfg.epsilon;
  r.diameter_sum = r.diameter_total < r.diameter_bound;
  return r;
}

PartitionProperties partition_properties_check(const GoodBadPartition& partition,
                                               double tolerance) {
  PartitionProperties r = measure_partition_properties(partition, tolerance);
  if (!r.inheritance) {
    throw InvariantViolation("partition: " + std::to_string(r.inheritance_violations) +
                             " good cubes below a bad cube");
  }
  if (!r.mass_retained) {
    throw InvariantViolation("partition: mu(B)=" + std::to_string(r.mass_b) +
                             " below (1 - eps*eta) mu(A)=" + std::to_string(r.mass_bound));
  }
  if (!r.diameter_sum) {
    throw InvariantViolation("partition: good diameter sum " + std::to_string(r.diameter_total) +
                             " not below N/eps=" + std::to_string(r.diameter_bound));
  }
  return r;
}

CurveTree build_tree(const GoodBadPartition& partition) {
  CurveTree t;
  t.half_good_diameter_sum = 0.5 * partition.good_diameter_sum;
  if (partition.cubes.empty() || partition.cubes.front().label == CubeLabel::bad) {
    t.root_bad = true;
    return t;
  }
  std::vector<std::ptrdiff_t> vertex_of(partition.cubes.size(), -1);
  ExactSum length;
  for (std::size_t i = 0; i < partition.cubes.size(); ++i) {
    const auto& cube = partition.cubes[i];
    if (cube.label != CubeLabel::good) continue;
    vertex_of[i] = static_cast<std::ptrdiff_t>(t.vertices.size());
    t.vertices.push_back(cube_geometry(cube.id).center);
    t.cubes.push_back(cube.id);
    const std::ptrdiff_t parent = cube.parent >= 0 ? vertex_of[cube.parent] : -1;
    if (cube.parent >= 0 && parent < 0) {
      throw InvariantViolation("good cube " + cube.id.to_string() + " has a bad parent");
    }
    t.parent.push_back(parent);
    if (parent >= 0) length.add(distance(t.vertices.back(), t.vertices[parent]));
  }
  t.length = length.value();
  if (t.length > t.half_good_diameter_sum) {
    throw InvariantViolation("tree length " + std::to_string(t.length) +
                             " exceeds half the good diameter sum " +
                             std::to_string(t.half_good_diameter_sum));
  }
  return t;
}

LengthCertificate tree_length_certificate(const CurveTree& tree, const PartitionConfig& config) {
  LengthCertificate c;
  c.length = tree.length;
  c.bound = config.threshold / (2.0 * config.epsilon);
  c.pass = c.length < c.bound;
  if (!c.pass) {
    throw InvariantViolation("tree length " + std::to_string(c.length) + " not below N/(2 eps)=" +
                             std::to_string(c.bound));
  }
  return c;
}

std::vector<double> Polyline::point_at(double t) const {
  if (vertices.empty()) return {};
  if (vertices.size() == 1 || !(length > 0.0)) return vertices.front();
  const double target = std::clamp(t, 0.0, 1.0) * length;
  double walked = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const double seg = distance(vertices[i - 1], vertices[i]);
    if (walked + seg >= target && seg > 0.0) {
      const double u = (target - walked) / seg;
      std::vector<double> out(vertices[i].size());
      for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = vertices[i - 1][d] + u * (vertices[i][d] - vertices[i - 1][d]);
      }
      return out;
    }
    walked += seg;
  }
  return vertices.back();
}

Polyline parameterize_curve(const CurveTree& tree) {
  Polyline out;
  if (tree.vertices.empty()) return out;
  const std::size_t count = tree.vertices.size();
  std::vector<std::vector<std::size_t>> kids(count);
  for (std::size_t i = 1; i < count; ++i) {
    const auto p = tree.parent[i];
    if (p < 0 || static_cast<std::size_t>(p) >= i) {
      throw InputError("curve tree is not connected at vertex " + std::to_string(i));
    }
    kids[p].push_back(i);
  }
  if (tree.parent.front() != -1) throw InputError("curve tree root must be vertex 0");

  // Iterative DFS: append a child on the way down and the parent on the way back.
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  out.vertices.push_back(tree.vertices[0]);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < kids[v].size()) {
      const std::size_t c = kids[v][next++];
      out.vertices.push_back(tree.vertices[c]);
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) out.vertices.push_back(tree.vertices[stack.back().first]);
    }
  }
  ExactSum length;
  for (std::size_t i = 1; i < out.vertices.size(); ++i) {
    length.add(distance(out.vertices[i - 1], out.vertices[i]));
  }
  out.length = length.value();
  return out;
}

bool euler_tour_bound_holds(const Polyline& tour, const CurveTree& tree) {
  return tour.length <= 2.0 * tree.length;
}

double distance_to_polyline(const Polyline& curve, std::span<const double> x) {
  if (curve.vertices.empty()) return std::numeric_limits<double>::infinity();
  if (curve.vertices.size() == 1) return distance(curve.vertices[0], x);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < curve.vertices.size(); ++i) {
    best = std::min(best, segment_distance(curve.vertices[i - 1], curve.vertices[i], x));
  }
  return best;
}

CoverageReport coverage_report(const GoodBadPartition& partition, const DiscreteMeasure& mu,
                               const Polyline& curve, int level) {
  const auto& cfg = partition.config;
  if (level < cfg.root.level || level > cfg.depth) {
    throw DepthError("coverage level must lie in [level(Q0), partition depth]");
  }
  CoverageReport r;
  r.level = level;
  r.b_count = partition.b_atoms.size();
  std::vector<DyadicCubeId> occupied;
  for (std::size_t i : partition.b_atoms) {
    r.max_distance = std::max(r.max_distance, distance_to_polyline(curve, mu.position(i)));
    occupied.push_back(DyadicCubeId::containing(mu.position(i), level));
  }
  std::sort(occupied.begin(), occupied.end());
  occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());
  // B atoms avoid every bad cube, so each occupied cube is good.
  for (const auto& q : occupied) r.h1_estimate += cube_geometry(q).diameter;
  return r;
}

CoverageReport coverage_report(const GoodBadPartition& partition, const DiscreteMeasure& mu,
                               const Polyline& curve) {
  return coverage_report(partition, mu, curve, partition.config.depth);
}

FamilyReport extract_rectifiable_family(const MassTree& tree, const DiscreteMeasure& mu,
                                        const DyadicCubeId& root, double threshold,
                                        std::span<const double> epsilons, int depth, int jobs,
                                        double tolerance) {
  if (epsilons.empty()) throw InputError("epsilon list must not be empty");
  const SsumReport s = density_sum(tree, mu, depth, {}, jobs);
  FamilyReport report;
  report.a = level_set_a(s, tree, mu, root, threshold);
  for (double eps : epsilons) {
    PartitionConfig cfg{root, threshold, eps, depth};
    validate_config(cfg, report.a.eta, tree);
  }
  if (!(report.a.mass > 0.0)) return report;

  report.members.resize(epsilons.size());
  parallel_for(epsilons.size(), jobs, [&](std::size_t k) {
    FamilyMember& m = report.members[k];
    m.epsilon = epsilons[k];
    const PartitionConfig cfg{root, threshold, m.epsilon, depth};
    m.partition = classify_cubes(tree, mu, report.a, cfg);
    m.properties = partition_properties_check(m.partition, tolerance);
    m.tree = build_tree(m.partition);
    m.certificate = tree_length_certificate(m.tree, cfg);
    m.curve = parameterize_curve(m.tree);
    if (!euler_tour_bound_holds(m.curve, m.tree)) {
      throw InvariantViolation("Euler tour longer than twice the tree");
    }
    m.coverage = coverage_report(m.partition, mu, m.curve);
  });

  std::vector<char> covered(mu.size(), 0);
  for (const auto& m : report.members) {
    for (std::size_t i : m.partition.b_atoms) covered[i] = 1;
  }
  for (std::size_t i : report.a.atoms) {
    if (!covered[i]) report.uncovered_mass += mu.weight(i);
  }
  report.uncovered_bound =
      report.a.eta * report.a.mass * *std::min_element(epsilons.begin(), epsilons.end());
  return report;
}

}  // namespace rectiscope
