#include "rectiscope/beta.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rectiscope/errors.hpp"
#include "rectiscope/parallel.hpp"

namespace rectiscope {

namespace {

// Orthonormal frame of a weighted PCA: columns sorted by ascending eigenvalue,
// so the first n - m columns are normals and the last m span the plane.
struct Frame {
  Eigen::VectorXd center;
  Eigen::MatrixXd basis;
};

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

Frame weighted_frame(const DiscreteMeasure& atoms, std::span<const double> weights) {
  const auto n = static_cast<Eigen::Index>(atoms.dimension());
  Frame f{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n)};
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    f.center += weights[i] * as_vector(atoms.position(i));
    total += weights[i];
  }
  if (!(total > 0.0)) return f;
  f.center /= total;
  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Eigen::VectorXd v = as_vector(atoms.position(i)) - f.center;
    scatter.noalias() += weights[i] * v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scatter);
  f.basis = solver.eigenvectors();
  return f;
}

double normal_distance(const Frame& f, std::span<const double> x, int normals) {
  const Eigen::VectorXd v = as_vector(x) - f.center;
  return (f.basis.leftCols(normals).transpose() * v).norm();
}

double frame_objective(const DiscreteMeasure& atoms, const Frame& f, int normals, double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double d = normal_distance(f, atoms.position(i), normals);
    sum += atoms.weight(i) * (p == 2.0 ? d * d : std::pow(d, p));
  }
  return sum;
}

AffinePlane to_plane(const Frame& f, int m) {
  const auto n = f.basis.rows();
  AffinePlane plane;
  plane.basepoint.assign(f.center.data(), f.center.data() + n);
  for (Eigen::Index c = n - 1; c >= n - m; --c) {
    plane.directions.emplace_back(f.basis.col(c).data(), f.basis.col(c).data() + n);
  }
  return plane;
}

void check_plane_dimension(int m, int n) {
  if (m < 1 || m > n - 1) {
    throw InputError("plane dimension m=" + std::to_string(m) + " must satisfy 1 <= m <= n-1 (n=" +
                     std::to_string(n) + ")");
  }
}

void check_exponent(double p) {
  if (!std::isfinite(p) || p < 1.0) throw InputError("exponent p must be finite and >= 1");
}

double normalize(double objective, double mass, double diameter, double p) {
  if (!(mass > 0.0) || !(diameter > 0.0)) return 0.0;
  const double ratio = objective / (mass * std::pow(diameter, p));
  return std::pow(std::max(ratio, 0.0), 1.0 / p);
}

// Candidate starting frames from planes through m + 1 atoms.
std::vector<Frame> subset_starts(const DiscreteMeasure& atoms, int m, std::size_t max_starts) {
  const std::size_t count = atoms.size();
  const auto k = static_cast<std::size_t>(m) + 1;
  std::vector<Frame> out;
  if (count <= k || max_starts == 0) return out;

  std::vector<double> ones(k, 1.0);
  auto add = [&](const std::vector<std::size_t>& idx) {
    out.push_back(weighted_frame(atoms.subset(idx), ones));
  };

  // Enumerate combinations when few enough, otherwise sample with a fixed seed.
  double combos = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    combos *= static_cast<double>(count - i) / static_cast<double>(i + 1);
  }
  if (combos <= static_cast<double>(max_starts)) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      add(idx);
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == count - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  } else {
    std::mt19937_64 rng(0x5eedbe7aULL);
    std::vector<std::size_t> idx;
    while (out.size() < max_starts) {
      idx.clear();
      while (idx.size() < k) {
        const std::size_t pick = static_cast<std::size_t>(rng() % count);
        if (std::find(idx.begin(), idx.end(), pick) == idx.end()) idx.push_back(pick);
      }
      std::sort(idx.begin(), idx.end());
      add(idx);
    }
  }
  return out;
}

struct IrlsOutcome {
  Frame frame;
  double objective;
  bool converged;
  int iterations;
};

IrlsOutcome irls(const DiscreteMeasure& atoms, Frame start, int normals, double p,
                 double floor_distance, const BetaOptions& options) {
  IrlsOutcome best{start, frame_objective(atoms, start, normals, p), false, 0};
  if (best.objective <= std::numeric_limits<double>::min()) {
    best.converged = true;
    return best;
  }
  const std::size_t count = atoms.size();
  std::vector<double> current(count), proposed(count), blended(count);
  auto weights_for = [&](const Frame& frame, std::vector<double>& out) {
    for (std::size_t i = 0; i < count; ++i) {
      const double d = std::max(normal_distance(frame, atoms.position(i), normals), floor_distance);
      out[i] = atoms.weight(i) * std::pow(d, p - 2.0);
    }
  };
  weights_for(best.frame, current);
  for (int it = 1; it <= options.max_iterations; ++it) {
    best.iterations = it;
    weights_for(best.frame, proposed);
    // For p > 2 the plain reweighted step can overshoot and cycle; backtrack
    // toward the previous weights until the objective decreases.
    Frame candidate;
    double objective = std::numeric_limits<double>::infinity();
    double t = 1.0;
    for (int halving = 0; halving < 30; ++halving, t *= 0.5) {
      for (std::size_t i = 0; i < count; ++i) blended[i] = (1.0 - t) * current[i] + t * proposed[i];
      candidate = weighted_frame(atoms, blended);
      objective = frame_objective(atoms, candidate, normals, p);
      if (objective < best.objective) break;
    }
    if (!(objective < best.objective)) {
      best.converged = true;
      break;
    }
    const double previous = best.objective;
    best.objective = objective;
    best.frame = std::move(candidate);
    current = blended;
    if (previous - objective <= options.relative_tolerance * previous ||
        objective <= std::numeric_limits<double>::min()) {
      best.converged = true;
      break;
    }
  }
  return best;
}

}  // namespace

double AffinePlane::distance(std::span<const double> x) const {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i] - basepoint[i];
  for (const auto& d : directions) {
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * d[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * d[i];
  }
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

std::string to_string(Normalization n) {
  return n == Normalization::standard ? "standard" : "alternate";
}

double region_diameter(const Region& region) {
  struct {
    double operator()(const DyadicCubeId& q) const { return cube_geometry(q).diameter; }
    double operator()(const TripleCube& t) const { return 3.0 * cube_geometry(t.cube).diameter; }
    double operator()(const Ball& b) const { return b.diameter(); }
  } visitor;
  return std::visit(visitor, region);
}

std::string region_label(const Region& region) {
  struct {
    std::string operator()(const DyadicCubeId& q) const { return "Q" + q.to_string(); }
    std::string operator()(const TripleCube& t) const { return "3Q" + t.cube.to_string(); }
    std::string operator()(const Ball& b) const {
      std::string s = "B(";
      for (std::size_t i = 0; i < b.center.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(b.center[i]);
      }
      return s + ";" + std::to_string(b.radius) + ")";
    }
  } visitor;
  return std::visit(visitor, region);
}

int region_level(const Region& region) {
  if (auto q = std::get_if<DyadicCubeId>(&region)) return q->level;
  if (auto t = std::get_if<TripleCube>(&region)) return t->cube.level;
  const auto& b = std::get<Ball>(region);
  return static_cast<int>(std::lround(-std::log2(b.radius)));
}

double plane_objective(const DiscreteMeasure& atoms, const AffinePlane& plane, double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    sum += atoms.weight(i) * std::pow(plane.distance(atoms.position(i)), p);
  }
  return sum;
}

BetaResult beta2_closed_form(const DiscreteMeasure& restricted, const Region& region, int m) {
  check_plane_dimension(m, restricted.dimension());
  BetaResult result;
  result.region = region;
  result.mass = restricted.total_mass();
  if (restricted.empty() || !(result.mass > 0.0)) return result;

  const Frame frame = weighted_frame(restricted, restricted.weights());
  const int normals = restricted.dimension() - m;
  // Residual is summed from explicit normal components rather than taken from
  // the eigenvalues, which carry absolute error of order eps * largest eigenvalue.
  const double residual = frame_objective(restricted, frame, normals, 2.0);
  result.value = normalize(residual, result.mass, region_diameter(region), 2.0);
  result.plane = to_plane(frame, m);
  return result;
}

BetaResult beta_p_general(const DiscreteMeasure& restricted, const Region& region, int m,
                          double p, const BetaOptions& options) {
  check_plane_dimension(m, restricted.dimension());
  check_exponent(p);
  BetaResult result;
  result.region = region;
  result.mass = restricted.total_mass();
  if (restricted.empty() || !(result.mass > 0.0)) return result;

  const int normals = restricted.dimension() - m;
  const double diameter = region_diameter(region);
  const double floor_distance = 1e-12 * diameter;

  Frame warm = weighted_frame(restricted, restricted.weights());
  IrlsOutcome best = irls(restricted, warm, normals, p, floor_distance, options);

  if (p != 2.0 && best.objective > std::numeric_limits<double>::min()) {
    auto starts = subset_starts(restricted, m, options.max_starts);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t s = 0; s < starts.size(); ++s) {
      ranked.emplace_back(frame_objective(restricted, starts[s], normals, p), s);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t refine = std::min(options.refined_starts, ranked.size());
    for (std::size_t r = 0; r < refine; ++r) {
      IrlsOutcome run =
          irls(restricted, starts[ranked[r].second], normals, p, floor_distance, options);
      if (run.objective < best.objective) best = std::move(run);
    }
  }

  result.value = normalize(best.objective, result.mass, diameter, p);
  result.plane = to_plane(best.frame, m);
  result.converged = best.converged;
  result.iterations = best.iterations;
  return result;
}

BetaResult beta_p(const DiscreteMeasure& restricted, const Region& region, int m, double p,
                  const BetaOptions& options) {
  check_exponent(p);
  if (p == 2.0) return beta2_closed_form(restricted, region, m);
  return beta_p_general(restricted, region, m, p, options);
}

BetaResult cube_beta(const DiscreteMeasure& mu, const MassTree& tree, const DyadicCubeId& q,
                     int m, double p, const BetaOptions& options) {
  if (q.level > tree.depth()) {
    throw DepthError("cube level " + std::to_string(q.level) + " exceeds tree depth");
  }
  std::vector<std::size_t> atoms;
  if (auto node = tree.find(q)) atoms = tree.atoms_in(*node);
  return beta_p(mu.subset(atoms), q, m, p, options);
}

BetaResult triple_cube_beta(const DiscreteMeasure& mu, const MassTree& tree,
                            const DyadicCubeId& q, int m, double p, const BetaOptions& options) {
  const auto atoms = tree.triple_atoms(q);
  return beta_p(mu.subset(atoms), TripleCube{q}, m, p, options);
}

BetaResult ball_beta(const DiscreteMeasure& mu, const Ball& ball, int m, double p,
                     Normalization normalization, const BetaOptions& options) {
  if (!(ball.radius > 0.0)) throw InputError("ball radius must be > 0");
  const auto atoms = atoms_in(mu, ball);
  BetaResult result = beta_p(mu.subset(atoms), ball, m, p, options);
  if (normalization == Normalization::alternate) {
    result.value = alternate_from_standard(result.value, result.mass, ball.radius, m, p);
    result.normalization = Normalization::alternate;
  }
  return result;
}

double alternate_from_standard(double standard, double mass, double radius, int m, double p) {
  if (!(mass > 0.0)) return 0.0;
  return 2.0 * std::pow(mass / std::pow(radius, m), 1.0 / p) * standard;
}

JonesEstimate jones_function(const DiscreteMeasure& mu, std::span<const double> x, int m,
                             double p, int depth, const BetaOptions& options) {
  if (depth < 0) throw InputError("depth must be >= 0");
  check_plane_dimension(m, mu.dimension());
  check_exponent(p);
  JonesEstimate est;
  est.depth = depth;
  Ball ball{std::vector<double>(x.begin(), x.end()), 1.0};
  for (int k = 0; k <= depth; ++k) {
    ball.radius = std::ldexp(1.0, -k);
    const BetaResult b = ball_beta(mu, ball, m, p, Normalization::standard, options);
    est.beta.push_back(b.value);
    est.mass.push_back(b.mass);
    est.empty.push_back(!(b.mass > 0.0));
    est.value += b.value * b.value * std::numbers::ln2;
  }
  return est;
}

LiminfBetaReport liminf_beta_diagnostic(const MassTree& tree, const DiscreteMeasure& mu,
                                        int depth, int m, int jobs) {
  if (depth < 0 || depth > tree.depth()) {
    throw DepthError("diagnostic depth must lie in [0, tree depth]");
  }
  check_plane_dimension(m, mu.dimension());

  std::vector<std::size_t> level_offset{0};
  for (int j = 0; j <= depth; ++j) level_offset.push_back(level_offset.back() + tree.cube_count(j));
  std::vector<double> cube_value(level_offset.back());
  parallel_for(cube_value.size(), jobs, [&](std::size_t flat) {
    const auto level = static_cast<int>(
        std::upper_bound(level_offset.begin(), level_offset.end(), flat) - level_offset.begin() - 1);
    const NodeRef node{level, static_cast<std::uint32_t>(flat - level_offset[level])};
    cube_value[flat] = triple_cube_beta(mu, tree, tree.id(node), m, 2.0).value;
  });

  LiminfBetaReport report;
  report.minimum.assign(mu.size(), std::numeric_limits<double>::infinity());
  report.argmin_level.assign(mu.size(), 0);
  for (std::size_t a = 0; a < mu.size(); ++a) {
    const auto chain = tree.chain(a);
    for (int j = 0; j <= depth; ++j) {
      const double v = cube_value[level_offset[j] + chain[j].index];
      if (v < report.minimum[a]) {
        report.minimum[a] = v;
        report.argmin_level[a] = j;
      }
    }
  }
  return report;
}

}  // namespace rectiscope
