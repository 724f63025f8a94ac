#include "rectiscope/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rectiscope/errors.hpp"
#include "rectiscope/parallel.hpp"

namespace rectiscope {

double unit_ball_volume(int m) {
  if (m < 1) throw InputError("m must be >= 1");
  const double half = 0.5 * m;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

DensityEstimate density_estimate(const DiscreteMeasure& mu, std::span<const double> x, int m,
                                 int depth) {
  if (depth < 0) throw InputError("depth must be >= 0");
  const double omega = unit_ball_volume(m);
  DensityEstimate est;
  Ball ball{std::vector<double>(x.begin(), x.end()), 1.0};
  for (int k = 0; k <= depth; ++k) {
    ball.radius = std::ldexp(1.0, -k);
    est.ratio.push_back(ball_mass(mu, ball) / (omega * std::ldexp(1.0, -k * m)));
  }
  auto [lo, hi] = std::minmax_element(est.ratio.begin(), est.ratio.end());
  est.min = *lo;
  est.max = *hi;
  return est;
}

std::string to_string(Growth g) {
  switch (g) {
    case Growth::converging: return "converging";
    case Growth::diverging: return "diverging";
    default: return "inconclusive";
  }
}

std::vector<double> ssum_increments(const MassTree& tree, std::span<const double> x, int depth) {
  if (depth < 0 || depth > tree.depth()) {
    throw DepthError("S depth must lie in [0, tree depth]");
  }
  auto deepest = tree.find(DyadicCubeId::containing(x, depth));
  if (!deepest) return {};
  std::vector<double> inc(static_cast<std::size_t>(depth) + 1);
  const double root_n = std::sqrt(static_cast<double>(tree.dimension()));
  NodeRef cur = *deepest;
  for (int j = depth; j >= 0; --j) {
    inc[j] = root_n * std::ldexp(1.0, -j) / tree.mass(cur);
    if (j > 0) cur = *tree.parent(cur);
  }
  return inc;
}

Growth classify_growth(std::span<const double> increments, const GrowthThresholds& thresholds,
                       double* window_ratio) {
  const std::size_t k = increments.size();
  if (k < 3) {
    if (window_ratio) *window_ratio = std::numeric_limits<double>::quiet_NaN();
    return Growth::inconclusive;
  }
  const double ratio = increments[k - 1] / increments[k - 3];
  if (window_ratio) *window_ratio = ratio;
  if (ratio <= thresholds.converging) return Growth::converging;
  if (ratio >= thresholds.diverging) return Growth::diverging;
  return Growth::inconclusive;
}

SsumReport density_sum(const MassTree& tree, const DiscreteMeasure& points, int depth,
                       const GrowthThresholds& thresholds, int jobs) {
  if (points.dimension() != tree.dimension()) {
    throw InputError("point dimension does not match the mass tree");
  }
  if (depth < 0 || depth > tree.depth()) {
    throw DepthError("S depth must lie in [0, tree depth]");
  }
  SsumReport report;
  report.depth = depth;
  report.thresholds = thresholds;
  report.atoms.resize(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t a) {
    AtomSsum& row = report.atoms[a];
    const auto inc = ssum_increments(tree, points.position(a), depth);
    if (inc.empty()) {
      row.error = "point lies in a cube with no mass in the tree";
      row.partial_sum = std::numeric_limits<double>::infinity();
      row.window_ratio = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    for (double v : inc) row.partial_sum += v;
    row.last_increment = inc.back();
    row.growth = classify_growth(inc, thresholds, &row.window_ratio);
  });
  return report;
}

void check_exponent_range(int m, double p) {
  if (m < 1) throw RangeError("m must be >= 1");
  if (!std::isfinite(p) || p < 1.0) throw RangeError("p must be finite and >= 1");
  if (m >= 3) {
    const double bound = 2.0 * m / (m - 2.0);
    if (!(p < bound)) {
      throw RangeError("p=" + std::to_string(p) + " outside admissible range [1, " +
                       std::to_string(bound) + ") for m=" + std::to_string(m));
    }
  }
}

std::vector<RectifiabilityDiagnostic> rectifiability_diagnostic(const DiscreteMeasure& mu, int m, double p,
                                                     int depth, const BetaOptions& options,
                                                     int jobs) {
  check_exponent_range(m, p);
  std::vector<RectifiabilityDiagnostic> out(mu.size());
  parallel_for(mu.size(), jobs, [&](std::size_t a) {
    const auto x = mu.position(a);
    out[a].jones = jones_function(mu, x, m, p, depth, options).value;
    const auto d = density_estimate(mu, x, m, depth);
    out[a].density_min = d.min;
    out[a].density_max = d.max;
  });
  return out;
}

}  // namespace rectiscope
