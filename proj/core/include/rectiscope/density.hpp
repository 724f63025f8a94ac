#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rectiscope/beta.hpp"
#include "rectiscope/mass_tree.hpp"
#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Volume of the unit ball in R^m: pi^(m/2) / Gamma(m/2 + 1).
double unit_ball_volume(int m);

struct DensityEstimate {
  /// mu(B(x, 2^-k)) / (omega_m 2^-km) for k = 0..K.
  std::vector<double> ratio;
  /// Finite-scale proxies for the lower and upper m-densities.
  double min = 0.0;
  double max = 0.0;
};

DensityEstimate density_estimate(const DiscreteMeasure& mu, std::span<const double> x, int m,
                                 int depth);

enum class Growth { converging, diverging, inconclusive };

std::string to_string(Growth g);

/// Heuristic thresholds on the ratio a_K / a_{K-2} of the last three S increments.
struct GrowthThresholds {
  double converging = 0.9;
  /// Increments that do not decay cannot sum to a finite value.
  double diverging = 1.0;
};

struct AtomSsum {
  /// S_K(x) = sum_{j=0}^{K} diam Q_j(x) / mu(Q_j(x)).
  double partial_sum = 0.0;
  double last_increment = 0.0;
  /// a_K / a_{K-2}; NaN when K < 2.
  double window_ratio = 0.0;
  Growth growth = Growth::inconclusive;
  /// Set when some cube containing the point has no mass in the tree.
  std::optional<std::string> error;
};

struct SsumReport {
  int depth = 0;
  GrowthThresholds thresholds;
  std::vector<AtomSsum> atoms;
};

/// Increments diam Q_j(x) / mu(Q_j(x)) for j = 0..K along the cube chain of x.
/// Empty if a cube on the chain is not stored (mu(Q) = 0 there).
std::vector<double> ssum_increments(const MassTree& tree, std::span<const double> x, int depth);

Growth classify_growth(std::span<const double> increments, const GrowthThresholds& thresholds,
                       double* window_ratio = nullptr);

/// Truncated S(mu, x) at every atom of `points` using the masses in `tree`.
SsumReport density_sum(const MassTree& tree, const DiscreteMeasure& points, int depth,
                       const GrowthThresholds& thresholds = {}, int jobs = 1);

/// Admissible exponents: p >= 1, and p < 2m/(m-2) when m >= 3. Throws RangeError.
void check_exponent_range(int m, double p);

struct RectifiabilityDiagnostic {
  double jones = 0.0;
  double density_min = 0.0;
  double density_max = 0.0;
};

/// Per-atom J_p estimate and density proxies. Reports hypotheses only, never a verdict.
std::vector<RectifiabilityDiagnostic> rectifiability_diagnostic(const DiscreteMeasure& mu, int m, double p,
                                                     int depth, const BetaOptions& options = {},
                                                     int jobs = 1);

}  // namespace rectiscope
