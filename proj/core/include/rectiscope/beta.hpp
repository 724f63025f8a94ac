#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rectiscope/dyadic.hpp"
#include "rectiscope/mass_tree.hpp"
#include "rectiscope/measure.hpp"

namespace rectiscope {

/// m-dimensional affine plane: a basepoint and m orthonormal directions.
struct AffinePlane {
  std::vector<double> basepoint;
  std::vector<std::vector<double>> directions;

  int dimension() const { return static_cast<int>(directions.size()); }
  double distance(std::span<const double> x) const;
};

enum class Normalization {
  /// (1/mu(Q)) * integral of (dist/diam Q)^p, always in [0, 1] for atoms inside Q.
  standard,
  /// Ball form: (1/r^m) * integral of (dist/r)^p.
  alternate,
};

std::string to_string(Normalization n);

struct TripleCube {
  DyadicCubeId cube;
};

using Region = std::variant<DyadicCubeId, TripleCube, Ball>;

double region_diameter(const Region& region);
std::string region_label(const Region& region);
int region_level(const Region& region);

struct BetaResult {
  double value = 0.0;
  /// Absent when the region carries no mass.
  std::optional<AffinePlane> plane;
  Normalization normalization = Normalization::standard;
  Region region;
  double mass = 0.0;
  bool converged = true;
  int iterations = 0;
};

struct BetaOptions {
  double relative_tolerance = 1e-9;
  int max_iterations = 500;
  /// Extra IRLS starts drawn from planes through m + 1 atoms (p != 2 only).
  std::size_t max_starts = 64;
  std::size_t refined_starts = 8;
};

/// Sum of w_i * dist(x_i, plane)^p over the atoms of `atoms`.
double plane_objective(const DiscreteMeasure& atoms, const AffinePlane& plane, double p);

/// Exact p = 2 minimizer by weighted PCA.
///
/// `restricted` must already be mu restricted to `region`; the region only
/// supplies the diameter used for normalization. Zero mass gives 0 with no plane.
BetaResult beta2_closed_form(const DiscreteMeasure& restricted, const Region& region, int m);

/// L^p beta by iteratively reweighted PCA warm-started at the p = 2 minimizer.
///
/// The value is an upper bound on the infimum and never exceeds the value of
/// the p = 2 plane. `converged` is false if the winning run hit the iteration cap.
BetaResult beta_p_general(const DiscreteMeasure& restricted, const Region& region, int m,
                          double p, const BetaOptions& options = {});

/// Dispatches to the closed form for p == 2.
BetaResult beta_p(const DiscreteMeasure& restricted, const Region& region, int m, double p,
                  const BetaOptions& options = {});

BetaResult cube_beta(const DiscreteMeasure& mu, const MassTree& tree, const DyadicCubeId& q,
                     int m, double p, const BetaOptions& options = {});
BetaResult triple_cube_beta(const DiscreteMeasure& mu, const MassTree& tree,
                            const DyadicCubeId& q, int m, double p,
                            const BetaOptions& options = {});
BetaResult ball_beta(const DiscreteMeasure& mu, const Ball& ball, int m, double p,
                     Normalization normalization = Normalization::standard,
                     const BetaOptions& options = {});

/// Converts a standard ball beta to the alternate normalization:
/// alt^p = 2^p * (mass / r^m) * standard^p.
double alternate_from_standard(double standard, double mass, double radius, int m, double p);

struct JonesEstimate {
  /// beta_p(mu, B(x, 2^-k)) for k = 0..depth.
  std::vector<double> beta;
  std::vector<double> mass;
  std::vector<bool> empty;
  double value = 0.0;
  int depth = 0;
};

/// Truncated J_p(mu, x) = sum_{k=0}^{K} beta_p(mu, B(x, 2^-k))^2 * ln 2.
JonesEstimate jones_function(const DiscreteMeasure& mu, std::span<const double> x, int m,
                             double p, int depth, const BetaOptions& options = {});

struct LiminfBetaReport {
  /// min over j = 0..K of beta_2(mu restricted to 3Q_j(x), 3Q_j(x)), one per atom.
  std::vector<double> minimum;
  std::vector<int> argmin_level;
};

/// Finite-depth proxy for liminf of beta_2(mu, 3Q) over the cubes containing each atom.
LiminfBetaReport liminf_beta_diagnostic(const MassTree& tree, const DiscreteMeasure& mu,
                                        int depth, int m = 1, int jobs = 1);

}  // namespace rectiscope
