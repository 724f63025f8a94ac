#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Half-open dyadic cube prod_i [k_i 2^-j, (k_i + 1) 2^-j) of the origin-anchored grid.
///
/// Only levels j >= 0 (side at most 1) belong to the cube system; level 0
/// cubes tile all of R^n, so a measure may have several roots.
struct DyadicCubeId {
  int level = 0;
  std::vector<std::int64_t> coords;

  int dimension() const { return static_cast<int>(coords.size()); }
  double side() const;

  DyadicCubeId parent() const;
  /// Child selected by the low n bits of `which` (bit i set: upper half along axis i).
  DyadicCubeId child(unsigned which) const;
  std::vector<DyadicCubeId> children() const;
  bool contains(const DyadicCubeId& other) const;

  /// Level-j cube containing x (half-open membership).
  static DyadicCubeId containing(std::span<const double> x, int level);

  std::string to_string() const;

  friend bool operator==(const DyadicCubeId&, const DyadicCubeId&) = default;
  /// Level first, then lexicographic coordinates.
  friend std::strong_ordering operator<=>(const DyadicCubeId& a, const DyadicCubeId& b);
};

struct CubeGeometry {
  std::vector<double> center;
  double diameter = 0.0;
  Box box;
  /// Concentric half-open box of side 3 * 2^-j.
  Box triple;
};

CubeGeometry cube_geometry(const DyadicCubeId& q);

/// Grid coordinate floor(x * 2^level), rejecting values that do not fit in 62 bits.
std::int64_t grid_coordinate(double x, int level);

}  // namespace rectiscope
