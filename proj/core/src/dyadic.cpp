#include "rectiscope/dyadic.hpp"

#include <cmath>

#include "rectiscope/errors.hpp"

namespace rectiscope {

double DyadicCubeId::side() const { return std::ldexp(1.0, -level); }

DyadicCubeId DyadicCubeId::parent() const {
  if (level == 0) throw InputError("level-0 cube has no parent in the cube system");
  DyadicCubeId out{level - 1, coords};
  for (auto& k : out.coords) k >>= 1;  // arithmetic shift: floor division by 2
  return out;
}

DyadicCubeId DyadicCubeId::child(unsigned which) const {
  DyadicCubeId out{level + 1, coords};
  for (std::size_t i = 0; i < out.coords.size(); ++i) {
    out.coords[i] = 2 * out.coords[i] + ((which >> i) & 1u);
  }
  return out;
}

std::vector<DyadicCubeId> DyadicCubeId::children() const {
  const unsigned count = 1u << coords.size();
  std::vector<DyadicCubeId> out;
  out.reserve(count);
  for (unsigned c = 0; c < count; ++c) out.push_back(child(c));
  return out;
}

bool DyadicCubeId::contains(const DyadicCubeId& other) const {
  if (other.level < level || other.coords.size() != coords.size()) return false;
  const int shift = other.level - level;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if ((other.coords[i] >> shift) != coords[i]) return false;
  }
  return true;
}

DyadicCubeId DyadicCubeId::containing(std::span<const double> x, int level) {
  if (level < 0) throw InputError("dyadic level must be >= 0");
  DyadicCubeId out{level, {}};
  out.coords.reserve(x.size());
  for (double c : x) out.coords.push_back(grid_coordinate(c, level));
  return out;
}

std::string DyadicCubeId::to_string() const {
  std::string s = std::to_string(level) + ":";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords[i]);
  }
  return s;
}

std::strong_ordering operator<=>(const DyadicCubeId& a, const DyadicCubeId& b) {
  if (auto c = a.level <=> b.level; c != 0) return c;
  return a.coords <=> b.coords;
}

CubeGeometry cube_geometry(const DyadicCubeId& q) {
  const double side = q.side();
  CubeGeometry g;
  g.box.side = side;
  g.triple.side = 3.0 * side;
  for (auto k : q.coords) {
    const double lo = static_cast<double>(k) * side;
    g.box.lower.push_back(lo);
    g.center.push_back(lo + 0.5 * side);
    g.triple.lower.push_back(lo - side);
  }
  g.diameter = std::sqrt(static_cast<double>(q.coords.size())) * side;
  return g;
}

std::int64_t grid_coordinate(double x, int level) {
  const double scaled = std::floor(std::ldexp(x, level));
  constexpr double limit = 4611686018427387904.0;  // 2^62
  if (!std::isfinite(scaled) || std::fabs(scaled) >= limit) {
    throw InputError("coordinate " + std::to_string(x) + " out of range at level " +
                     std::to_string(level));
  }
  return static_cast<std::int64_t>(scaled);
}

}  // namespace rectiscope
