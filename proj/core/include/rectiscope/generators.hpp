#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rectiscope/measure.hpp"

namespace rectiscope {

enum class GeneratorKind {
  atom,
  segment,
  polyline,
  cantor_quarter_line,
  four_corner_cantor,
  uniform_square,
  circle,
  random_uniform,
};

GeneratorKind parse_generator_kind(const std::string& name);
std::string to_string(GeneratorKind kind);

/// Deterministic description of a test measure.
///
/// Which fields matter depends on `kind`:
///  - atom: points[0], weight
///  - segment / polyline: points (>= 2 vertices), level (2^level pieces)
///  - cantor_quarter_line, four_corner_cantor: level = generation k, dimension
///  - uniform_square: level (4^level atoms)
///  - circle: points[0] = center, radius, level
///  - random_uniform: count, seed, dimension; atoms in [0,1)^n with weights in [0.5, 1.5)
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::atom;
  int dimension = 2;
  int level = 0;
  std::vector<std::vector<double>> points;
  double weight = 1.0;
  double radius = 1.0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
};

DiscreteMeasure generate(const GeneratorSpec& spec);

/// Portable uniform double in [0, 1) from a 64-bit word (top 53 bits).
double unit_interval(std::uint64_t word);

}  // namespace rectiscope
