#include "rectiscope/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rectiscope/errors.hpp"

namespace rectiscope {

namespace {

struct KindName {
  GeneratorKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {GeneratorKind::atom, "atom"},
    {GeneratorKind::segment, "segment"},
    {GeneratorKind::polyline, "polyline"},
    {GeneratorKind::cantor_quarter_line, "cantor-quarter-line"},
    {GeneratorKind::four_corner_cantor, "four-corner-cantor"},
    {GeneratorKind::uniform_square, "uniform-square"},
    {GeneratorKind::circle, "circle"},
    {GeneratorKind::random_uniform, "random-uniform"},
};

void require_level(int level, int max_level) {
  if (level < 0 || level > max_level) {
    throw InputError("generator level must lie in [0, " + std::to_string(max_level) + "]");
  }
}

std::vector<double> embed(int dimension, double x, double y) {
  std::vector<double> p(static_cast<std::size_t>(dimension), 0.0);
  p[0] = x;
  if (dimension > 1) p[1] = y;
  return p;
}

DiscreteMeasure arc_length_midpoints(const GeneratorSpec& spec) {
  const auto& pts = spec.points;
  if (pts.size() < 2) throw InputError("segment/polyline needs at least two vertices");
  const std::size_t n = pts.front().size();
  if (n < 1) throw InputError("vertices must have at least one coordinate");
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].size() != n) throw InputError("vertex dimensions differ");
    double s = 0.0;
    for (std::size_t d = 0; d < n; ++d) s += (pts[i][d] - pts[i - 1][d]) * (pts[i][d] - pts[i - 1][d]);
    cumulative.push_back(cumulative.back() + std::sqrt(s));
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) throw InputError("curve has zero length");
  require_level(spec.level, 24);
  const std::size_t pieces = std::size_t{1} << spec.level;
  const double h = total / static_cast<double>(pieces);

  DiscreteMeasure mu(static_cast<int>(n));
  mu.reserve(pieces);
  std::vector<double> x(n);
  std::size_t seg = 1;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double s = (static_cast<double>(i) + 0.5) * h;
    while (seg + 1 < cumulative.size() && cumulative[seg] < s) ++seg;
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double u = len > 0.0 ? (s - cumulative[seg - 1]) / len : 0.0;
    for (std::size_t d = 0; d < n; ++d) x[d] = pts[seg - 1][d] + u * (pts[seg][d] - pts[seg - 1][d]);
    mu.add(x, h);
  }
  return mu;
}

}  // namespace

GeneratorKind parse_generator_kind(const std::string& name) {
  for (const auto& k : kKindNames) {
    if (name == k.name) return k.kind;
  }
  throw InputError("unknown generator kind '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  for (const auto& k : kKindNames) {
    if (kind == k.kind) return k.name;
  }
  return "unknown";
}

double unit_interval(std::uint64_t word) { return std::ldexp(static_cast<double>(word >> 11), -53); }

DiscreteMeasure generate(const GeneratorSpec& spec) {
  if (spec.dimension < 1) throw InputError("dimension must be >= 1");
  switch (spec.kind) {
    case GeneratorKind::atom: {
      if (spec.points.empty()) throw InputError("atom generator needs a position");
      DiscreteMeasure mu(static_cast<int>(spec.points[0].size()));
      mu.add(spec.points[0], spec.weight);
      return mu;
    }
    case GeneratorKind::segment:
      if (spec.points.size() != 2) throw InputError("segment needs exactly two endpoints");
      return arc_length_midpoints(spec);
    case GeneratorKind::polyline:
      return arc_length_midpoints(spec);
    case GeneratorKind::cantor_quarter_line: {
      require_level(spec.level, 24);
      // Middle-half Cantor set: keep the outer quarters of every interval.
      std::vector<double> starts{0.0};
      double len = 1.0;
      for (int g = 0; g < spec.level; ++g) {
        std::vector<double> next;
        next.reserve(starts.size() * 2);
        for (double a : starts) {
          next.push_back(a);
          next.push_back(a + 0.75 * len);
        }
        starts = std::move(next);
        len *= 0.25;
      }
      DiscreteMeasure mu(spec.dimension);
      mu.reserve(starts.size());
      const double w = std::ldexp(1.0, -spec.level);
      for (double a : starts) mu.add(embed(spec.dimension, a + 0.5 * len, 0.0), w);
      return mu;
    }
    case GeneratorKind::four_corner_cantor: {
      require_level(spec.level, 12);
      if (spec.dimension < 2) throw InputError("four-corner Cantor needs dimension >= 2");
      std::vector<std::pair<double, double>> corners{{0.0, 0.0}};
      double len = 1.0;
      for (int g = 0; g < spec.level; ++g) {
        std::vector<std::pair<double, double>> next;
        next.reserve(corners.size() * 4);
        for (auto [x, y] : corners) {
          for (double dy : {0.0, 0.75 * len}) {
            for (double dx : {0.0, 0.75 * len}) next.emplace_back(x + dx, y + dy);
          }
        }
        corners = std::move(next);
        len *= 0.25;
      }
      DiscreteMeasure mu(spec.dimension);
      mu.reserve(corners.size());
      const double w = std::ldexp(1.0, -2 * spec.level);
      for (auto [x, y] : corners) mu.add(embed(spec.dimension, x + 0.5 * len, y + 0.5 * len), w);
      return mu;
    }
    case GeneratorKind::uniform_square: {
      require_level(spec.level, 12);
      if (spec.dimension < 2) throw InputError("uniform square needs dimension >= 2");
      const std::int64_t side = std::int64_t{1} << spec.level;
      const double h = std::ldexp(1.0, -spec.level);
      DiscreteMeasure mu(spec.dimension);
      mu.reserve(static_cast<std::size_t>(side * side));
      const double w = h * h;
      for (std::int64_t j = 0; j < side; ++j) {
        for (std::int64_t i = 0; i < side; ++i) {
          mu.add(embed(spec.dimension, (static_cast<double>(i) + 0.5) * h,
                       (static_cast<double>(j) + 0.5) * h),
                 w);
        }
      }
      return mu;
    }
    case GeneratorKind::circle: {
      require_level(spec.level, 24);
      if (!(spec.radius > 0.0)) throw InputError("circle radius must be > 0");
      const std::vector<double> center =
          spec.points.empty() ? std::vector<double>{0.0, 0.0} : spec.points[0];
      if (center.size() < 2) throw InputError("circle center needs two coordinates");
      const std::size_t pieces = std::size_t{1} << spec.level;
      const double step = 2.0 * std::numbers::pi / static_cast<double>(pieces);
      DiscreteMeasure mu(static_cast<int>(center.size()));
      mu.reserve(pieces);
      std::vector<double> x = center;
      for (std::size_t i = 0; i < pieces; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * step;
        x[0] = center[0] + spec.radius * std::cos(t);
        x[1] = center[1] + spec.radius * std::sin(t);
        mu.add(x, spec.radius * step);
      }
      return mu;
    }
    case GeneratorKind::random_uniform: {
      std::mt19937_64 rng(spec.seed);
      DiscreteMeasure mu(spec.dimension);
      mu.reserve(spec.count);
      std::vector<double> x(static_cast<std::size_t>(spec.dimension));
      for (std::size_t i = 0; i < spec.count; ++i) {
        for (auto& c : x) c = unit_interval(rng());
        mu.add(x, 0.5 + unit_interval(rng()));
      }
      return mu;
    }
  }
  throw InputError("unhandled generator kind");
}

}  // namespace rectiscope
