#include <gtest/gtest.h>

#include <cmath>

#include "rectiscope/errors.hpp"
#include "rectiscope/generators.hpp"

namespace rectiscope {
namespace {

TEST(Generators, NamesRoundTrip) {
  for (auto kind : {GeneratorKind::atom, GeneratorKind::segment, GeneratorKind::polyline,
                    GeneratorKind::cantor_quarter_line, GeneratorKind::four_corner_cantor,
                    GeneratorKind::uniform_square, GeneratorKind::circle,
                    GeneratorKind::random_uniform}) {
    EXPECT_EQ(parse_generator_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_generator_kind("sierpinski"), InputError);
}

TEST(Generators, CantorQuarterLine) {
  auto mu = generate({.kind = GeneratorKind::cantor_quarter_line, .level = 3});
  ASSERT_EQ(mu.size(), 8u);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-15);
  // Generation 1 keeps [0, 1/4) and [3/4, 1); every atom stays on the x-axis.
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double x = mu.position(i)[0];
    EXPECT_EQ(mu.position(i)[1], 0.0);
    EXPECT_TRUE(x < 0.25 || x >= 0.75) << x;
    EXPECT_EQ(mu.weight(i), 0.125);
  }
}

TEST(Generators, FourCornerCantor) {
  auto mu = generate({.kind = GeneratorKind::four_corner_cantor, .level = 2});
  ASSERT_EQ(mu.size(), 16u);
  EXPECT_NEAR(mu.total_mass(), 1.0, 1e-15);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double c : mu.position(i)) EXPECT_TRUE(c < 0.25 || c >= 0.75);
  }
}

TEST(Generators, UniformSquareIsCellCenters) {
  auto mu = generate({.kind = GeneratorKind::uniform_square, .level = 2});
  ASSERT_EQ(mu.size(), 16u);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double c : mu.position(i)) EXPECT_EQ(std::fmod(c * 4.0, 1.0), 0.5);
    EXPECT_EQ(mu.weight(i), 1.0 / 16.0);
  }
}

TEST(Generators, SegmentMassEqualsPieces) {
  auto mu = generate({.kind = GeneratorKind::segment, .level = 4, .points = {{0, 0}, {1, 1}}});
  EXPECT_EQ(mu.size(), 16u);
  EXPECT_THROW(generate({.kind = GeneratorKind::segment, .level = 4, .points = {{0, 0}}}), InputError);
}

TEST(Generators, CircleLiesOnCircle) {
  auto mu = generate({.kind = GeneratorKind::circle, .level = 5, .points = {{0.5, 0.5}}, .radius = 0.25});
  ASSERT_EQ(mu.size(), 32u);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    EXPECT_NEAR(std::hypot(mu.position(i)[0] - 0.5, mu.position(i)[1] - 0.5), 0.25, 1e-15);
  }
}

TEST(Generators, RandomUniformIsSeeded) {
  auto a = generate({.kind = GeneratorKind::random_uniform, .dimension = 3, .count = 50, .seed = 42});
  auto b = generate({.kind = GeneratorKind::random_uniform, .dimension = 3, .count = 50, .seed = 42});
  auto c = generate({.kind = GeneratorKind::random_uniform, .dimension = 3, .count = 50, .seed = 43});
  auto vec = [](auto span) { return std::vector<double>(span.begin(), span.end()); };
  EXPECT_EQ(vec(a.positions()), vec(b.positions()));
  EXPECT_EQ(vec(a.weights()), vec(b.weights()));
  EXPECT_NE(vec(a.positions()), vec(c.positions()));
  for (double w : a.weights()) {
    EXPECT_GE(w, 0.5);
    EXPECT_LT(w, 1.5);
  }
  for (double x : a.positions()) {
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(Generators, UnitInterval) {
  EXPECT_EQ(unit_interval(0), 0.0);
  EXPECT_LT(unit_interval(~std::uint64_t{0}), 1.0);
}

TEST(Generators, FirstGenerationExamples) {
  auto seg = generate({.kind = GeneratorKind::segment, .level = 1, .points = {{0, 0}, {1, 0}}});
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(seg.position(0)[0], 0.25);
  EXPECT_EQ(seg.position(1)[0], 0.75);
  EXPECT_EQ(seg.weight(0), 0.5);

  auto line = generate({.kind = GeneratorKind::cantor_quarter_line, .level = 1});
  ASSERT_EQ(line.size(), 2u);
  EXPECT_EQ(line.position(0)[0], 0.125);
  EXPECT_EQ(line.position(1)[0], 0.875);
  EXPECT_EQ(line.weight(1), 0.5);

  auto corners = generate({.kind = GeneratorKind::four_corner_cantor, .level = 1});
  ASSERT_EQ(corners.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (double c : corners.position(i)) EXPECT_TRUE(c == 0.125 || c == 0.875);
    EXPECT_EQ(corners.weight(i), 0.25);
  }
}

TEST(Generators, TotalMass) {
  auto poly = generate({.kind = GeneratorKind::polyline, .level = 6, .points = {{0, 0}, {3, 4}, {3, 0}}});
  EXPECT_NEAR(poly.total_mass(), 9.0, 1e-12);
  for (int k : {1, 5, 9}) {
    EXPECT_NEAR(generate({.kind = GeneratorKind::cantor_quarter_line, .level = k}).total_mass(), 1.0, 1e-12);
    EXPECT_NEAR(generate({.kind = GeneratorKind::four_corner_cantor, .level = k}).total_mass(), 1.0, 1e-12);
    EXPECT_NEAR(generate({.kind = GeneratorKind::uniform_square, .level = k}).total_mass(), 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace rectiscope
