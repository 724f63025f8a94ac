#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rectiscope {

/// A finite Borel measure on R^n given as a list of weighted atoms.
///
/// Positions are stored row-major in one flat buffer. Every weight is
/// strictly positive and every coordinate finite; the constructor and
/// add() enforce both.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(int dimension);

  /// Takes ownership of a flat position buffer (size == weights.size() * dimension).
  DiscreteMeasure(int dimension, std::vector<double> positions, std::vector<double> weights);

  void add(std::span<const double> position, double weight);
  void reserve(std::size_t count);

  int dimension() const { return dimension_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  std::span<const double> position(std::size_t i) const {
    return {positions_.data() + i * static_cast<std::size_t>(dimension_),
            static_cast<std::size_t>(dimension_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }

  std::span<const double> positions() const { return positions_; }
  std::span<const double> weights() const { return weights_; }

  /// Sum of weights, accumulated in atom order.
  double total_mass() const;

  /// Measure built from the listed atoms, in the listed order.
  DiscreteMeasure subset(std::span<const std::size_t> indices) const;

 private:
  int dimension_;
  std::vector<double> positions_;
  std::vector<double> weights_;
};

/// Closed Euclidean ball B(x, r).
struct Ball {
  std::vector<double> center;
  double radius = 0.0;

  bool contains(std::span<const double> x) const;
  double diameter() const { return 2.0 * radius; }
};

/// Axis-aligned half-open box [lower_i, lower_i + side).
struct Box {
  std::vector<double> lower;
  double side = 0.0;

  bool contains(std::span<const double> x) const;
  double diameter() const;
};

/// Mass of the closed ball: sum of weights with |x_i - center| <= r.
double ball_mass(const DiscreteMeasure& mu, const Ball& ball);

/// Atoms of mu whose positions lie in the ball, in atom order.
std::vector<std::size_t> atoms_in(const DiscreteMeasure& mu, const Ball& ball);
std::vector<std::size_t> atoms_in(const DiscreteMeasure& mu, const Box& box);

/// mu restricted to {x : keep(x)}; weights are unchanged.
DiscreteMeasure restrict(const DiscreteMeasure& mu,
                         const std::function<bool(std::span<const double>)>& keep);

}  // namespace rectiscope
