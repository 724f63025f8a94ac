#include "rectiscope/measure.hpp"

#include <cmath>
#include <string>

#include "rectiscope/errors.hpp"

namespace rectiscope {

namespace {

void validate_atom(std::span<const double> position, double weight, std::size_t index) {
  for (double c : position) {
    if (!std::isfinite(c)) {
      throw InputError("atom " + std::to_string(index) + ": non-finite coordinate");
    }
  }
  if (!std::isfinite(weight) || !(weight > 0.0)) {
    throw InputError("atom " + std::to_string(index) + ": weight must be finite and > 0");
  }
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw InputError("dimension must be >= 1");
}

DiscreteMeasure::DiscreteMeasure(int dimension, std::vector<double> positions,
                                 std::vector<double> weights)
    : DiscreteMeasure(dimension) {
  if (positions.size() != weights.size() * static_cast<std::size_t>(dimension)) {
    throw InputError("position buffer size does not match weights * dimension");
  }
  positions_ = std::move(positions);
  weights_ = std::move(weights);
  for (std::size_t i = 0; i < weights_.size(); ++i) validate_atom(position(i), weights_[i], i);
}

void DiscreteMeasure::add(std::span<const double> position, double weight) {
  if (position.size() != static_cast<std::size_t>(dimension_)) {
    throw InputError("atom " + std::to_string(size()) + ": expected " +
                     std::to_string(dimension_) + " coordinates, got " +
                     std::to_string(position.size()));
  }
  validate_atom(position, weight, size());
  positions_.insert(positions_.end(), position.begin(), position.end());
  weights_.push_back(weight);
}

void DiscreteMeasure::reserve(std::size_t count) {
  positions_.reserve(count * static_cast<std::size_t>(dimension_));
  weights_.reserve(count);
}

double DiscreteMeasure::total_mass() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

DiscreteMeasure DiscreteMeasure::subset(std::span<const std::size_t> indices) const {
  DiscreteMeasure out(dimension_);
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    auto p = position(i);
    out.positions_.insert(out.positions_.end(), p.begin(), p.end());
    out.weights_.push_back(weights_[i]);
  }
  return out;
}

bool Ball::contains(std::span<const double> x) const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - center[i];
    d2 += d * d;
  }
  return std::sqrt(d2) <= radius;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] >= lower[i] + side) return false;
  }
  return true;
}

double Box::diameter() const { return std::sqrt(static_cast<double>(lower.size())) * side; }

double ball_mass(const DiscreteMeasure& mu, const Ball& ball) {
  if (!(ball.radius > 0.0)) throw InputError("ball radius must be > 0");
  double mass = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (ball.contains(mu.position(i))) mass += mu.weight(i);
  }
  return mass;
}

std::vector<std::size_t> atoms_in(const DiscreteMeasure& mu, const Ball& ball) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (ball.contains(mu.position(i))) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> atoms_in(const DiscreteMeasure& mu, const Box& box) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (box.contains(mu.position(i))) out.push_back(i);
  }
  return out;
}

DiscreteMeasure restrict(const DiscreteMeasure& mu,
                         const std::function<bool(std::span<const double>)>& keep) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (keep(mu.position(i))) kept.push_back(i);
  }
  return mu.subset(kept);
}

}  // namespace rectiscope
