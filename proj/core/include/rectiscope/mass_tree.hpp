#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rectiscope/dyadic.hpp"
#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Handle to a stored cube: its level and its position in that level's ordering.
struct NodeRef {
  int level = 0;
  std::uint32_t index = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

/// Sparse dyadic tree over levels 0..depth holding mu(Q) for every cube with positive mass.
///
/// Cubes at each level are ordered lexicographically by grid coordinates.
/// Leaf masses are summed in atom-index order, interior masses as the sum of
/// the children in cube order, so builds are reproducible bit for bit.
/// Immutable after build(); concurrent reads are safe.
class MassTree {
 public:
  static MassTree build(const DiscreteMeasure& mu, int depth);

  int depth() const { return depth_; }
  int dimension() const { return dimension_; }
  std::size_t atom_count() const { return atom_leaf_.size(); }
  bool empty() const { return levels_.empty() || levels_[0].mass.empty(); }

  std::size_t cube_count(int level) const { return levels_.at(level).mass.size(); }
  std::size_t total_cube_count() const;

  std::span<const std::int64_t> coords(NodeRef node) const;
  DyadicCubeId id(NodeRef node) const;
  double mass(NodeRef node) const { return levels_[node.level].mass[node.index]; }
  std::optional<NodeRef> parent(NodeRef node) const;
  std::span<const std::uint32_t> children(NodeRef node) const;

  /// Atom indices of a level-depth cube, ascending.
  std::span<const std::uint32_t> leaf_atoms(NodeRef leaf) const;
  /// Atom indices of any stored cube (all descendant leaves), ascending.
  std::vector<std::size_t> atoms_in(NodeRef node) const;

  std::vector<NodeRef> roots() const;
  std::optional<NodeRef> find(const DyadicCubeId& q) const;

  /// mu(Q); 0 for cubes that are not stored. Throws DepthError if q.level > depth().
  double cube_mass(const DyadicCubeId& q) const;

  NodeRef leaf_of_atom(std::size_t atom) const {
    return {depth_, atom_leaf_[atom]};
  }
  /// Cubes Q_0(x) ⊃ Q_1(x) ⊃ ... ⊃ Q_depth(x) containing atom x, coarse to fine.
  std::vector<NodeRef> chain(std::size_t atom) const;

  /// Stored cubes contained in `top` (top included), level by level in cube order.
  std::vector<NodeRef> descendants(NodeRef top) const;

  /// Atoms in the half-open triple box 3Q of a stored or unstored cube, ascending.
  std::vector<std::size_t> triple_atoms(const DyadicCubeId& q) const;

 private:
  struct Level {
    std::vector<std::int64_t> coords;  // count * dimension, row-major
    std::vector<double> mass;
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> child_offset;  // CSR into children, size count + 1
    std::vector<std::uint32_t> children;
  };

  int depth_ = 0;
  int dimension_ = 0;
  std::vector<Level> levels_;
  std::vector<std::uint32_t> atom_leaf_;
  std::vector<std::uint32_t> leaf_atom_offset_;
  std::vector<std::uint32_t> leaf_atoms_;
};

}  // namespace rectiscope
