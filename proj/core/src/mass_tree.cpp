#include "rectiscope/mass_tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "rectiscope/errors.hpp"

namespace rectiscope {

namespace {

constexpr int kMaxDepth = 52;

bool lex_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool lex_equal(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

MassTree MassTree::build(const DiscreteMeasure& mu, int depth) {
  if (depth < 0 || depth > kMaxDepth) {
    throw InputError("tree depth must be in [0, " + std::to_string(kMaxDepth) + "]");
  }
  if (mu.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("too many atoms for a mass tree");
  }

  MassTree tree;
  tree.depth_ = depth;
  tree.dimension_ = mu.dimension();
  tree.levels_.resize(static_cast<std::size_t>(depth) + 1);
  const std::size_t n = static_cast<std::size_t>(mu.dimension());
  const std::size_t count = mu.size();

  std::vector<std::int64_t> atom_coords(count * n);
  for (std::size_t i = 0; i < count; ++i) {
    auto x = mu.position(i);
    for (std::size_t d = 0; d < n; ++d) atom_coords[i * n + d] = grid_coordinate(x[d], depth);
  }
  auto atom_key = [&](std::size_t i) {
    return std::span<const std::int64_t>(atom_coords.data() + i * n, n);
  };

  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return lex_less(atom_key(a), atom_key(b));
  });

  // Leaves: group atoms sharing a level-depth cube.
  Level& leaves = tree.levels_[depth];
  tree.atom_leaf_.assign(count, 0);
  tree.leaf_atom_offset_.push_back(0);
  for (std::size_t pos = 0; pos < count;) {
    std::size_t end = pos + 1;
    while (end < count && lex_equal(atom_key(order[pos]), atom_key(order[end]))) ++end;
    const auto leaf = static_cast<std::uint32_t>(leaves.mass.size());
    auto key = atom_key(order[pos]);
    leaves.coords.insert(leaves.coords.end(), key.begin(), key.end());
    // stable_sort kept atom indices ascending inside the group
    double mass = 0.0;
    for (std::size_t k = pos; k < end; ++k) {
      tree.atom_leaf_[order[k]] = leaf;
      tree.leaf_atoms_.push_back(order[k]);
      mass += mu.weight(order[k]);
    }
    leaves.mass.push_back(mass);
    tree.leaf_atom_offset_.push_back(static_cast<std::uint32_t>(tree.leaf_atoms_.size()));
    pos = end;
  }
  leaves.child_offset.assign(leaves.mass.size() + 1, 0);

  // Interior levels, finest to coarsest.
  for (int j = depth - 1; j >= 0; --j) {
    Level& child = tree.levels_[j + 1];
    Level& level = tree.levels_[j];
    const std::size_t child_count = child.mass.size();
    std::vector<std::int64_t> parent_coords(child.coords.size());
    for (std::size_t k = 0; k < parent_coords.size(); ++k) parent_coords[k] = child.coords[k] >> 1;
    auto parent_key = [&](std::size_t c) {
      return std::span<const std::int64_t>(parent_coords.data() + c * n, n);
    };
    std::vector<std::uint32_t> corder(child_count);
    std::iota(corder.begin(), corder.end(), 0u);
    std::stable_sort(corder.begin(), corder.end(), [&](std::uint32_t a, std::uint32_t b) {
      return lex_less(parent_key(a), parent_key(b));
    });

    child.parent.assign(child_count, 0);
    level.child_offset.push_back(0);
    for (std::size_t pos = 0; pos < child_count;) {
      std::size_t end = pos + 1;
      while (end < child_count && lex_equal(parent_key(corder[pos]), parent_key(corder[end]))) {
        ++end;
      }
      const auto node = static_cast<std::uint32_t>(level.mass.size());
      auto key = parent_key(corder[pos]);
      level.coords.insert(level.coords.end(), key.begin(), key.end());
      double mass = 0.0;
      for (std::size_t k = pos; k < end; ++k) {
        child.parent[corder[k]] = node;
        level.children.push_back(corder[k]);
        mass += child.mass[corder[k]];
      }
      level.mass.push_back(mass);
      level.child_offset.push_back(static_cast<std::uint32_t>(level.children.size()));
      pos = end;
    }
  }
  return tree;
}

std::size_t MassTree::total_cube_count() const {
  std::size_t total = 0;
  for (const auto& l : levels_) total += l.mass.size();
  return total;
}

std::span<const std::int64_t> MassTree::coords(NodeRef node) const {
  const auto n = static_cast<std::size_t>(dimension_);
  return {levels_[node.level].coords.data() + node.index * n, n};
}

DyadicCubeId MassTree::id(NodeRef node) const {
  auto c = coords(node);
  return {node.level, std::vector<std::int64_t>(c.begin(), c.end())};
}

std::optional<NodeRef> MassTree::parent(NodeRef node) const {
  if (node.level == 0) return std::nullopt;
  return NodeRef{node.level - 1, levels_[node.level].parent[node.index]};
}

std::span<const std::uint32_t> MassTree::children(NodeRef node) const {
  if (node.level == depth_) return {};
  const Level& l = levels_[node.level];
  return {l.children.data() + l.child_offset[node.index],
          l.children.data() + l.child_offset[node.index + 1]};
}

std::span<const std::uint32_t> MassTree::leaf_atoms(NodeRef leaf) const {
  return {leaf_atoms_.data() + leaf_atom_offset_[leaf.index],
          leaf_atoms_.data() + leaf_atom_offset_[leaf.index + 1]};
}

std::vector<std::size_t> MassTree::atoms_in(NodeRef node) const {
  std::vector<std::size_t> out;
  std::vector<NodeRef> stack{node};
  while (!stack.empty()) {
    NodeRef cur = stack.back();
    stack.pop_back();
    if (cur.level == depth_) {
      auto atoms = leaf_atoms(cur);
      out.insert(out.end(), atoms.begin(), atoms.end());
    } else {
      for (auto c : children(cur)) stack.push_back({cur.level + 1, c});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeRef> MassTree::roots() const {
  std::vector<NodeRef> out;
  if (levels_.empty()) return out;
  for (std::uint32_t i = 0; i < levels_[0].mass.size(); ++i) out.push_back({0, i});
  return out;
}

std::optional<NodeRef> MassTree::find(const DyadicCubeId& q) const {
  if (q.level < 0 || q.level > depth_) return std::nullopt;
  if (q.dimension() != dimension_) return std::nullopt;
  const Level& l = levels_[q.level];
  const auto n = static_cast<std::size_t>(dimension_);
  std::size_t lo = 0, hi = l.mass.size();
  const std::span<const std::int64_t> key(q.coords);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    std::span<const std::int64_t> c(l.coords.data() + mid * n, n);
    if (lex_less(c, key)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < l.mass.size() && lex_equal({l.coords.data() + lo * n, n}, key)) {
    return NodeRef{q.level, static_cast<std::uint32_t>(lo)};
  }
  return std::nullopt;
}

double MassTree::cube_mass(const DyadicCubeId& q) const {
  if (q.level > depth_) {
    throw DepthError("cube level " + std::to_string(q.level) + " exceeds tree depth " +
                     std::to_string(depth_));
  }
  if (q.level < 0) throw InputError("cube level must be >= 0");
  auto node = find(q);
  return node ? mass(*node) : 0.0;
}

std::vector<NodeRef> MassTree::chain(std::size_t atom) const {
  std::vector<NodeRef> out(static_cast<std::size_t>(depth_) + 1);
  NodeRef cur = leaf_of_atom(atom);
  for (int j = depth_; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = cur;
    if (j > 0) cur = *parent(cur);
  }
  return out;
}

std::vector<NodeRef> MassTree::descendants(NodeRef top) const {
  std::vector<NodeRef> out{top};
  std::vector<std::uint32_t> frontier{top.index};
  for (int j = top.level; j < depth_; ++j) {
    std::vector<std::uint32_t> next;
    for (auto idx : frontier) {
      for (auto c : children({j, idx})) next.push_back(c);
    }
    std::sort(next.begin(), next.end());
    for (auto c : next) out.push_back({j + 1, c});
    frontier = std::move(next);
  }
  return out;
}

std::vector<std::size_t> MassTree::triple_atoms(const DyadicCubeId& q) const {
  if (q.level > depth_) {
    throw DepthError("cube level " + std::to_string(q.level) + " exceeds tree depth " +
                     std::to_string(depth_));
  }
  const int n = dimension_;
  std::size_t neighbours = 1;
  for (int d = 0; d < n; ++d) neighbours *= 3;
  std::vector<std::size_t> out;
  DyadicCubeId probe = q;
  for (std::size_t code = 0; code < neighbours; ++code) {
    std::size_t rest = code;
    for (int d = 0; d < n; ++d) {
      probe.coords[d] = q.coords[d] + static_cast<std::int64_t>(rest % 3) - 1;
      rest /= 3;
    }
    if (auto node = find(probe)) {
      auto atoms = atoms_in(*node);
      out.insert(out.end(), atoms.begin(), atoms.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rectiscope
