#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nca {

using Vertex = std::int32_t;

enum class FamilyKind { Binary, General };

std::string_view family_name(FamilyKind family);

// Arena-style rooted tree. Vertex ids are 0..size()-1, the root is its own
// parent, children are stored in one flat array (CSR). Immutable after
// construction; cheap to move, safe to share across threads.
class RootedTree {
 public:
  // parent[v] == v marks the root; exactly one such vertex must exist and
  // every other vertex must reach it. Throws std::invalid_argument otherwise.
  explicit RootedTree(std::vector<Vertex> parent);

  Vertex size() const { return static_cast<Vertex>(parent_.size()); }
  Vertex root() const { return root_; }

  Vertex parent(Vertex v) const {
    check_vertex(v);
    return parent_[v];
  }
  Vertex depth(Vertex v) const {
    check_vertex(v);
    return depth_[v];
  }
  std::span<const Vertex> children(Vertex v) const {
    check_vertex(v);
    return {child_data_.data() + child_begin_[v],
            child_data_.data() + child_begin_[v + 1]};
  }
  bool is_leaf(Vertex v) const { return children(v).empty(); }
  Vertex degree(Vertex v) const { return static_cast<Vertex>(children(v).size()); }
  Vertex max_degree() const;

  const std::vector<Vertex>& parents() const { return parent_; }

 private:
  void check_vertex(Vertex v) const;

  Vertex root_ = 0;
  std::vector<Vertex> parent_;
  std::vector<Vertex> depth_;
  std::vector<Vertex> child_data_;
  std::vector<std::int64_t> child_begin_;
};

// A rooted tree with one distinguished leaf. The single-vertex tree is the
// degenerate case where the root doubles as the marked leaf.
struct MarkedTree {
  MarkedTree(RootedTree t, Vertex marked_leaf);

  RootedTree tree;
  Vertex marked;
};

// Deepest common ancestor of u and v (every vertex is its own ancestor).
// Lifts the deeper vertex to equal depth, then both in lockstep.
Vertex nca_oracle(const RootedTree& t, Vertex u, Vertex v);

// AHU-style canonical string; equal iff the trees are isomorphic as
// unlabeled rooted (marked) trees. Children are ordered by canonical form
// with '(' < '*' < ')'.
std::string canonical_form(const RootedTree& t);
std::string canonical_form(const MarkedTree& t);
std::string canonical_subtree(const RootedTree& t, Vertex v);

// Comparison used for canonical child ordering.
bool canonical_less(std::string_view a, std::string_view b);

// Parenthesis grammar: tree ::= "(" tree* ")", a leaf is "()" and the
// marked leaf, when allowed, is "(*)". Whitespace between tokens ignored.
// Vertex ids are assigned in the order vertices are opened.
struct ParsedTree {
  RootedTree tree;
  std::optional<Vertex> marked;
};
ParsedTree parse_tree(std::string_view text, bool marked_allowed);

// Canonical serialization; parse_tree(serialize_tree(t)) is isomorphic to t.
std::string serialize_tree(const RootedTree& t);
std::string serialize_tree(const MarkedTree& t);

inline constexpr Vertex kDefaultEnumerationLimit = 12;

// One representative per isomorphism class of unlabeled rooted trees with
// exactly n vertices (Binary: every vertex has at most two children).
// Output is sorted by canonical form.
std::vector<RootedTree> enumerate_trees(Vertex n, FamilyKind family,
                                        Vertex limit = kDefaultEnumerationLimit);

// Deterministic random tree for a given seed. General: uniform-attachment
// recursive tree. Binary: uniform over binary tree shapes, sampled from the
// exact shape counts.
RootedTree random_tree(Vertex n, FamilyKind family, std::uint64_t seed);

}  // namespace nca
