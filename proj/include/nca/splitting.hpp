#pragma once

#include <cstdint>
#include <vector>

#include "nca/tree.hpp"

namespace nca {

// Size bound ceil(lambda*n) for the component that keeps the root when a
// tree is split. Shared by the splitting walk and the slot layout so both
// sides round identically.
std::int64_t split_threshold(double lambda, std::int64_t n);

// A component of a split, re-indexed to 0..k-1, with the translation back
// to vertex ids of the split input.
struct TreePart {
  RootedTree tree;
  std::vector<Vertex> to_input;
};

struct MarkedPart {
  MarkedTree part;
  std::vector<Vertex> to_input;
};

// Split at a vertex v chosen on the heaviest-child walk from the root:
// the deepest vertex whose root-side component has at most ceil(lambda*n)
// vertices. Removing the edges from v to its children then leaves
//   root_part: the root-side component with v as its marked leaf,
//   child_parts: the components rooted at v's children, sorted by size
//     descending (canonical form breaks ties); the i-th part (1-indexed)
//     has size at most min(n - ceil(lambda*n), n/i).
struct SplitResult {
  Vertex split_vertex;
  MarkedPart root_part;
  std::vector<TreePart> child_parts;
};

// Same split driven along the root-to-marked-leaf path. The component that
// contains the marked leaf stays marked; the remaining components are at
// most n-1 large and the i-th of them (i >= 2) at most n/i.
struct MarkedSplitResult {
  Vertex split_vertex;
  MarkedPart root_part;
  MarkedPart marked_part;
  std::vector<TreePart> other_parts;
};

SplitResult split_plain(const RootedTree& t, double lambda);

// Requires n >= ceil(1/(1-lambda)); the split vertex is never the marked
// leaf itself.
MarkedSplitResult split_marked(const MarkedTree& t, double lambda);

}  // namespace nca
