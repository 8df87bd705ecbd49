#pragma once

#include <cstdint>
#include <vector>

#include "nca/construction.hpp"
#include "nca/splitting.hpp"
#include "nca/tree.hpp"

namespace nca {

// Labels assigned to the vertices of one input tree by embedding it into
// the host tree of capacity n. Labels are injective, smaller than
// size_of(Plain, n), and commute with the NCA function.
struct LabelAssignment {
  SchemeParams params;
  std::int64_t capacity;
  std::vector<Label> labels;  // indexed by input vertex id

  // bit length of the largest possible label
  int bits(Construction& c) const;
};

// Recursive embedding of t into S_n: the split vertex goes to the
// attachment point, the root-side component into the top marked slot, the
// i-th child component (size-descending) into slot i. Requires |t| <= n
// and t within params.family.
LabelAssignment embed(Construction& c, const RootedTree& t, std::int64_t n);

// Embedding of a marked tree into S'_m; the marked leaf always receives
// marked_leaf_label(m). The internal split always halves, independent of
// the profile's lambda.
LabelAssignment embed_marked(Construction& c, const MarkedTree& t, std::int64_t m);

}  // namespace nca
