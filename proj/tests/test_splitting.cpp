#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "nca/splitting.hpp"

using namespace nca;
using nca::testing::marked_of;
using nca::testing::tree_of;

namespace {

// Rebuild the split input from its components by re-adding the cut edges
// at the split vertex, then compare canonical forms.
template <typename Result>
void check_reassembly(const RootedTree& original, const Result& split,
                      const std::vector<const TreePart*>& parts,
                      const std::vector<const MarkedPart*>& marked_parts) {
  std::vector<Vertex> parent(original.size());
  const auto add = [&](const RootedTree& tree, const std::vector<Vertex>& to_input) {
    for (Vertex v = 0; v < tree.size(); ++v) {
      const Vertex p = tree.parent(v);
      parent[to_input[v]] = p == v ? to_input[v] : to_input[p];
    }
  };
  add(split.root_part.part.tree, split.root_part.to_input);
  for (const auto* mp : marked_parts) {
    add(mp->part.tree, mp->to_input);
    parent[mp->to_input[mp->part.tree.root()]] = split.split_vertex;
  }
  for (const auto* tp : parts) {
    add(tp->tree, tp->to_input);
    parent[tp->to_input[tp->tree.root()]] = split.split_vertex;
  }
  CHECK(canonical_form(RootedTree(std::move(parent))) == canonical_form(original));
}

void check_plain_invariants(const RootedTree& t, double lambda) {
  const std::int64_t n = t.size();
  const SplitResult s = split_plain(t, lambda);
  const std::int64_t threshold = split_threshold(lambda, n);
  std::int64_t covered = s.root_part.part.tree.size();
  CHECK(covered <= threshold);
  CHECK(s.root_part.part.marked ==
        std::distance(s.root_part.to_input.begin(),
                      std::find(s.root_part.to_input.begin(), s.root_part.to_input.end(),
                                s.split_vertex)));
  for (std::size_t i = 0; i < s.child_parts.size(); ++i) {
    const std::int64_t size = s.child_parts[i].tree.size();
    CHECK(size <= n - threshold);
    CHECK(size <= n / static_cast<std::int64_t>(i + 1));
    if (i > 0) CHECK(size <= s.child_parts[i - 1].tree.size());
    covered += size;
  }
  CHECK(covered == n);
  std::vector<const TreePart*> parts;
  for (const auto& p : s.child_parts) parts.push_back(&p);
  check_reassembly(t, s, parts, {});
}

void check_marked_invariants(const MarkedTree& t, double lambda) {
  const std::int64_t n = t.tree.size();
  const MarkedSplitResult s = split_marked(t, lambda);
  const std::int64_t threshold = split_threshold(lambda, n);
  CHECK(s.root_part.part.tree.size() <= threshold);
  CHECK(s.marked_part.part.tree.size() <= n - threshold);
  CHECK(s.split_vertex != t.marked);
  // the split vertex lies on the root-to-marked path
  bool on_path = false;
  for (Vertex x = t.marked;; x = t.tree.parent(x)) {
    if (x == s.split_vertex) on_path = true;
    if (t.tree.parent(x) == x) break;
  }
  CHECK(on_path);
  // the marked leaf stays marked in its component
  CHECK(s.marked_part.to_input[s.marked_part.part.marked] == t.marked);
  std::int64_t covered = s.root_part.part.tree.size() + s.marked_part.part.tree.size();
  for (std::size_t i = 0; i < s.other_parts.size(); ++i) {
    const std::int64_t size = s.other_parts[i].tree.size();
    CHECK(size <= n - 1);
    if (i >= 1) CHECK(size <= n / static_cast<std::int64_t>(i + 1));
    if (i > 0) CHECK(size <= s.other_parts[i - 1].tree.size());
    covered += size;
  }
  CHECK(covered == n);
  std::vector<const TreePart*> parts;
  for (const auto& p : s.other_parts) parts.push_back(&p);
  check_reassembly(t.tree, s, parts, {&s.marked_part});
}

MarkedTree mark_highest_leaf(const RootedTree& t) {
  Vertex leaf = -1;
  for (Vertex v = 0; v < t.size(); ++v)
    if (t.is_leaf(v)) leaf = v;
  return MarkedTree(t, leaf);
}

}  // namespace

TEST_CASE("split threshold") {
  CHECK(split_threshold(0.5, 3) == 2);
  CHECK(split_threshold(0.5, 4) == 2);
  CHECK(split_threshold(0.296149, 2) == 1);
  CHECK(split_threshold(0.341395, 3) == 2);
  CHECK(split_threshold(0.1, 1) == 1);
}

TEST_CASE("split_plain: pinned examples") {
  SUBCASE("chain of three, lambda 1/2") {
    const SplitResult s = split_plain(tree_of("((()))"), 0.5);
    CHECK(s.split_vertex == 1);
    CHECK(s.root_part.part.tree.size() == 2);
    CHECK(s.root_part.to_input == std::vector<Vertex>{0, 1});
    REQUIRE(s.child_parts.size() == 1);
    CHECK(s.child_parts[0].to_input == std::vector<Vertex>{2});
  }
  SUBCASE("single vertex") {
    const SplitResult s = split_plain(tree_of("()"), 0.5);
    CHECK(s.split_vertex == 0);
    CHECK(s.root_part.part.tree.size() == 1);
    CHECK(s.child_parts.empty());
  }
  SUBCASE("star with four leaves, lambda 1/2") {
    const SplitResult s = split_plain(tree_of("(()()()())"), 0.5);
    CHECK(s.split_vertex == 0);
    CHECK(s.root_part.part.tree.size() == 1);
    CHECK(s.child_parts.size() == 4);
    for (const auto& part : s.child_parts) CHECK(part.tree.size() == 1);
  }
}

TEST_CASE("split_plain: returned vertex satisfies the component bounds everywhere") {
  // every candidate bound is checked exhaustively over all small shapes
  for (Vertex n = 1; n <= 8; ++n)
    for (const RootedTree& t : enumerate_trees(n, FamilyKind::General))
      for (double lambda : {0.5, 0.296149, 0.341395}) check_plain_invariants(t, lambda);
}

TEST_CASE("split_marked: pinned examples") {
  SUBCASE("marked chain") {
    const MarkedSplitResult s = split_marked(marked_of("(((*)))"), 0.5);
    CHECK(s.split_vertex == 1);
    CHECK(s.root_part.to_input == std::vector<Vertex>{0, 1});
    CHECK(s.marked_part.part.tree.size() == 1);
    CHECK(s.other_parts.empty());
  }
  SUBCASE("two vertices") {
    const MarkedSplitResult s = split_marked(marked_of("((*))"), 0.5);
    CHECK(s.split_vertex == 0);
    CHECK(s.root_part.part.tree.size() == 1);
    CHECK(s.marked_part.part.tree.size() == 1);
  }
  SUBCASE("marked leaf beside a chain") {
    const MarkedSplitResult s = split_marked(marked_of("((*)(()))"), 0.5);
    CHECK(s.split_vertex == 0);
    CHECK(s.root_part.part.tree.size() == 1);
    CHECK(s.marked_part.part.tree.size() == 1);
    REQUIRE(s.other_parts.size() == 1);
    CHECK(s.other_parts[0].tree.size() == 2);
  }
  SUBCASE("too small") {
    CHECK_THROWS_AS(split_marked(marked_of("(*)"), 0.5), std::invalid_argument);
  }
}

TEST_CASE("split invariants over random trees") {
  for (FamilyKind family : {FamilyKind::Binary, FamilyKind::General})
    for (Vertex n : {10, 100, 1000}) {
      const int trees = 1000;
      for (int i = 0; i < trees; ++i) {
        const RootedTree t =
            random_tree(n, family, 1000 + static_cast<std::uint64_t>(i));
        const MarkedTree mt = mark_highest_leaf(t);
        for (double lambda : {0.5, 0.296149, 0.341395}) {
          check_plain_invariants(t, lambda);
          check_marked_invariants(mt, lambda);
        }
      }
    }
}

TEST_CASE("split_plain is deterministic") {
  const RootedTree t = random_tree(200, FamilyKind::General, 9);
  const SplitResult a = split_plain(t, 0.341395);
  const SplitResult b = split_plain(t, 0.341395);
  CHECK(a.split_vertex == b.split_vertex);
  REQUIRE(a.child_parts.size() == b.child_parts.size());
  for (std::size_t i = 0; i < a.child_parts.size(); ++i)
    CHECK(a.child_parts[i].to_input == b.child_parts[i].to_input);
}
