#pragma once

// Test-only helpers: oracles that stay independent of the code paths they
// are used to check, plus a memory-lean host materialization for the large
// decoder comparisons.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nca/construction.hpp"
#include "nca/splitting.hpp"
#include "nca/tree.hpp"

namespace nca::testing {

inline RootedTree tree_of(const char* text) {
  return parse_tree(text, /*marked_allowed=*/false).tree;
}

inline MarkedTree marked_of(const char* text) {
  auto parsed = parse_tree(text, /*marked_allowed=*/true);
  if (!parsed.marked) throw std::invalid_argument("test tree has no marked leaf");
  return MarkedTree(std::move(parsed.tree), *parsed.marked);
}

// NCA straight from the definition: mark every ancestor of u, then walk up
// from v to the first marked vertex.
inline Vertex definition_nca(const RootedTree& t, Vertex u, Vertex v) {
  std::vector<char> on_u_path(t.size(), 0);
  for (Vertex x = u;; x = t.parent(x)) {
    on_u_path[x] = 1;
    if (t.parent(x) == x) break;
  }
  Vertex x = v;
  while (!on_u_path[x]) x = t.parent(x);
  return x;
}

// Parent/depth arrays of a host tree, laid out exactly like materialize()
// but without child lists, so hosts far beyond the library's
// materialization limit stay checkable.
struct LeanHost {
  std::vector<Vertex> parent;
  std::vector<std::uint16_t> depth;

  Vertex nca(Vertex x, Vertex y) const {
    while (depth[x] > depth[y]) x = parent[x];
    while (depth[y] > depth[x]) y = parent[y];
    while (x != y) {
      x = parent[x];
      y = parent[y];
    }
    return x;
  }
};

inline LeanHost lean_materialize(Construction& c, NodeKind kind, std::int64_t m) {
  const double lambda = c.params().lambda;
  const bool general = c.params().family == FamilyKind::General;

  // flat lookups instead of the hash-backed caches: the unfolding touches
  // every recursion parameter up to m many times
  std::vector<std::int64_t> plain(m + 1), marked(m + 1), leaf_label(m + 1);
  std::vector<std::int32_t> leaf_depth(m + 1);
  for (std::int64_t k = 0; k <= m; ++k) {
    plain[k] = c.size_of(NodeKind::Plain, k);
    marked[k] = c.size_of(NodeKind::Marked, k);
    leaf_label[k] = k >= 1 ? c.marked_leaf_label(k) : 0;
    leaf_depth[k] = k >= 2 ? leaf_depth[(k + 1) / 2] + 1 + leaf_depth[k / 2] : 0;
  }

  const std::int64_t total = kind == NodeKind::Plain ? plain[m] : marked[m];
  LeanHost host;
  host.parent.resize(static_cast<std::size_t>(total));
  host.depth.resize(static_cast<std::size_t>(total));

  struct Frame {
    NodeKind kind;
    std::int64_t m;
    std::int64_t base;
    std::int64_t parent;
    std::int32_t depth;
  };
  std::vector<Frame> stack{{kind, m, 0, 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.m == 1) {
      if (f.depth > 65534) throw std::overflow_error("host depth exceeds uint16");
      host.parent[f.base] = static_cast<Vertex>(f.parent);
      host.depth[f.base] = static_cast<std::uint16_t>(f.depth);
      continue;
    }
    const std::int64_t top =
        f.kind == NodeKind::Plain ? split_threshold(lambda, f.m) : (f.m + 1) / 2;
    stack.push_back({NodeKind::Marked, top, f.base, f.parent, f.depth});
    const std::int64_t attach = f.base + leaf_label[top];
    const std::int32_t attach_depth = f.depth + leaf_depth[top];
    std::int64_t offset = marked[top];
    const auto slot = [&](NodeKind k, std::int64_t param) {
      stack.push_back({k, param, f.base + offset, attach, attach_depth + 1});
      offset += k == NodeKind::Plain ? plain[param] : marked[param];
    };
    if (f.kind == NodeKind::Plain) {
      slot(NodeKind::Plain, f.m - top);
      if (general) {
        for (std::int64_t i = 2; i <= f.m; ++i) slot(NodeKind::Plain, f.m / i);
      } else {
        slot(NodeKind::Plain, f.m / 2);
      }
    } else {
      slot(NodeKind::Marked, f.m / 2);
      slot(NodeKind::Plain, f.m - 1);
      if (general)
        for (std::int64_t i = 2; i <= f.m; ++i) slot(NodeKind::Plain, f.m / i);
    }
    if (offset != (f.kind == NodeKind::Plain ? plain[f.m] : marked[f.m]))
      throw std::logic_error("lean unfolding does not tile the host");
  }
  return host;
}

}  // namespace nca::testing
