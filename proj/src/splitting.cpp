#include "nca/splitting.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace nca {

std::int64_t split_threshold(double lambda, std::int64_t n) {
  const auto t = static_cast<std::int64_t>(std::ceil(lambda * static_cast<double>(n)));
  return std::max<std::int64_t>(t, 1);
}

namespace {

std::vector<Vertex> subtree_sizes(const RootedTree& t) {
  const Vertex n = t.size();
  std::vector<Vertex> order;
  order.reserve(n);
  order.push_back(t.root());
  for (std::size_t head = 0; head < order.size(); ++head)
    for (Vertex c : t.children(order[head])) order.push_back(c);
  std::vector<Vertex> size(n, 1);
  for (std::size_t i = order.size(); i-- > 1;) size[t.parent(order[i])] += size[order[i]];
  return size;
}

std::vector<Vertex> subtree_vertices(const RootedTree& t, Vertex v) {
  std::vector<Vertex> out{v};
  for (std::size_t head = 0; head < out.size(); ++head)
    for (Vertex c : t.children(out[head])) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

// Re-index `vertices` (ascending original ids) as a standalone tree.
std::pair<RootedTree, std::vector<Vertex>> extract(const RootedTree& t,
                                                   const std::vector<Vertex>& vertices) {
  std::vector<Vertex> local(t.size(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<Vertex>(i);
  std::vector<Vertex> parent(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex p = t.parent(vertices[i]);
    parent[i] = (p != vertices[i] && local[p] >= 0) ? local[p] : static_cast<Vertex>(i);
  }
  return {RootedTree(std::move(parent)), vertices};
}

std::vector<TreePart> extract_sorted_parts(const RootedTree& t,
                                           const std::vector<Vertex>& roots) {
  struct Piece {
    std::vector<Vertex> vertices;
    std::string canon;
  };
  std::vector<Piece> pieces;
  pieces.reserve(roots.size());
  for (Vertex r : roots)
    pieces.push_back(Piece{subtree_vertices(t, r), canonical_subtree(t, r)});
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() > b.vertices.size();
    return canonical_less(a.canon, b.canon);
  });
  std::vector<TreePart> parts;
  parts.reserve(pieces.size());
  for (const auto& p : pieces) {
    auto [tree, ids] = extract(t, p.vertices);
    parts.push_back(TreePart{std::move(tree), std::move(ids)});
  }
  return parts;
}

MarkedPart extract_marked(const RootedTree& t, const std::vector<Vertex>& vertices,
                          Vertex marked_orig) {
  auto [tree, ids] = extract(t, vertices);
  const auto it = std::lower_bound(ids.begin(), ids.end(), marked_orig);
  const auto local = static_cast<Vertex>(it - ids.begin());
  return MarkedPart{MarkedTree(std::move(tree), local), std::move(ids)};
}

std::vector<Vertex> root_side_vertices(const RootedTree& t, Vertex v) {
  std::vector<Vertex> removed(t.size(), 0);
  for (Vertex c : t.children(v))
    for (Vertex x : subtree_vertices(t, c)) removed[x] = 1;
  std::vector<Vertex> keep;
  for (Vertex x = 0; x < t.size(); ++x)
    if (!removed[x]) keep.push_back(x);
  return keep;
}

// Deepest vertex on `path` whose root-side component (everything outside
// the subtree below it) stays within the threshold.
Vertex last_within_threshold(const std::vector<Vertex>& path, const std::vector<Vertex>& size,
                             std::int64_t n, std::int64_t threshold) {
  Vertex best = path.front();
  for (Vertex v : path)
    if (n - (size[v] - 1) <= threshold) best = v;
  return best;
}

}  // namespace

SplitResult split_plain(const RootedTree& t, double lambda) {
  if (lambda <= 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in (0, 1]");
  const std::int64_t n = t.size();
  const std::int64_t threshold = split_threshold(lambda, n);
  const std::vector<Vertex> size = subtree_sizes(t);

  // heaviest-child walk, ties broken by smallest canonical form
  std::vector<Vertex> path{t.root()};
  for (Vertex v = t.root(); !t.is_leaf(v);) {
    Vertex next = -1;
    std::string next_canon;
    for (Vertex c : t.children(v)) {
      if (next >= 0 && size[c] < size[next]) continue;
      std::string canon = canonical_subtree(t, c);
      if (next < 0 || size[c] > size[next] || canonical_less(canon, next_canon)) {
        next = c;
        next_canon = std::move(canon);
      }
    }
    path.push_back(next);
    v = next;
  }
  const Vertex v = last_within_threshold(path, size, n, threshold);

  SplitResult result{
      v,
      extract_marked(t, root_side_vertices(t, v), v),
      extract_sorted_parts(t, {t.children(v).begin(), t.children(v).end()}),
  };
  assert(static_cast<std::int64_t>(result.root_part.part.tree.size()) <= threshold);
  return result;
}

MarkedSplitResult split_marked(const MarkedTree& t, double lambda) {
  if (lambda <= 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in (0, 1]");
  const std::int64_t n = t.tree.size();
  if (static_cast<double>(n) * (1.0 - lambda) < 1.0)
    throw std::invalid_argument("tree too small for the marked split");
  const std::int64_t threshold = split_threshold(lambda, n);
  const std::vector<Vertex> size = subtree_sizes(t.tree);

  std::vector<Vertex> path;  // root .. marked
  for (Vertex x = t.marked;; x = t.tree.parent(x)) {
    path.push_back(x);
    if (t.tree.parent(x) == x) break;
  }
  std::reverse(path.begin(), path.end());
  const Vertex v = last_within_threshold(path, size, n, threshold);
  assert(v != t.marked);

  const auto it = std::find(path.begin(), path.end(), v);
  const Vertex toward_marked = *(it + 1);
  std::vector<Vertex> other_roots;
  for (Vertex c : t.tree.children(v))
    if (c != toward_marked) other_roots.push_back(c);

  MarkedSplitResult result{
      v,
      extract_marked(t.tree, root_side_vertices(t.tree, v), v),
      extract_marked(t.tree, subtree_vertices(t.tree, toward_marked), t.marked),
      extract_sorted_parts(t.tree, other_roots),
  };
  assert(static_cast<std::int64_t>(result.root_part.part.tree.size()) <= threshold);
  assert(static_cast<std::int64_t>(result.marked_part.part.tree.size()) <= n - threshold);
  return result;
}

}  // namespace nca
