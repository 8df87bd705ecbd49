#include "nca/tree.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace nca {

namespace {

using BigInt = boost::multiprecision::cpp_int;

int char_rank(char c) {
  switch (c) {
    case '(': return 0;
    case '*': return 1;
    case ')': return 2;
    default: return 3;
  }
}

}  // namespace

std::string_view family_name(FamilyKind family) {
  return family == FamilyKind::Binary ? "binary" : "general";
}

bool canonical_less(std::string_view a, std::string_view b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int ra = char_rank(a[i]), rb = char_rank(b[i]);
    if (ra != rb) return ra < rb;
  }
  return a.size() < b.size();
}

void RootedTree::check_vertex(Vertex v) const {
  if (v < 0 || v >= size()) throw std::out_of_range("vertex id out of range");
}

RootedTree::RootedTree(std::vector<Vertex> parent) : parent_(std::move(parent)) {
  const auto n = static_cast<Vertex>(parent_.size());
  if (n == 0) throw std::invalid_argument("tree must have at least one vertex");

  Vertex root = -1;
  std::vector<Vertex> child_count(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    const Vertex p = parent_[v];
    if (p < 0 || p >= n) throw std::invalid_argument("parent id out of range");
    if (p == v) {
      if (root >= 0) throw std::invalid_argument("more than one root");
      root = v;
    } else {
      ++child_count[p];
    }
  }
  if (root < 0) throw std::invalid_argument("no root (no self-parent vertex)");
  root_ = root;

  child_begin_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Vertex v = 0; v < n; ++v) child_begin_[v + 1] = child_begin_[v] + child_count[v];
  child_data_.resize(static_cast<std::size_t>(n) - 1);
  {
    std::vector<std::int64_t> cursor(child_begin_.begin(), child_begin_.end() - 1);
    for (Vertex v = 0; v < n; ++v)
      if (parent_[v] != v) child_data_[cursor[parent_[v]]++] = v;
  }

  // BFS from the root assigns depths and detects cycles / disconnection.
  depth_.assign(n, -1);
  depth_[root_] = 0;
  std::vector<Vertex> queue;
  queue.reserve(n);
  queue.push_back(root_);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = queue[head];
    for (Vertex c : children(v)) {
      depth_[c] = depth_[v] + 1;
      queue.push_back(c);
    }
  }
  if (static_cast<Vertex>(queue.size()) != n)
    throw std::invalid_argument("parent relation is cyclic or disconnected");
}

Vertex RootedTree::max_degree() const {
  Vertex d = 0;
  for (Vertex v = 0; v < size(); ++v) d = std::max(d, degree(v));
  return d;
}

MarkedTree::MarkedTree(RootedTree t, Vertex marked_leaf)
    : tree(std::move(t)), marked(marked_leaf) {
  if (!tree.is_leaf(marked)) {
    if (tree.size() > 1) throw std::invalid_argument("marked vertex is not a leaf");
  }
}

Vertex nca_oracle(const RootedTree& t, Vertex u, Vertex v) {
  Vertex du = t.depth(u), dv = t.depth(v);
  while (du > dv) { u = t.parent(u); --du; }
  while (dv > du) { v = t.parent(v); --dv; }
  while (u != v) { u = t.parent(u); v = t.parent(v); }
  return u;
}

namespace {

std::string canon_rec(const RootedTree& t, Vertex v, Vertex marked) {
  const auto kids = t.children(v);
  if (kids.empty()) return v == marked ? "(*)" : "()";
  std::vector<std::string> parts;
  parts.reserve(kids.size());
  for (Vertex c : kids) parts.push_back(canon_rec(t, c, marked));
  std::sort(parts.begin(), parts.end(),
            [](const std::string& a, const std::string& b) { return canonical_less(a, b); });
  std::string out = "(";
  for (const auto& p : parts) out += p;
  out += ')';
  return out;
}

}  // namespace

std::string canonical_form(const RootedTree& t) { return canon_rec(t, t.root(), -1); }

std::string canonical_form(const MarkedTree& t) {
  if (t.tree.size() == 1) return "(*)";
  return canon_rec(t.tree, t.tree.root(), t.marked);
}

std::string canonical_subtree(const RootedTree& t, Vertex v) { return canon_rec(t, v, -1); }

std::string serialize_tree(const RootedTree& t) { return canonical_form(t); }

std::string serialize_tree(const MarkedTree& t) { return canonical_form(t); }

ParsedTree parse_tree(std::string_view text, bool marked_allowed) {
  std::vector<Vertex> parent;
  std::vector<Vertex> open;  // stack of currently open vertices
  std::optional<Vertex> marked;
  bool top_done = false;     // the single top-level tree has been closed
  Vertex pending_mark = -1;  // vertex whose '*' has been seen but not closed

  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (top_done) throw std::invalid_argument("trailing input after tree");
    if (c == '(') {
      if (pending_mark >= 0) throw std::invalid_argument("marked token on a non-leaf");
      const auto v = static_cast<Vertex>(parent.size());
      parent.push_back(open.empty() ? v : open.back());
      open.push_back(v);
    } else if (c == '*') {
      if (open.empty()) throw std::invalid_argument("'*' outside a vertex");
      if (!marked_allowed) throw std::invalid_argument("marked token not allowed here");
      if (marked) throw std::invalid_argument("more than one marked leaf");
      const Vertex v = open.back();
      // any already-parsed child of v means '*' follows a subtree
      if (v + 1 != static_cast<Vertex>(parent.size()))
        throw std::invalid_argument("marked token on a non-leaf");
      marked = v;
      pending_mark = v;
    } else if (c == ')') {
      if (open.empty()) throw std::invalid_argument("unbalanced parentheses");
      const Vertex v = open.back();
      if (pending_mark >= 0 && pending_mark != v)
        throw std::invalid_argument("marked token on a non-leaf");
      pending_mark = -1;
      open.pop_back();
      if (open.empty()) top_done = true;
    } else {
      throw std::invalid_argument(std::string("unexpected character '") + c + "'");
    }
  }
  if (!open.empty()) throw std::invalid_argument("unbalanced parentheses");
  if (parent.empty()) throw std::invalid_argument("empty input");
  return ParsedTree{RootedTree(std::move(parent)), marked};
}

namespace {

// ---- enumeration ----

RootedTree combine_children(const std::vector<const RootedTree*>& subtrees) {
  Vertex total = 1;
  for (const auto* s : subtrees) total += s->size();
  std::vector<Vertex> parent(total);
  parent[0] = 0;
  Vertex base = 1;
  for (const auto* s : subtrees) {
    for (Vertex v = 0; v < s->size(); ++v) {
      const Vertex p = s->parents()[v];
      parent[base + v] = (p == v) ? 0 : base + p;
    }
    // subtree root keeps parent 0 (child of the new root)
    base += s->size();
  }
  return RootedTree(std::move(parent));
}

class TreeEnumerator {
 public:
  explicit TreeEnumerator(FamilyKind family) : family_(family) {}

  const std::vector<RootedTree>& of_size(Vertex n) {
    while (static_cast<Vertex>(memo_.size()) <= n) memo_.emplace_back();
    if (!memo_[n].empty() || n == 0) return memo_[n];
    std::map<std::string, RootedTree> found;
    if (n == 1) {
      found.emplace("()", RootedTree({0}));
    } else {
      std::vector<Vertex> partition;
      emit_partitions(n - 1, n - 1, partition, found);
    }
    auto& out = memo_[n];
    out.reserve(found.size());
    for (auto& [canon, tree] : found) out.push_back(std::move(tree));
    return out;
  }

 private:
  // non-increasing partitions of remaining, parts bounded by max_part
  void emit_partitions(Vertex remaining, Vertex max_part, std::vector<Vertex>& parts,
                       std::map<std::string, RootedTree>& found) {
    if (remaining == 0) {
      fill_choices(parts, 0, {}, found);
      return;
    }
    if (family_ == FamilyKind::Binary && parts.size() == 2) return;
    for (Vertex p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      emit_partitions(remaining - p, p, parts, found);
      parts.pop_back();
    }
  }

  // choose one subtree per partition slot; within a run of equal sizes the
  // choices are non-decreasing by index, so each multiset appears once
  void fill_choices(const std::vector<Vertex>& parts, std::size_t i,
                    std::vector<const RootedTree*> chosen,
                    std::map<std::string, RootedTree>& found) {
    if (i == parts.size()) {
      RootedTree t = combine_children(chosen);
      std::string canon = canonical_form(t);
      found.emplace(std::move(canon), std::move(t));
      return;
    }
    const auto& pool = of_size(parts[i]);
    std::size_t lo = 0;
    if (i > 0 && parts[i] == parts[i - 1]) {
      const auto& prev_pool = of_size(parts[i - 1]);
      for (std::size_t k = 0; k < prev_pool.size(); ++k)
        if (&prev_pool[k] == chosen[i - 1]) { lo = k; break; }
    }
    for (std::size_t k = lo; k < pool.size(); ++k) {
      chosen.push_back(&pool[k]);
      fill_choices(parts, i + 1, chosen, found);
      chosen.pop_back();
    }
  }

  FamilyKind family_;
  std::vector<std::vector<RootedTree>> memo_;
};

// ---- random generation ----

std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  // rejection sampling keeps the draw uniform and stdlib-independent
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

BigInt bounded_uniform_big(std::mt19937_64& rng, const BigInt& bound) {
  const unsigned bits = static_cast<unsigned>(msb(bound)) + 1;
  const unsigned words = (bits + 63) / 64;
  const unsigned top_shift = words * 64 - bits;
  while (true) {
    BigInt x = 0;
    for (unsigned w = 0; w < words; ++w) {
      x <<= 64;
      x += rng();
    }
    x >>= top_shift;
    if (x < bound) return x;
  }
}

// Exact shape counts for unordered rooted trees with at most two children
// per vertex, plus cumulative class weights used for uniform sampling.
// A class is either "one child of size n-1" or "children of sizes (a, b)".
struct BinaryShapeTable {
  struct SizeClasses {
    std::vector<Vertex> first_child_size;  // -1 for the one-child class marker
    std::vector<BigInt> cumulative;
    BigInt total;
  };
  std::vector<BigInt> count;           // count[s] = number of shapes of size s
  std::vector<SizeClasses> classes;    // per size

  explicit BinaryShapeTable(Vertex n) {
    count.assign(n + 1, 0);
    classes.resize(n + 1);
    count[0] = 0;
    if (n >= 1) count[1] = 1;
    for (Vertex s = 2; s <= n; ++s) {
      auto& sc = classes[s];
      BigInt acc = 0;
      // one-child class
      acc += count[s - 1];
      sc.first_child_size.push_back(-1);
      sc.cumulative.push_back(acc);
      // two-child classes, a >= b >= 1
      for (Vertex a = s - 2; 2 * a >= s - 1; --a) {
        const Vertex b = s - 1 - a;
        BigInt w;
        if (a == b) w = count[a] * (count[a] + 1) / 2;
        else w = count[a] * count[b];
        acc += w;
        sc.first_child_size.push_back(a);
        sc.cumulative.push_back(acc);
      }
      sc.total = acc;
      count[s] = acc;
    }
  }
};

const BinaryShapeTable& binary_shape_table(Vertex n) {
  static std::mutex mu;
  static std::map<Vertex, BinaryShapeTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.lower_bound(n);
  if (it != cache.end()) return it->second;
  return cache.emplace(n, BinaryShapeTable(n)).first->second;
}

// Appends a uniformly random shape of size s rooted at `root`, writing
// parent links into `parent` (vertex ids allocated sequentially).
void sample_binary_shape(const BinaryShapeTable& table, Vertex s, Vertex root,
                         std::vector<Vertex>& parent, std::mt19937_64& rng) {
  if (s == 1) return;
  const auto& sc = table.classes[s];
  const BigInt u = bounded_uniform_big(rng, sc.total);
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(sc.cumulative.begin(), sc.cumulative.end(), u) - sc.cumulative.begin());
  const Vertex a = sc.first_child_size[k];
  if (a < 0) {
    const auto c = static_cast<Vertex>(parent.size());
    parent.push_back(root);
    sample_binary_shape(table, s - 1, c, parent, rng);
    return;
  }
  const Vertex b = s - 1 - a;
  if (a != b) {
    const auto c1 = static_cast<Vertex>(parent.size());
    parent.push_back(root);
    sample_binary_shape(table, a, c1, parent, rng);
    const auto c2 = static_cast<Vertex>(parent.size());
    parent.push_back(root);
    sample_binary_shape(table, b, c2, parent, rng);
    return;
  }
  // equal sizes: rejection makes the unordered pair uniform
  while (true) {
    std::vector<Vertex> sub1{0}, sub2{0};
    sample_binary_shape(table, a, 0, sub1, rng);
    sample_binary_shape(table, b, 0, sub2, rng);
    RootedTree t1{std::vector<Vertex>(sub1)};
    RootedTree t2{std::vector<Vertex>(sub2)};
    const bool equal = canonical_form(t1) == canonical_form(t2);
    if (equal || (rng() & 1) == 0) {
      for (auto* sub : {&sub1, &sub2}) {
        const auto base = static_cast<Vertex>(parent.size());
        for (std::size_t v = 0; v < sub->size(); ++v)
          parent.push_back(v == 0 ? root : base + (*sub)[v]);
      }
      return;
    }
  }
}

}  // namespace

std::vector<RootedTree> enumerate_trees(Vertex n, FamilyKind family, Vertex limit) {
  if (n < 1) throw std::invalid_argument("tree size must be positive");
  if (n > limit) throw std::invalid_argument("size above exhaustive enumeration limit");
  TreeEnumerator en(family);
  return en.of_size(n);
}

RootedTree random_tree(Vertex n, FamilyKind family, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree size must be positive");
  std::mt19937_64 rng(seed);
  if (family == FamilyKind::General) {
    std::vector<Vertex> parent(n);
    parent[0] = 0;
    for (Vertex v = 1; v < n; ++v)
      parent[v] = static_cast<Vertex>(bounded_uniform(rng, static_cast<std::uint64_t>(v)));
    return RootedTree(std::move(parent));
  }
  const auto& table = binary_shape_table(n);
  std::vector<Vertex> parent{0};
  sample_binary_shape(table, n, 0, parent, rng);
  return RootedTree(std::move(parent));
}

}  // namespace nca
