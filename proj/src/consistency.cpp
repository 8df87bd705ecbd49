#include "nca/consistency.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace nca {

DecoderTable::DecoderTable(std::int64_t universe, std::vector<Label> dense)
    : universe_(universe), dense_(std::move(dense)) {
  if (universe < 1) throw std::invalid_argument("universe must be non-empty");
  if (static_cast<std::int64_t>(dense_.size()) != universe * universe)
    throw std::invalid_argument("dense table has the wrong shape");
  for (Label v : dense_)
    if (v < 0 || v >= universe) throw std::invalid_argument("table value out of range");
}

DecoderTable::DecoderTable(Construction& c, std::int64_t n)
    : universe_(c.size_of(NodeKind::Plain, n)),
      ctx_(std::make_unique<QueryContext>(c, n)) {}

DecoderTable DecoderTable::from_tree(const RootedTree& t) {
  const std::int64_t m = t.size();
  std::vector<Label> dense(static_cast<std::size_t>(m * m));
  for (Vertex x = 0; x < m; ++x)
    for (Vertex y = 0; y < m; ++y)
      dense[static_cast<std::size_t>(x) * m + y] = nca_oracle(t, x, y);
  return DecoderTable(m, std::move(dense));
}

DecoderTable DecoderTable::read(std::istream& in) {
  std::int64_t m = 0;
  if (!(in >> m) || m < 1) throw std::invalid_argument("bad table header");
  std::vector<Label> dense(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
  for (auto& v : dense)
    if (!(in >> v)) throw std::invalid_argument("table shorter than its header claims");
  return DecoderTable(m, std::move(dense));
}

void DecoderTable::write(std::ostream& out) const {
  out << universe_ << '\n';
  for (Label x = 0; x < universe_; ++x) {
    for (Label y = 0; y < universe_; ++y) {
      if (y) out << ' ';
      out << g(x, y);
    }
    out << '\n';
  }
}

Label DecoderTable::g(Label x, Label y) const {
  if (x < 0 || x >= universe_ || y < 0 || y >= universe_)
    throw std::out_of_range("label out of range");
  if (ctx_) return ctx_->nca_query(x, y);
  return dense_[static_cast<std::size_t>(x) * universe_ + y];
}

const char* property_name(char property) {
  switch (property) {
    case 'I': return "I";
    case 'J': return "II";
    case 'K': return "III";
    default: return "?";
  }
}

namespace {

// proper + improper ancestors of x according to the table
std::vector<std::vector<Label>> ancestor_lists(const DecoderTable& t) {
  const Label m = t.universe();
  std::vector<std::vector<Label>> anc(static_cast<std::size_t>(m));
  for (Label x = 0; x < m; ++x)
    for (Label y = 0; y < m; ++y)
      if (t.g(x, y) == y) anc[x].push_back(y);
  return anc;
}

}  // namespace

ConsistencyReport check_consistent(const DecoderTable& t) {
  const Label m = t.universe();
  if (m > kConsistencyUniverseCap)
    throw std::length_error("universe too large for exhaustive triple checking");
  ConsistencyReport report;
  const auto violate = [&](char property, Label x, Label y, Label z) {
    report.consistent = false;
    report.violations.push_back(Violation{property, {x, y, z}});
  };

  // property I, including the pair coherence it implies: the two orders of
  // one pair must agree, and a vertex is its own nearest common ancestor
  for (Label x = 0; x < m; ++x) {
    for (Label y = 0; y < m; ++y) {
      const Label z = t.g(x, y);
      if (x == y && z != x) {
        violate('I', x, y, z);
        continue;
      }
      if (t.g(y, x) != z || t.g(x, z) != z || t.g(y, z) != z) violate('I', x, y, z);
    }
  }

  const auto anc = ancestor_lists(t);
  // property II: g(x,y)=y and g(y,z)=z force g(x,z)=z
  for (Label x = 0; x < m; ++x)
    for (Label y : anc[x])
      for (Label z : anc[y])
        if (t.g(x, z) != z) violate('J', x, y, z);
  // property III: two ancestors of x are comparable
  for (Label x = 0; x < m; ++x)
    for (std::size_t i = 0; i < anc[x].size(); ++i)
      for (std::size_t j = i + 1; j < anc[x].size(); ++j) {
        const Label y = anc[x][i], z = anc[x][j];
        const Label w = t.g(y, z);
        if (w != y && w != z) violate('K', x, y, z);
      }
  return report;
}

RootedTree labels_to_tree(const DecoderTable& t) {
  if (!check_consistent(t).consistent)
    throw std::invalid_argument("table is not a consistent decoder");
  const Label m = t.universe();
  const auto anc = ancestor_lists(t);

  std::vector<Vertex> parent(static_cast<std::size_t>(m), -1);
  Label root = -1;
  for (Label u = 0; u < m; ++u) {
    Label found = -1;
    for (Label v : anc[u]) {
      if (v == u) continue;
      bool has_between = false;
      for (Label w : anc[u]) {
        if (w == u || w == v) continue;
        if (t.g(w, v) == v) { has_between = true; break; }
      }
      if (!has_between) {
        if (found >= 0) throw std::runtime_error("vertex with two parents: table lied");
        found = v;
      }
    }
    if (found < 0) {
      if (root >= 0) throw std::runtime_error("two roots: table lied");
      root = u;
      parent[u] = static_cast<Vertex>(u);
    } else {
      parent[u] = static_cast<Vertex>(found);
    }
  }
  if (root < 0) throw std::runtime_error("no root: table lied");
  return RootedTree(std::move(parent));  // ctor re-checks acyclicity
}

}  // namespace nca
