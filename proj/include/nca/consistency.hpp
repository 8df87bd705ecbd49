#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "nca/decoder.hpp"
#include "nca/tree.hpp"

namespace nca {

// Triple checking is cubic; the checker refuses larger universes.
inline constexpr std::int64_t kConsistencyUniverseCap = 512;

// A total decoder g on [0,m) x [0,m), either a dense matrix or the live
// query decoder of a host tree (which avoids materializing huge tables).
class DecoderTable {
 public:
  DecoderTable(std::int64_t universe, std::vector<Label> dense);  // row-major
  DecoderTable(Construction& c, std::int64_t n);  // g = nca_query on capacity n

  // dense table of a tree's own NCA function (vertex ids as labels)
  static DecoderTable from_tree(const RootedTree& t);

  // file format: first line m, then m rows of m space-separated labels
  static DecoderTable read(std::istream& in);
  void write(std::ostream& out) const;

  std::int64_t universe() const { return universe_; }
  Label g(Label x, Label y) const;

 private:
  std::int64_t universe_;
  std::vector<Label> dense_;
  mutable std::unique_ptr<QueryContext> ctx_;
};

// Ancestor coherence properties of one decoder table:
//   I    g(x,y)=z forces g(y,x)=z, g(x,z)=z, g(y,z)=z (and g(x,x)=x);
//   II   ancestry is transitive;
//   III  two ancestors of one vertex are comparable.
struct Violation {
  char property;  // 'I', 'J' (= II), 'K' (= III)
  std::array<Label, 3> triple;
};

struct ConsistencyReport {
  bool consistent = true;
  std::vector<Violation> violations;
};

const char* property_name(char property);

// Exhaustive check of properties I-III over the whole universe.
ConsistencyReport check_consistent(const DecoderTable& t);

// Rebuilds the tree a consistent table describes: v is u's parent when v is
// a proper ancestor of u with no other proper ancestor of u below it.
// Refuses inconsistent tables; a malformed result (several roots, a cycle)
// signals a violated precondition and also throws.
RootedTree labels_to_tree(const DecoderTable& t);

}  // namespace nca
