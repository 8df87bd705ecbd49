#pragma once

#include <cstdint>

#include "nca/construction.hpp"

namespace nca {

struct LocateResult {
  std::size_t slot;
  Label local;
};

// Answers NCA queries on the host tree of capacity n from two labels alone,
// descending the slot layout with binary search over the offset tables.
// probe_count() accumulates offset comparisons across queries; the per-query
// counters describe the most recent query. Read-only once the underlying
// Construction is warmed up.
class QueryContext {
 public:
  QueryContext(Construction& c, std::int64_t n);

  std::int64_t capacity() const { return n_; }
  Construction& construction() { return c_; }

  // Slot whose label range [offset, offset+size) contains x, plus x-offset.
  LocateResult locate(NodeKind kind, std::int64_t m, Label x);

  // Label of the nearest common ancestor of the vertices labeled x and y.
  Label nca_query(Label x, Label y);

  std::int64_t probe_count() const { return probes_; }
  std::int64_t last_query_probes() const { return last_probes_; }
  std::int64_t last_query_depth() const { return last_depth_; }
  void reset_counters();

 private:
  Construction& c_;
  std::int64_t n_;
  std::int64_t size_;
  std::int64_t probes_ = 0;
  std::int64_t last_probes_ = 0;
  std::int64_t last_depth_ = 0;
};

}  // namespace nca
