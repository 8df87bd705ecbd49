#include "nca/decoder.hpp"

#include <stdexcept>

namespace nca {

QueryContext::QueryContext(Construction& c, std::int64_t n) : c_(c), n_(n) {
  if (n < 1) throw std::invalid_argument("capacity must be positive");
  size_ = c_.size_of(NodeKind::Plain, n);
}

LocateResult QueryContext::locate(NodeKind kind, std::int64_t m, Label x) {
  const SlotTable& table = c_.slot_layout(kind, m);
  const auto offsets = table.offsets();
  if (x < 0 || x >= offsets.back()) throw std::out_of_range("label out of range");
  // largest slot index whose offset is <= x
  std::size_t lo = 0, hi = table.entry_count() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    ++probes_;
    if (offsets[mid] <= x) lo = mid;
    else hi = mid - 1;
  }
  return {lo, x - offsets[lo]};
}

Label QueryContext::nca_query(Label x, Label y) {
  if (x < 0 || x >= size_ || y < 0 || y >= size_)
    throw std::out_of_range("label out of range");
  const std::int64_t probes_before = probes_;
  last_depth_ = 0;

  NodeKind kind = NodeKind::Plain;
  std::int64_t m = n_;
  Label base = 0;
  Label result;
  while (true) {
    if (m == 1) {
      result = base;
      break;
    }
    ++last_depth_;
    const LocateResult lx = locate(kind, m, x);
    const LocateResult ly = locate(kind, m, y);
    if (lx.slot == ly.slot) {
      // both under the same recursive copy
      const SlotEntry e = c_.slot_layout(kind, m).entry(lx.slot);
      base += e.offset;
      kind = e.kind;
      m = e.param;
      x = lx.local;
      y = ly.local;
      continue;
    }
    if (lx.slot != 0 && ly.slot != 0) {
      // different non-top copies only meet at the attachment vertex
      result = base + c_.attachment_label(kind, m);
      break;
    }
    // one label in the top copy: the other side enters it through the
    // attachment vertex, i.e. the top copy's marked leaf
    const SlotEntry top = c_.slot_layout(kind, m).entry(0);
    x = lx.slot == 0 ? lx.local : c_.marked_leaf_label(top.param);
    y = ly.slot == 0 ? ly.local : c_.marked_leaf_label(top.param);
    kind = NodeKind::Marked;
    m = top.param;
  }
  last_probes_ = probes_ - probes_before;
  return result;
}

void QueryContext::reset_counters() {
  probes_ = 0;
  last_probes_ = 0;
  last_depth_ = 0;
}

}  // namespace nca
