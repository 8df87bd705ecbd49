#include "nca/encoder.hpp"

#include <bit>
#include <stdexcept>

namespace nca {

namespace {

void check_family(const SchemeParams& params, const RootedTree& t) {
  if (params.family == FamilyKind::Binary && t.max_degree() > 2)
    throw std::invalid_argument("tree has a vertex with more than two children");
}

void place(const std::vector<Label>& sub, const std::vector<Vertex>& to_input,
           std::vector<Label>& out) {
  for (std::size_t i = 0; i < sub.size(); ++i) out[to_input[i]] = sub[i];
}

class Embedder {
 public:
  explicit Embedder(Construction& c) : c_(c) {}

  std::vector<Label> plain(const RootedTree& t, std::int64_t m, Label base) {
    if (static_cast<std::int64_t>(t.size()) > m)
      throw std::invalid_argument("tree larger than the embedding capacity");
    std::vector<Label> out(t.size());
    if (t.size() == 1) {
      out[0] = base;
      return out;
    }
    SplitResult split = split_plain(t, c_.params().lambda);
    const SlotTable& layout = c_.slot_layout(NodeKind::Plain, m);

    const SlotEntry top = layout.entry(0);
    place(marked(split.root_part.part, top.param, base), split.root_part.to_input, out);
    for (std::size_t i = 0; i < split.child_parts.size(); ++i) {
      const SlotEntry slot = layout.entry(i + 1);
      const TreePart& part = split.child_parts[i];
      if (static_cast<std::int64_t>(part.tree.size()) > slot.param)
        throw std::logic_error("split component exceeds its slot");
      place(plain(part.tree, slot.param, base + slot.offset), part.to_input, out);
    }
    if (out[split.split_vertex] != base + c_.attachment_label(NodeKind::Plain, m))
      throw std::logic_error("split vertex missed the attachment point");
    return out;
  }

  std::vector<Label> marked(const MarkedTree& t, std::int64_t m, Label base) {
    if (static_cast<std::int64_t>(t.tree.size()) > m)
      throw std::invalid_argument("tree larger than the embedding capacity");
    std::vector<Label> out(t.tree.size());
    if (t.tree.size() == 1) {
      out[0] = base + c_.marked_leaf_label(m);
      return out;
    }
    MarkedSplitResult split = split_marked(t, 0.5);
    const SlotTable& layout = c_.slot_layout(NodeKind::Marked, m);

    const SlotEntry top = layout.entry(0);
    place(marked(split.root_part.part, top.param, base), split.root_part.to_input, out);
    const SlotEntry marked_slot = layout.entry(1);
    place(marked(split.marked_part.part, marked_slot.param, base + marked_slot.offset),
          split.marked_part.to_input, out);
    for (std::size_t i = 0; i < split.other_parts.size(); ++i) {
      const SlotEntry slot = layout.entry(i + 2);
      const TreePart& part = split.other_parts[i];
      if (static_cast<std::int64_t>(part.tree.size()) > slot.param)
        throw std::logic_error("split component exceeds its slot");
      place(plain(part.tree, slot.param, base + slot.offset), part.to_input, out);
    }
    if (out[t.marked] != base + c_.marked_leaf_label(m))
      throw std::logic_error("marked leaf missed its reserved label");
    if (out[split.split_vertex] != base + c_.attachment_label(NodeKind::Marked, m))
      throw std::logic_error("split vertex missed the attachment point");
    return out;
  }

 private:
  Construction& c_;
};

}  // namespace

int LabelAssignment::bits(Construction& c) const {
  const std::int64_t size = c.size_of(NodeKind::Plain, capacity);
  return size <= 1 ? 0 : std::bit_width(static_cast<std::uint64_t>(size - 1));
}

LabelAssignment embed(Construction& c, const RootedTree& t, std::int64_t n) {
  check_family(c.params(), t);
  Embedder e(c);
  return LabelAssignment{c.params(), n, e.plain(t, n, 0)};
}

LabelAssignment embed_marked(Construction& c, const MarkedTree& t, std::int64_t m) {
  check_family(c.params(), t.tree);
  Embedder e(c);
  return LabelAssignment{c.params(), m, e.marked(t, m, 0)};
}

}  // namespace nca
