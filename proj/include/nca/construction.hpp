#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nca/tree.hpp"

namespace nca {

using Label = std::int64_t;

enum class NodeKind { Plain, Marked };

// Family plus split parameter; fixes one recursive host-tree construction.
// bound_exponent is the exponent used when size bounds are reported.
struct SchemeParams {
  FamilyKind family;
  double lambda;
  double bound_exponent;
  std::string profile;

  static SchemeParams binary_basic();   // Binary, lambda = 1/2, bound n^2
  static SchemeParams binary_opt();     // Binary, lambda = 0.296149, bound n^1.894
  static SchemeParams general_opt();    // General, lambda = 0.341395, bound n^2.318
  static SchemeParams custom(FamilyKind family, double lambda, double bound_exponent);
  static std::optional<SchemeParams> from_profile_name(std::string_view name);
};

struct SlotEntry {
  NodeKind kind;
  std::int64_t param;
  std::int64_t size;
  Label offset;
};

// Ordered slots of one recursion node: entry 0 is the top copy, every other
// slot hangs off the top copy's marked leaf. Offsets are exclusive prefix
// sums of the exact slot sizes and partition [0, total_size) with no gaps.
class SlotTable {
 public:
  NodeKind kind() const { return kind_; }
  std::int64_t param() const { return m_; }
  std::size_t entry_count() const { return offsets_.size() - 1; }
  std::int64_t total_size() const { return offsets_.back(); }
  SlotEntry entry(std::size_t i) const;
  std::span<const Label> offsets() const { return {offsets_.data(), offsets_.size()}; }

 private:
  friend class Construction;
  SlotTable(FamilyKind family, double lambda, NodeKind kind, std::int64_t m,
            std::vector<Label> offsets)
      : family_(family), lambda_(lambda), kind_(kind), m_(m), offsets_(std::move(offsets)) {}

  FamilyKind family_;
  double lambda_;
  NodeKind kind_;
  std::int64_t m_;
  std::vector<Label> offsets_;  // entry_count()+1 values, last one = total size
};

inline constexpr std::int64_t kDefaultMaterializeLimit = 10'000'000;

// Exact sizes, slot layouts, label arithmetic and explicit materialization
// of the recursive host trees S_m (Plain) and S'_m (Marked) for one
// parameter choice. Sizes are memoized; additions are overflow-checked and
// fail loudly instead of wrapping.
//
// Caches grow on demand. Warm up (or serialize access) before sharing one
// instance across threads; a warmed instance is read-only.
class Construction {
 public:
  explicit Construction(SchemeParams params,
                        std::int64_t materialize_limit = kDefaultMaterializeLimit);

  const SchemeParams& params() const { return params_; }
  std::int64_t materialize_limit() const { return materialize_limit_; }

  // |S_m| or |S'_m|; 0 for m = 0, 1 for m = 1.
  std::int64_t size_of(NodeKind kind, std::int64_t m);

  std::size_t slot_count(NodeKind kind, std::int64_t m) const;
  SlotEntry slot_at(NodeKind kind, std::int64_t m, std::size_t i);
  const SlotTable& slot_layout(NodeKind kind, std::int64_t m);

  // Label of the marked leaf of S'_m under the recursive numbering.
  Label marked_leaf_label(std::int64_t m);

  // Label (local to the current recursion node) of the vertex all
  // non-top slots attach to; requires m >= 2.
  Label attachment_label(NodeKind kind, std::int64_t m);

  // Explicit tree whose vertex ids equal the recursive labels. Vertex 0 is
  // the root; for Marked, the vertex marked_leaf_label(m) is a leaf.
  RootedTree materialize(NodeKind kind, std::int64_t m);

  // Pre-computes sizes and layouts for every recursion node reachable from
  // (Plain, n); afterwards queries on capacity n mutate nothing.
  void warm_up(std::int64_t n);

 private:
  struct EntryDesc {
    NodeKind kind;
    std::int64_t param;
  };
  EntryDesc entry_desc(NodeKind kind, std::int64_t m, std::size_t i) const;
  std::int64_t top_param(NodeKind kind, std::int64_t m) const;

  SchemeParams params_;
  std::int64_t materialize_limit_;
  std::unordered_map<std::int64_t, std::int64_t> plain_size_;
  std::unordered_map<std::int64_t, std::int64_t> marked_size_;
  std::unordered_map<std::int64_t, SlotTable> plain_table_;
  std::unordered_map<std::int64_t, SlotTable> marked_table_;
  std::unordered_map<std::int64_t, Label> marked_leaf_;
};

// Riemann zeta via partial sum plus an Euler-Maclaurin tail correction.
// Requires s > 1.05; throws if the tolerance is unreachable.
double zeta(double s, double tol);

struct BetaSolution {
  double beta;
  double c;  // scale factor between the Marked and Plain size bounds
};

// Smallest exponent beta in (1, 4] for which the size recursion closes at
// the given lambda, found by bisection. Binary uses
//   (1-lambda)^b + c(b) lambda^b + 2^-b <= 1,   c(b) = 1/(1 - 2^(1-b));
// General uses
//   (1-lambda)^b + c(b) lambda^b + zeta(b) - 1 <= 1,
//   c(b) = zeta(b)/(1 - 2^(1-b)).
BetaSolution solve_beta(FamilyKind family, double lambda, double tol);

struct LambdaSolution {
  double lambda;
  double beta;
};

// Golden-section minimization of beta(lambda) over (0, 1/2].
LambdaSolution optimize_lambda(FamilyKind family, double tol);

}  // namespace nca
