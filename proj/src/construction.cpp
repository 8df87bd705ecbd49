#include "nca/construction.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "nca/splitting.hpp"

namespace nca {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("tree size exceeds 64 bits");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("tree size exceeds 64 bits");
  return r;
}

struct EntryDescRaw {
  NodeKind kind;
  std::int64_t param;
};

// Shared slot-descriptor formula; every slot has a non-empty subtree, the
// would-be zero-size tail (i > m in the harmonic run) is never indexed.
EntryDescRaw slot_desc(FamilyKind family, double lambda, NodeKind kind, std::int64_t m,
                       std::size_t i) {
  (void)family;
  if (m == 1) return {kind, 1};
  if (kind == NodeKind::Plain) {
    const std::int64_t top = split_threshold(lambda, m);
    if (i == 0) return {NodeKind::Marked, top};
    if (i == 1) return {NodeKind::Plain, m - top};
    return {NodeKind::Plain, m / static_cast<std::int64_t>(i)};
  }
  if (i == 0) return {NodeKind::Marked, (m + 1) / 2};
  if (i == 1) return {NodeKind::Marked, m / 2};
  if (i == 2) return {NodeKind::Plain, m - 1};
  return {NodeKind::Plain, m / static_cast<std::int64_t>(i - 1)};
}

}  // namespace

SchemeParams SchemeParams::binary_basic() {
  return {FamilyKind::Binary, 0.5, 2.0, "binary-basic"};
}

SchemeParams SchemeParams::binary_opt() {
  return {FamilyKind::Binary, 0.296149, 1.894, "binary-opt"};
}

SchemeParams SchemeParams::general_opt() {
  return {FamilyKind::General, 0.341395, 2.318, "general-opt"};
}

SchemeParams SchemeParams::custom(FamilyKind family, double lambda, double bound_exponent) {
  if (lambda <= 0.0 || lambda > 0.5)
    throw std::invalid_argument("lambda must be in (0, 1/2]");
  return {family, lambda, bound_exponent, "custom"};
}

std::optional<SchemeParams> SchemeParams::from_profile_name(std::string_view name) {
  if (name == "binary-basic") return binary_basic();
  if (name == "binary-opt") return binary_opt();
  if (name == "general-opt") return general_opt();
  return std::nullopt;
}

SlotEntry SlotTable::entry(std::size_t i) const {
  if (i + 1 >= offsets_.size()) throw std::out_of_range("slot index out of range");
  const EntryDescRaw d = slot_desc(family_, lambda_, kind_, m_, i);
  return SlotEntry{d.kind, d.param, offsets_[i + 1] - offsets_[i], offsets_[i]};
}

Construction::Construction(SchemeParams params, std::int64_t materialize_limit)
    : params_(std::move(params)), materialize_limit_(materialize_limit) {
  if (params_.lambda <= 0.0 || params_.lambda > 0.5)
    throw std::invalid_argument("lambda must be in (0, 1/2]");
}

std::int64_t Construction::top_param(NodeKind kind, std::int64_t m) const {
  return kind == NodeKind::Plain ? split_threshold(params_.lambda, m) : (m + 1) / 2;
}

std::size_t Construction::slot_count(NodeKind kind, std::int64_t m) const {
  if (m < 1) throw std::invalid_argument("recursion parameter must be positive");
  if (m == 1) return 1;
  if (params_.family == FamilyKind::Binary) return 3;
  return static_cast<std::size_t>(kind == NodeKind::Plain ? m + 1 : m + 2);
}

Construction::EntryDesc Construction::entry_desc(NodeKind kind, std::int64_t m,
                                                 std::size_t i) const {
  const EntryDescRaw d = slot_desc(params_.family, params_.lambda, kind, m, i);
  return {d.kind, d.param};
}

std::int64_t Construction::size_of(NodeKind kind, std::int64_t m) {
  if (m < 0) throw std::invalid_argument("recursion parameter must be non-negative");
  if (m == 0) return 0;
  if (m == 1) return 1;
  auto& memo = kind == NodeKind::Plain ? plain_size_ : marked_size_;
  if (const auto it = memo.find(m); it != memo.end()) return it->second;

  std::int64_t total;
  if (kind == NodeKind::Plain) {
    const std::int64_t top = top_param(kind, m);
    total = checked_add(size_of(NodeKind::Marked, top), size_of(NodeKind::Plain, m - top));
    if (params_.family == FamilyKind::Binary) {
      total = checked_add(total, size_of(NodeKind::Plain, m / 2));
    }
  } else {
    total = checked_add(size_of(NodeKind::Marked, (m + 1) / 2),
                        size_of(NodeKind::Marked, m / 2));
    total = checked_add(total, size_of(NodeKind::Plain, m - 1));
  }
  if (params_.family == FamilyKind::General) {
    // sum of |S_{m/i}| for i = 2..m, grouped by equal quotient
    std::int64_t i = 2;
    while (i <= m) {
      const std::int64_t q = m / i;
      const std::int64_t last = m / q;
      total = checked_add(total, checked_mul(last - i + 1, size_of(NodeKind::Plain, q)));
      i = last + 1;
    }
  }
  memo.emplace(m, total);
  return total;
}

const SlotTable& Construction::slot_layout(NodeKind kind, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("recursion parameter must be positive");
  auto& cache = kind == NodeKind::Plain ? plain_table_ : marked_table_;
  if (const auto it = cache.find(m); it != cache.end()) return it->second;

  const std::size_t count = slot_count(kind, m);
  std::vector<Label> offsets(count + 1);
  offsets[0] = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const EntryDesc d = entry_desc(kind, m, i);
    const std::int64_t sz = size_of(d.kind, d.param);
    assert(sz > 0);
    offsets[i + 1] = checked_add(offsets[i], sz);
  }
  assert(offsets.back() == size_of(kind, m));
  return cache
      .emplace(m, SlotTable(params_.family, params_.lambda, kind, m, std::move(offsets)))
      .first->second;
}

SlotEntry Construction::slot_at(NodeKind kind, std::int64_t m, std::size_t i) {
  return slot_layout(kind, m).entry(i);
}

Label Construction::marked_leaf_label(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("recursion parameter must be positive");
  if (m == 1) return 0;
  if (const auto it = marked_leaf_.find(m); it != marked_leaf_.end()) return it->second;
  const Label label =
      checked_add(size_of(NodeKind::Marked, (m + 1) / 2), marked_leaf_label(m / 2));
  marked_leaf_.emplace(m, label);
  return label;
}

Label Construction::attachment_label(NodeKind kind, std::int64_t m) {
  if (m < 2) throw std::invalid_argument("attachment point requires m >= 2");
  return marked_leaf_label(top_param(kind, m));
}

RootedTree Construction::materialize(NodeKind kind, std::int64_t m) {
  const std::int64_t total = size_of(kind, m);
  if (total > materialize_limit_)
    throw std::length_error("materialization exceeds the configured vertex limit");

  std::vector<Vertex> parent(static_cast<std::size_t>(total));
  struct Frame {
    NodeKind kind;
    std::int64_t m;
    Label base;
    Label parent;  // global id; == base for the overall root copy chain
  };
  std::vector<Frame> stack{{kind, m, 0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.m == 1) {
      parent[static_cast<std::size_t>(f.base)] = static_cast<Vertex>(f.parent);
      continue;
    }
    const std::size_t count = slot_count(f.kind, f.m);
    const EntryDesc top = entry_desc(f.kind, f.m, 0);
    stack.push_back({top.kind, top.param, f.base, f.parent});
    const Label attach = f.base + marked_leaf_label(top.param);
    Label offset = size_of(top.kind, top.param);
    for (std::size_t i = 1; i < count; ++i) {
      const EntryDesc d = entry_desc(f.kind, f.m, i);
      stack.push_back({d.kind, d.param, f.base + offset, attach});
      offset += size_of(d.kind, d.param);
    }
  }
  return RootedTree(std::move(parent));
}

void Construction::warm_up(std::int64_t n) {
  std::vector<std::pair<NodeKind, std::int64_t>> work{{NodeKind::Plain, n}};
  while (!work.empty()) {
    auto [kind, m] = work.back();
    work.pop_back();
    if (m <= 1) continue;
    auto& cache = kind == NodeKind::Plain ? plain_table_ : marked_table_;
    if (cache.contains(m)) continue;
    const SlotTable& table = slot_layout(kind, m);
    marked_leaf_label(top_param(kind, m));
    for (std::size_t i = 0; i < table.entry_count(); ++i) {
      const SlotEntry e = table.entry(i);
      work.emplace_back(e.kind, e.param);
    }
  }
}

double zeta(double s, double tol) {
  if (s <= 1.05) throw std::invalid_argument("zeta requires s > 1.05");
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  // truncation error of the Euler-Maclaurin tail is O(s(s+1)(s+2) N^-(s+3))
  std::int64_t n = 16;
  while (s * (s + 1.0) * (s + 2.0) / (720.0 * std::pow(static_cast<double>(n), s + 3.0)) >
         tol / 2.0) {
    if (n >= (std::int64_t{1} << 24))
      throw std::invalid_argument("s too close to 1 for requested tolerance");
    n *= 2;
  }
  double partial = 0.0;
  for (std::int64_t i = n - 1; i >= 1; --i)
    partial += std::pow(static_cast<double>(i), -s);
  const double nd = static_cast<double>(n);
  return partial + std::pow(nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nd, -s) +
         s / 12.0 * std::pow(nd, -s - 1.0);
}

namespace {

bool beta_feasible(FamilyKind family, double lambda, double beta) {
  const double denom = 1.0 - std::pow(2.0, 1.0 - beta);
  if (denom <= 0.0) return false;
  if (family == FamilyKind::Binary) {
    const double c = 1.0 / denom;
    return std::pow(1.0 - lambda, beta) + c * std::pow(lambda, beta) + std::pow(2.0, -beta) <=
           1.0;
  }
  const double z = zeta(beta, 1e-12);
  const double c = z / denom;
  return std::pow(1.0 - lambda, beta) + c * std::pow(lambda, beta) + (z - 1.0) <= 1.0;
}

}  // namespace

BetaSolution solve_beta(FamilyKind family, double lambda, double tol) {
  if (lambda <= 0.0 || lambda > 0.5) throw std::invalid_argument("lambda must be in (0, 1/2]");
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  double lo = 1.0501, hi = 4.0;
  if (!beta_feasible(family, lambda, hi))
    throw std::runtime_error("no feasible exponent in (1, 4]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (beta_feasible(family, lambda, mid)) hi = mid;
    else lo = mid;
  }
  const double denom = 1.0 - std::pow(2.0, 1.0 - hi);
  const double c = family == FamilyKind::Binary ? 1.0 / denom : zeta(hi, 1e-12) / denom;
  return {hi, c};
}

LambdaSolution optimize_lambda(FamilyKind family, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  const double beta_tol = std::min(tol, 1e-7);
  const auto objective = [&](double lambda) { return solve_beta(family, lambda, beta_tol).beta; };
  constexpr double kGolden = 0.6180339887498949;
  double a = 0.02, b = 0.5;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = objective(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = objective(x2);
    }
  }
  const double lambda = 0.5 * (a + b);
  return {lambda, objective(lambda)};
}

}  // namespace nca
