#include "nca/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "nca/decoder.hpp"
#include "nca/encoder.hpp"
#include "nca/splitting.hpp"

namespace nca::cli {

namespace {

std::string fmt(double v, const char* format = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

int label_bits(std::int64_t size) {
  return size <= 1 ? 0 : std::bit_width(static_cast<std::uint64_t>(size - 1));
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

bool row_within_bound(const SchemeParams& params, std::int64_t n, std::int64_t plain,
                      std::int64_t marked) {
  if (params.profile == "binary-basic") return plain <= n * n && marked <= 2 * n * n - 1;
  if (n == 1) return true;
  return static_cast<double>(plain) <
         std::pow(static_cast<double>(n), params.bound_exponent);
}

double depth_bound(double lambda, std::int64_t n) {
  if (n <= 1) return 4.0;
  return 2.0 * std::log(static_cast<double>(n)) / std::log(1.0 / (1.0 - lambda)) + 4.0;
}

}  // namespace

int run_sizes(const SchemeParams& params, std::int64_t n_max, std::ostream& out) {
  if (n_max < 1) throw std::invalid_argument("n must be positive");
  Construction c(params);
  out << "n,size_plain,size_marked,bits,bound\n";
  std::int64_t violations = 0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const std::int64_t plain = c.size_of(NodeKind::Plain, n);
    const std::int64_t marked = c.size_of(NodeKind::Marked, n);
    out << n << ',' << plain << ',' << marked << ',' << label_bits(plain) << ','
        << fmt(std::pow(static_cast<double>(n), params.bound_exponent)) << '\n';
    if (!row_within_bound(params, n, plain, marked)) ++violations;
  }
  if (violations == 0) {
    out << "# bounds: all " << n_max << " rows hold\n";
    return 0;
  }
  out << "# bounds: " << violations << " rows violated\n";
  return 1;
}

int run_encode(const SchemeParams& params, std::int64_t n, std::istream& tree_in,
               std::ostream& out) {
  std::ostringstream buffer;
  buffer << tree_in.rdbuf();
  const ParsedTree parsed = parse_tree(buffer.str(), /*marked_allowed=*/false);
  Construction c(params);
  const LabelAssignment assignment = embed(c, parsed.tree, n);
  out << family_name(params.family) << ' ' << fmt(params.lambda) << ' ' << n << ' '
      << c.size_of(NodeKind::Plain, n) << ' ' << assignment.bits(c) << '\n';
  for (Vertex v = 0; v < parsed.tree.size(); ++v)
    out << v << ' ' << assignment.labels[v] << '\n';
  return 0;
}

int run_nca(const SchemeParams& params, std::int64_t n, Label x, Label y, bool stats,
            std::ostream& out) {
  Construction c(params);
  QueryContext ctx(c, n);
  out << ctx.nca_query(x, y) << '\n';
  if (stats)
    out << "probes " << ctx.last_query_probes() << " depth " << ctx.last_query_depth()
        << '\n';
  return 0;
}

namespace {

struct VerifyCounters {
  std::int64_t trees = 0;
  std::int64_t pairs = 0;
  std::int64_t structural = 0;
  std::int64_t commutation = 0;
};

// Checks one embedded tree: labels in range and distinct, then commutation
// of the decoder with the tree's own NCA function on the given pairs.
void verify_tree(const RootedTree& t, const LabelAssignment& a, QueryContext& ctx,
                 const std::vector<std::pair<Vertex, Vertex>>& pairs, VerifyCounters& counters) {
  ++counters.trees;
  const std::int64_t universe = ctx.construction().size_of(NodeKind::Plain, ctx.capacity());
  bool structural_ok = true;
  std::vector<Label> sorted = a.labels;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0 || sorted.back() >= universe) structural_ok = false;
  for (std::size_t i = 0; structural_ok && i + 1 < sorted.size(); ++i)
    if (sorted[i] == sorted[i + 1]) structural_ok = false;
  if (!structural_ok) {
    ++counters.structural;
    return;
  }
  for (const auto& [u, v] : pairs) {
    ++counters.pairs;
    if (ctx.nca_query(a.labels[u], a.labels[v]) != a.labels[nca_oracle(t, u, v)])
      ++counters.commutation;
  }
}

}  // namespace

int run_verify_exhaustive(const SchemeParams& params, Vertex max_n, std::ostream& out) {
  if (max_n < 1) throw std::invalid_argument("max size must be positive");
  Construction c(params);
  VerifyCounters total;
  for (Vertex k = 1; k <= max_n; ++k) {
    VerifyCounters per_size;
    QueryContext ctx(c, k);
    for (const RootedTree& t : enumerate_trees(k, params.family)) {
      std::vector<std::pair<Vertex, Vertex>> pairs;
      pairs.reserve(static_cast<std::size_t>(k) * (k + 1) / 2);
      for (Vertex u = 0; u < k; ++u)
        for (Vertex v = u; v < k; ++v) pairs.emplace_back(u, v);
      verify_tree(t, embed(c, t, k), ctx, pairs, per_size);
    }
    out << "size " << k << ": trees " << per_size.trees << ", pairs " << per_size.pairs
        << ", structural " << per_size.structural << ", commutation " << per_size.commutation
        << '\n';
    total.trees += per_size.trees;
    total.pairs += per_size.pairs;
    total.structural += per_size.structural;
    total.commutation += per_size.commutation;
  }
  out << "total: trees " << total.trees << ", pairs " << total.pairs << ", structural failures "
      << total.structural << ", commutation failures " << total.commutation << '\n';
  return total.structural + total.commutation == 0 ? 0 : 1;
}

int run_verify_random(const SchemeParams& params, int count, Vertex size, int pairs,
                      std::uint64_t seed, std::ostream& out) {
  if (count < 1 || size < 1 || pairs < 1) throw std::invalid_argument("bad verify arguments");
  Construction c(params);
  QueryContext ctx(c, size);
  VerifyCounters total;
  std::mt19937_64 pair_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < count; ++i) {
    const RootedTree t = random_tree(size, params.family, seed + static_cast<std::uint64_t>(i));
    std::vector<std::pair<Vertex, Vertex>> sampled;
    sampled.reserve(static_cast<std::size_t>(pairs));
    for (int p = 0; p < pairs; ++p)
      sampled.emplace_back(static_cast<Vertex>(bounded(pair_rng, size)),
                           static_cast<Vertex>(bounded(pair_rng, size)));
    verify_tree(t, embed(c, t, size), ctx, sampled, total);
  }
  out << "random trees: " << count << " of size " << size << " (seed " << seed << ", pairs "
      << pairs << " each)\n";
  out << "structural failures " << total.structural << '\n';
  out << "commutation failures " << total.commutation << '\n';
  return total.structural + total.commutation == 0 ? 0 : 1;
}

int run_bench(const SchemeParams& params, std::int64_t n, std::int64_t queries,
              std::uint64_t seed, std::ostream& out, std::ostream& timing) {
  if (n < 1 || queries < 1) throw std::invalid_argument("bad bench arguments");
  Construction c(params);
  QueryContext ctx(c, n);
  const std::int64_t size = c.size_of(NodeKind::Plain, n);
  std::mt19937_64 rng(seed);

  std::vector<std::pair<Label, Label>> work(static_cast<std::size_t>(queries));
  for (auto& [x, y] : work) {
    x = static_cast<Label>(bounded(rng, static_cast<std::uint64_t>(size)));
    y = static_cast<Label>(bounded(rng, static_cast<std::uint64_t>(size)));
  }
  ctx.nca_query(work.front().first, work.front().second);  // warm the layout caches

  std::vector<std::int64_t> probes;
  probes.reserve(work.size());
  std::int64_t max_depth = 0, max_probes = 0, total_probes = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& [x, y] : work) {
    ctx.nca_query(x, y);
    probes.push_back(ctx.last_query_probes());
    total_probes += ctx.last_query_probes();
    max_probes = std::max(max_probes, ctx.last_query_probes());
    max_depth = std::max(max_depth, ctx.last_query_depth());
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;

  std::sort(probes.begin(), probes.end());
  const double dbound = depth_bound(params.lambda, n);
  const double probe_bound =
      dbound * (std::ceil(std::log2(static_cast<double>(std::max<std::int64_t>(n, 2)))) + 2.0);
  const bool ok = static_cast<double>(max_depth) <= dbound &&
                  static_cast<double>(max_probes) <= probe_bound;

  out << "profile " << params.profile << " n " << n << " queries " << queries << " seed "
      << seed << '\n';
  out << "size " << size << " bits " << label_bits(size) << '\n';
  out << "max_depth " << max_depth << " depth_bound " << fmt(dbound, "%.2f") << '\n';
  out << "mean_probes " << fmt(static_cast<double>(total_probes) / static_cast<double>(queries), "%.2f")
      << " median_probes " << probes[probes.size() / 2] << " max_probes " << max_probes
      << " probe_bound " << fmt(probe_bound, "%.2f") << '\n';
  out << (ok ? "bounds ok" : "bounds violated") << '\n';
  timing << "wall_ns_per_query "
         << fmt(static_cast<double>(
                    std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count()) /
                    static_cast<double>(queries),
                "%.1f")
         << '\n';
  return ok ? 0 : 1;
}

int run_materialize(const SchemeParams& params, std::int64_t n, bool marked,
                    std::ostream& out) {
  Construction c(params);
  if (marked) {
    RootedTree t = c.materialize(NodeKind::Marked, n);
    const auto leaf = static_cast<Vertex>(c.marked_leaf_label(n));
    out << serialize_tree(MarkedTree(std::move(t), leaf)) << '\n';
  } else {
    out << serialize_tree(c.materialize(NodeKind::Plain, n)) << '\n';
  }
  return 0;
}

int run_check_consistency(const DecoderTable& table, std::ostream& out) {
  const ConsistencyReport report = check_consistent(table);
  out << "universe " << table.universe() << '\n';
  if (report.consistent) {
    out << "consistent\n";
    return 0;
  }
  out << "inconsistent: " << report.violations.size() << " violations\n";
  const std::size_t shown = std::min<std::size_t>(report.violations.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const Violation& v = report.violations[i];
    out << property_name(v.property) << " (" << v.triple[0] << ',' << v.triple[1] << ','
        << v.triple[2] << ")\n";
  }
  if (shown < report.violations.size()) out << "...\n";
  return 1;
}

int run_solve(FamilyKind family, double lambda, std::ostream& out) {
  const BetaSolution s = solve_beta(family, lambda, 1e-7);
  out << "family " << family_name(family) << " lambda " << fmt(lambda) << " beta "
      << fmt(s.beta, "%.6f") << " c " << fmt(s.c, "%.6f") << '\n';
  return 0;
}

int run_optimize(FamilyKind family, std::ostream& out) {
  const LambdaSolution s = optimize_lambda(family, 1e-6);
  out << "family " << family_name(family) << " lambda_star " << fmt(s.lambda, "%.6f")
      << " beta_star " << fmt(s.beta, "%.6f") << '\n';
  return 0;
}

namespace {

struct ParamsOptions {
  std::string profile;
  std::string family;
  double lambda = 0.0;
  bool lambda_set = false;
};

void add_params_options(CLI::App* cmd, ParamsOptions& opts) {
  auto* profile = cmd->add_option("--profile", opts.profile, "binary-basic | binary-opt | general-opt")
                      ->check(CLI::IsMember({"binary-basic", "binary-opt", "general-opt"}));
  auto* family = cmd->add_option("--family", opts.family, "binary | general")
                     ->check(CLI::IsMember({"binary", "general"}));
  auto* lambda = cmd->add_option_function<double>(
      "--lambda", [&opts](double v) { opts.lambda = v; opts.lambda_set = true; },
      "split parameter in (0, 1/2] for a custom scheme");
  profile->excludes(family);
  profile->excludes(lambda);
  lambda->needs(family);
}

FamilyKind parse_family(const std::string& name) {
  if (name == "binary") return FamilyKind::Binary;
  if (name == "general") return FamilyKind::General;
  throw std::invalid_argument("unknown family '" + name + "'");
}

SchemeParams resolve_params(const ParamsOptions& opts, std::ostream& err) {
  if (!opts.profile.empty()) return *SchemeParams::from_profile_name(opts.profile);
  if (opts.family.empty())
    throw std::invalid_argument("either --profile or --family with --lambda is required");
  if (!opts.lambda_set)
    throw std::invalid_argument("a custom scheme needs an explicit --lambda");
  const FamilyKind family = parse_family(opts.family);
  const BetaSolution s = solve_beta(family, opts.lambda, 1e-7);
  err << "# custom scheme: lambda " << fmt(opts.lambda) << " solved beta " << fmt(s.beta, "%.6f")
      << '\n';
  return SchemeParams::custom(family, opts.lambda, s.beta);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"NCA labeling schemes from recursive universal host trees"};
  app.require_subcommand(1);

  ParamsOptions params_opts[7];
  std::int64_t n = 0;
  std::int64_t n_max = 0;
  std::string in_path, out_path;
  Label x = 0, y = 0;
  bool stats = false;
  std::uint64_t seed = kDefaultSeed;
  int exhaustive_n = 0, random_count = 0, random_pairs = kDefaultVerifyPairs;
  Vertex random_size = 0;
  std::int64_t queries = 0;
  bool marked = false;
  std::string table_path;
  std::string family_str;
  double lambda = 0.0;

  auto* sizes = app.add_subcommand("sizes", "size table with per-row bound check (CSV)");
  add_params_options(sizes, params_opts[0]);
  sizes->add_option("--n", n_max, "largest capacity")->required();
  sizes->add_option("--out", out_path, "write CSV here instead of stdout");

  auto* encode = app.add_subcommand("encode", "embed a tree and print its labels");
  add_params_options(encode, params_opts[1]);
  encode->add_option("--n", n, "embedding capacity")->required();
  encode->add_option("--in", in_path, "tree file in the parenthesis grammar")->required();
  encode->add_option("--out", out_path, "write labels here instead of stdout");

  auto* nca_cmd = app.add_subcommand("nca", "NCA label of two labels");
  add_params_options(nca_cmd, params_opts[2]);
  nca_cmd->add_option("--n", n, "capacity")->required();
  nca_cmd->add_option("x", x, "first label")->required();
  nca_cmd->add_option("y", y, "second label")->required();
  nca_cmd->add_flag("--stats", stats, "also print probe and depth counters");

  auto* verify = app.add_subcommand("verify", "embed+decode against the direct NCA oracle");
  add_params_options(verify, params_opts[3]);
  auto* ex_opt = verify->add_option("--exhaustive", exhaustive_n,
                                    "all tree shapes up to this size, all vertex pairs");
  auto* rc_opt = verify->add_option("--random", random_count, "number of random trees");
  verify->add_option("--size", random_size, "random tree size");
  verify->add_option("--pairs", random_pairs, "sampled vertex pairs per random tree");
  verify->add_option("--seed", seed, "random seed");
  ex_opt->excludes(rc_opt);

  auto* bench = app.add_subcommand("bench", "probe and depth statistics on random queries");
  add_params_options(bench, params_opts[4]);
  bench->add_option("--n", n, "capacity")->required();
  bench->add_option("--queries", queries, "number of random label pairs")->required();
  bench->add_option("--seed", seed, "random seed");

  auto* mat = app.add_subcommand("materialize", "write the host tree in the parenthesis grammar");
  add_params_options(mat, params_opts[5]);
  mat->add_option("--n", n, "capacity")->required();
  mat->add_flag("--marked", marked, "the marked-leaf variant");
  mat->add_option("--out", out_path, "write here instead of stdout");

  auto* check = app.add_subcommand("check-consistency", "ancestor-coherence check of a decoder");
  add_params_options(check, params_opts[6]);
  check->add_option("--in", table_path, "dense table file (header m, then m rows)");
  check->add_option("--n", n, "check the live decoder of this capacity instead");

  auto* solve = app.add_subcommand("solve", "exponent and scale for one lambda");
  solve->add_option("--family", family_str, "binary | general")
      ->required()
      ->check(CLI::IsMember({"binary", "general"}));
  solve->add_option("--lambda", lambda, "split parameter in (0, 1/2]")->required();

  auto* optimize = app.add_subcommand("optimize", "lambda minimizing the exponent");
  optimize->add_option("--family", family_str, "binary | general")
      ->required()
      ->check(CLI::IsMember({"binary", "general"}));

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    std::ofstream file_out;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
      file_out.open(out_path);
      if (!file_out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
      sink = &file_out;
    }

    if (sizes->parsed()) return run_sizes(resolve_params(params_opts[0], err), n_max, *sink);
    if (encode->parsed()) {
      std::ifstream tree_in(in_path);
      if (!tree_in) throw std::invalid_argument("cannot open tree file '" + in_path + "'");
      return run_encode(resolve_params(params_opts[1], err), n, tree_in, *sink);
    }
    if (nca_cmd->parsed())
      return run_nca(resolve_params(params_opts[2], err), n, x, y, stats, out);
    if (verify->parsed()) {
      const SchemeParams params = resolve_params(params_opts[3], err);
      if (*ex_opt) return run_verify_exhaustive(params, static_cast<Vertex>(exhaustive_n), out);
      if (*rc_opt) {
        if (random_size < 1) throw std::invalid_argument("--random needs --size");
        return run_verify_random(params, random_count, random_size, random_pairs, seed, out);
      }
      throw std::invalid_argument("verify needs --exhaustive or --random");
    }
    if (bench->parsed())
      return run_bench(resolve_params(params_opts[4], err), n, queries, seed, out, err);
    if (mat->parsed()) return run_materialize(resolve_params(params_opts[5], err), n, marked, *sink);
    if (check->parsed()) {
      if (!table_path.empty()) {
        std::ifstream table_in(table_path);
        if (!table_in) throw std::invalid_argument("cannot open table file '" + table_path + "'");
        return run_check_consistency(DecoderTable::read(table_in), out);
      }
      if (n >= 1) {
        Construction c(resolve_params(params_opts[6], err));
        return run_check_consistency(DecoderTable(c, n), out);
      }
      throw std::invalid_argument("check-consistency needs --in or --n");
    }
    if (solve->parsed()) return run_solve(parse_family(family_str), lambda, out);
    if (optimize->parsed()) return run_optimize(parse_family(family_str), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace nca::cli
