#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nca/consistency.hpp"
#include "nca/construction.hpp"

namespace nca::cli {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr int kDefaultVerifyPairs = 10000;

// Every command returns an exit code: 0 success / all checks pass,
// 1 verification failures found, 2 invalid input or overflow (mapped from
// exceptions by cli_main). All output is deterministic for fixed flags and
// seed; only the bench timing line (written to `timing`) varies.

int run_sizes(const SchemeParams& params, std::int64_t n_max, std::ostream& out);
int run_encode(const SchemeParams& params, std::int64_t n, std::istream& tree_in,
               std::ostream& out);
int run_nca(const SchemeParams& params, std::int64_t n, Label x, Label y, bool stats,
            std::ostream& out);
int run_verify_exhaustive(const SchemeParams& params, Vertex max_n, std::ostream& out);
int run_verify_random(const SchemeParams& params, int count, Vertex size, int pairs,
                      std::uint64_t seed, std::ostream& out);
int run_bench(const SchemeParams& params, std::int64_t n, std::int64_t queries,
              std::uint64_t seed, std::ostream& out, std::ostream& timing);
int run_materialize(const SchemeParams& params, std::int64_t n, bool marked,
                    std::ostream& out);
int run_check_consistency(const DecoderTable& table, std::ostream& out);
int run_solve(FamilyKind family, double lambda, std::ostream& out);
int run_optimize(FamilyKind family, std::ostream& out);

// Full argv-level entry point (parsing, file handling, exception mapping).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nca::cli
