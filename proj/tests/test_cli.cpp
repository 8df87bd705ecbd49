#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nca/cli.hpp"

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"nca"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      nca::cli::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempFile {
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("nca_cli_test_" + std::to_string(counter++) + ".txt");
    std::ofstream(path) << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::filesystem::path path;
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("sizes: pinned CSV rows and bound verdict") {
  const CliResult r = run({"sizes", "--profile", "binary-basic", "--n", "5"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "n,size_plain,size_marked,bits,bound\n"));
  CHECK(contains(r.out, "1,1,1,0,1\n"));
  CHECK(contains(r.out, "2,3,3,2,4\n"));
  CHECK(contains(r.out, "3,5,7,3,9\n"));
  CHECK(contains(r.out, "4,9,11,4,16\n"));
  CHECK(contains(r.out, "5,13,19,4,25\n"));
  CHECK(contains(r.out, "# bounds: all 5 rows hold"));
}

TEST_CASE("sizes: opt profile bound column") {
  const CliResult r = run({"sizes", "--profile", "binary-opt", "--n", "2"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "2,3,3,2,3.7"));
}

TEST_CASE("sizes writes to a file with --out") {
  const TempFile out("");
  const CliResult r =
      run({"sizes", "--profile", "general-opt", "--n", "1", "--out", out.path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out.path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(contains(content.str(), "1,1,1,0,1"));
}

TEST_CASE("encode: pinned example") {
  const TempFile tree("((()))");
  const CliResult r = run(
      {"encode", "--profile", "binary-basic", "--n", "3", "--in", tree.path.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "binary 0.5 3 5 3\n0 0\n1 1\n2 3\n");
}

TEST_CASE("encode: family violation exits 2") {
  const TempFile tree("(()()())");
  const CliResult r = run(
      {"encode", "--profile", "binary-basic", "--n", "4", "--in", tree.path.string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "error:"));
}

TEST_CASE("encode: unparsable tree exits 2") {
  const TempFile tree("((");
  const CliResult r = run(
      {"encode", "--profile", "binary-basic", "--n", "4", "--in", tree.path.string()});
  CHECK(r.code == 2);
}

TEST_CASE("nca: pinned answers") {
  CHECK(run({"nca", "--profile", "binary-basic", "--n", "3", "3", "4"}).out == "1\n");
  CHECK(run({"nca", "--profile", "binary-basic", "--n", "3", "0", "0"}).out == "0\n");
  CHECK(run({"nca", "--profile", "binary-basic", "--n", "3", "2", "4"}).out == "0\n");
  const CliResult stats =
      run({"nca", "--profile", "binary-basic", "--n", "3", "3", "4", "--stats"});
  CHECK(stats.code == 0);
  CHECK(contains(stats.out, "probes "));
  CHECK(contains(stats.out, "depth "));
  CHECK(run({"nca", "--profile", "binary-basic", "--n", "3", "0", "99"}).code == 2);
}

TEST_CASE("verify exhaustive: counts and exit code") {
  const CliResult r = run({"verify", "--profile", "binary-basic", "--exhaustive", "6"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "size 6: trees 11,"));
  CHECK(contains(r.out, "total: trees 24,"));
  CHECK(contains(r.out, "structural failures 0"));
  CHECK(contains(r.out, "commutation failures 0"));
}

TEST_CASE("verify random: small run passes") {
  const CliResult r = run({"verify", "--profile", "general-opt", "--random", "5", "--size",
                           "50", "--pairs", "200"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "random trees: 5 of size 50"));
  CHECK(contains(r.out, "commutation failures 0"));
}

TEST_CASE("verify output is byte-identical across runs") {
  const auto args = std::vector<std::string>{"verify", "--profile", "binary-opt",
                                             "--random", "3", "--size", "40"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("bench: single vertex and a small real run") {
  const CliResult tiny =
      run({"bench", "--profile", "binary-basic", "--n", "1", "--queries", "1"});
  CHECK(tiny.code == 0);
  CHECK(contains(tiny.out, "max_probes 0"));
  CHECK(contains(tiny.out, "bounds ok"));

  const CliResult real =
      run({"bench", "--profile", "binary-opt", "--n", "1000", "--queries", "200"});
  CHECK(real.code == 0);
  CHECK(contains(real.out, "bounds ok"));
  CHECK(contains(real.err, "wall_ns_per_query"));
}

TEST_CASE("materialize: pinned trees") {
  CHECK(run({"materialize", "--profile", "binary-basic", "--n", "2"}).out == "(()())\n");
  CHECK(run({"materialize", "--profile", "binary-basic", "--n", "2", "--marked"}).out ==
        "((*)())\n");
  CHECK(run({"materialize", "--profile", "binary-basic", "--n", "1"}).out == "()\n");
  // above the materialization limit
  CHECK(run({"materialize", "--profile", "general-opt", "--n", "10000"}).code == 2);
}

TEST_CASE("check-consistency: file and live modes") {
  const TempFile good("3\n0 0 0\n0 1 0\n0 0 2\n");
  const CliResult ok = run({"check-consistency", "--in", good.path.string()});
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "consistent"));

  const TempFile bad("2\n0 1\n0 1\n");
  const CliResult fail = run({"check-consistency", "--in", bad.path.string()});
  CHECK(fail.code == 1);
  CHECK(contains(fail.out, "inconsistent"));

  const TempFile malformed("2\n0\n");
  CHECK(run({"check-consistency", "--in", malformed.path.string()}).code == 2);

  const CliResult live = run({"check-consistency", "--profile", "binary-basic", "--n", "5"});
  CHECK(live.code == 0);
  CHECK(contains(live.out, "universe 13"));
  CHECK(contains(live.out, "consistent"));
}

TEST_CASE("solve and optimize") {
  const CliResult solve =
      run({"solve", "--family", "binary", "--lambda", "0.296149"});
  CHECK(solve.code == 0);
  CHECK(contains(solve.out, "beta 1.8931"));
  const CliResult opt = run({"optimize", "--family", "binary"});
  CHECK(opt.code == 0);
  CHECK(contains(opt.out, "lambda_star 0.296"));
}

TEST_CASE("custom scheme needs --lambda and reports the solved exponent") {
  const CliResult missing = run({"sizes", "--family", "binary", "--n", "3"});
  CHECK(missing.code == 2);
  const CliResult custom =
      run({"sizes", "--family", "binary", "--lambda", "0.4", "--n", "3"});
  CHECK(custom.code == 0);
  CHECK(contains(custom.err, "custom scheme"));
  CHECK(contains(custom.err, "solved beta"));
}

TEST_CASE("argument errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"sizes", "--profile", "nope", "--n", "3"}).code == 2);
  CHECK(run({"sizes", "--n", "3"}).code == 2);
  CHECK(run({"sizes", "--profile", "binary-basic", "--profile@@", "x"}).code == 2);
  CHECK(run({"verify", "--profile", "binary-basic"}).code == 2);
  CHECK(run({"verify", "--profile", "binary-basic", "--random", "2"}).code == 2);
  // --profile and --family are mutually exclusive
  CHECK(run({"sizes", "--profile", "binary-basic", "--family", "binary", "--n", "2"}).code ==
        2);
}

TEST_CASE("help exits 0") {
  CHECK(run({"--help"}).code == 0);
}
