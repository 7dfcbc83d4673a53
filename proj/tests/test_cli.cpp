#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "entrate/process_model.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the entrate binary, from argv[1]
fs::path g_dir;

int run_cli(const std::string& args, std::string* output = nullptr) {
  const fs::path out_file = g_dir / "cli_stdout.txt";
  const std::string cmd = g_cli + " " + args + " > " + out_file.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(out_file);
    std::stringstream buf;
    buf << in.rdbuf();
    *output = buf.str();
  }
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("estimate prints the spec values for aabb") {
  const fs::path f = g_dir / "aabb.bin";
  write(f, std::string("\x00\x00\x01\x01", 4));
  std::string out;
  const int rc = run_cli("estimate --input " + f.string() + " --k 2", &out);
  CHECK(rc == 0);
  CHECK(out.find("H(k,x) = 1\n") != std::string::npos);
  CHECK(out.find("D(k,x) = 2\n") != std::string::npos);
  CHECK(out.find("K(k,x) = 26\n") != std::string::npos);
}

TEST_CASE("simulate then encode/decode round trips a 1 MiB corpus file byte for byte") {
  const fs::path model = g_dir / "markov.json";
  write(model, R"({"variant": "markov", "alphabet_size": 2, "id": "m01",
                   "initial": [0.5, 0.5],
                   "transition": [[0.9, 0.1], [0.1, 0.9]]})");
  const fs::path raw = g_dir / "big.bin";
  const fs::path packed = g_dir / "big.kbc";
  const fs::path restored = g_dir / "big.out";

  CHECK(run_cli("simulate --model " + model.string() + " --n 1048576 --seed 7 --output " +
                raw.string()) == 0);
  CHECK(fs::file_size(raw) == 1048576);
  CHECK(run_cli("encode --input " + raw.string() + " --k 8 --output " + packed.string()) == 0);
  CHECK(run_cli("decode --input " + packed.string() + " --output " + restored.string()) == 0);
  CHECK(slurp(raw) == slurp(restored));
  CHECK(fs::file_size(packed) < fs::file_size(raw));  // flip 0.1 compresses well below 1 bit/sym

  // corrupt one payload byte: decode must not silently succeed with wrong data
  std::string bytes = slurp(packed);
  bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x10);
  const fs::path bad = g_dir / "bad.kbc";
  write(bad, bytes);
  std::string out;
  const int rc = run_cli("decode --input " + bad.string() + " --output " + restored.string(), &out);
  if (rc == 0) CHECK(slurp(raw) != slurp(restored));
  else CHECK(rc == 1);
}

TEST_CASE("regimes subcommand: below rule satisfies the a.s. bound and reproduces exactly") {
  const fs::path cfg = g_dir / "below.json";
  write(cfg, R"({
    "experiment_id": "below-demo",
    "model": {"variant": "iid", "alphabet_size": 2, "probs": [0.5, 0.5], "id": "coin"},
    "schedule": {"rule": "below", "epsilon": 0.5, "k_min": 2, "k_max": 14},
    "trials": 8, "base_seed": 21
  })");
  const fs::path csv1 = g_dir / "below1.csv";
  const fs::path csv2 = g_dir / "below2.csv";
  CHECK(run_cli("regimes --config " + cfg.string() + " --output " + csv1.string()) == 0);
  CHECK(run_cli("--serial regimes --config " + cfg.string() + " --output " + csv2.string()) == 0);
  const std::string a = slurp(csv1);
  CHECK(a == slurp(csv2));  // byte-identical across parallelism settings
  CHECK(a.find("as_bound_ok") != std::string::npos);
  CHECK(a.find("false") == std::string::npos);
}

TEST_CASE("theorem2 subcommand exits zero with zero violations") {
  const fs::path cfg = g_dir / "t2.json";
  write(cfg, R"({
    "model": {"variant": "mixture", "alphabet_size": 2, "id": "mix", "components": [
      {"weight": 0.5, "model": {"variant": "iid", "probs": [1.0, 0.0]}},
      {"weight": 0.5, "model": {"variant": "iid", "probs": [0.0, 1.0]}}]},
    "cases": [{"k": 2, "p": 4}, {"k": 3, "p": 4}],
    "m_grid": [1, 2, 4, 8]
  })");
  const fs::path csv = g_dir / "t2.csv";
  std::string out;
  CHECK(run_cli("theorem2 --config " + cfg.string() + " --output " + csv.string(), &out) == 0);
  CHECK(out.find("all hold") != std::string::npos);
  CHECK(slurp(csv).rfind("k,p,n,m,lhs,rhs,slack,seed_base\n", 0) == 0);
}

TEST_CASE("barron and variational subcommands run from the same config schema") {
  const fs::path cfg = g_dir / "bv.json";
  write(cfg, R"({
    "model": {"variant": "iid", "alphabet_size": 2, "probs": [0.5, 0.5], "id": "coin"},
    "schedule": {"rule": "above", "epsilon": 1.0, "k_min": 2, "k_max": 6},
    "trials": 16, "base_seed": 3, "k": 4, "n": 256, "m_grid": [1, 2, 4]
  })");
  std::string out;
  CHECK(run_cli("barron --config " + cfg.string() + " --output " + (g_dir / "b.csv").string(),
                &out) == 0);
  CHECK(out.find("VIOLATED") == std::string::npos);
  CHECK(run_cli("variational --config " + cfg.string() + " --output " +
                (g_dir / "v.csv").string(), &out) == 0);
  CHECK(out.find("median") != std::string::npos);
  const std::string csv = slurp(g_dir / "b.csv");
  CHECK(csv.rfind("experiment_id,model_id,k,n,trial,trial_seed,k_bound,log_prob,margin\n", 0) ==
        0);
}

TEST_CASE("estimate can export the frequency table") {
  const fs::path f = g_dir / "seq.bin";
  write(f, std::string("\x00\x00\x01\x01\x00\x01", 6));
  const fs::path csv = g_dir / "dist.csv";
  CHECK(run_cli("estimate --input " + f.string() + " --k 2 --dist-csv " + csv.string()) == 0);
  CHECK(slurp(csv) == "block,count\n0-0,1\n0-1,1\n1-1,1\n");
}

TEST_CASE("configuration errors exit with code 2") {
  CHECK(run_cli("estimate --input /nonexistent --k 2") == 2);
  const fs::path cfg = g_dir / "badcfg.json";
  write(cfg, R"({"model": {"variant": "iid", "alphabet_size": 2, "probs": [0.7, 0.7]}})");
  CHECK(run_cli("regimes --config " + cfg.string() + " --output " + (g_dir / "x.csv").string()) ==
        2);
  // k > n in estimate
  const fs::path tiny = g_dir / "tiny.bin";
  write(tiny, std::string("\x00\x01", 2));
  CHECK(run_cli("estimate --input " + tiny.string() + " --k 5") == 2);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-entrate-binary> [doctest args]\n");
    return 1;
  }
  g_cli = argv[1];
  g_dir = fs::temp_directory_path() / ("entrate_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(g_dir);

  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv + 1);
  const int rc = ctx.run();
  fs::remove_all(g_dir);
  return rc;
}
