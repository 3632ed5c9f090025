#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks of the installed binary: happy paths for each
// subcommand, the exit-code contract, and byte-identical experiment reruns.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("PADELAB_BIN");
  REQUIRE_MESSAGE(b != nullptr, "PADELAB_BIN must point at the padelab binary");
  return b;
}

int run(const std::string& args) {
  const std::string cmd = "\"" + bin() + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

int run_env(const std::string& env, const std::string& args) {
  const std::string cmd = env + " \"" + bin() + "\" " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), ("missing file: " + p.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int line_count(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::path("cli_scratch") / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("series subcommand writes csv and sidecar") {
  const fs::path out = fresh_dir("series");
  CHECK(run("series --family pole2 --order 6 --out " + out.string()) == 0);
  const std::string csv = slurp(out / "series.csv");
  CHECK(csv.rfind("n,re,im\n", 0) == 0);
  CHECK(line_count(csv) == 8);  // header + orders 0..6
  CHECK(slurp(out / "series.json").find("\"family\": \"pole2\"") != std::string::npos);
}

TEST_CASE("pade subcommand emits the approximant") {
  const fs::path out = fresh_dir("pade");
  CHECK(run("pade --family f1_log --order 2 2 --out " + out.string()) == 0);
  const std::string json = slurp(out / "approximant.json");
  CHECK(json.find("\"L\": 2") != std::string::npos);
  CHECK(json.find("\"least_squares\": false") != std::string::npos);
}

TEST_CASE("roots subcommand accepts a polynomial file") {
  const fs::path out = fresh_dir("roots");
  {
    std::ofstream poly(out / "poly.csv");
    poly << "n,re,im\n0,-2,0\n1,1,0\n2,1,0\n";  // (z - 1)(z + 2)
  }
  CHECK(run("roots --poly " + (out / "poly.csv").string() + " --out " + out.string()) ==
        0);
  const std::string csv = slurp(out / "roots.csv");
  CHECK(csv.rfind("re,im,backward_error,refined,clustered\n", 0) == 0);
  CHECK(line_count(csv) == 3);
}

TEST_CASE("classify subcommand writes doublets and the scatter") {
  const fs::path out = fresh_dir("classify");
  CHECK(run("classify --family pole2 --truncation 20 --order 10 10 "
            "--policy regularize --out " +
            out.string()) == 0);
  const std::string csv = slurp(out / "doublets.csv");
  CHECK(line_count(csv) == 11);  // header + 10 poles
  CHECK(csv.find("STABLE") != std::string::npos);
  CHECK(slurp(out / "pole_zero.svg").find("</svg>") != std::string::npos);
}

TEST_CASE("denoise subcommand recovers a planted mode") {
  const fs::path out = fresh_dir("denoise");
  {
    std::ofstream samples(out / "samples.csv");
    // Full precision: default 6-digit formatting would plant a ~1e-6
    // quantization floor alongside the mode.
    samples << std::setprecision(17) << "n,re,im\n";
    for (int k = 0; k < 64; ++k) {
      const double t = k;
      const double re = std::exp(-0.05 * t) * std::cos(2.0 * M_PI * 0.12 * t);
      const double im = std::exp(-0.05 * t) * std::sin(2.0 * M_PI * 0.12 * t);
      samples << k << ',' << re << ',' << im << '\n';
    }
  }
  CHECK(run("denoise --input " + (out / "samples.csv").string() +
            " --duration 64 --order 3 3 --out " + out.string()) == 0);
  const std::string csv = slurp(out / "modes.csv");
  CHECK(line_count(csv) == 2);  // header + the planted mode
  CHECK(csv.find("0.12") != std::string::npos);
}

TEST_CASE("exit codes follow the contract") {
  const fs::path out = fresh_dir("exitcodes");
  // 2: configuration and usage errors
  CHECK(run("series --family no_such_family --out " + out.string()) == 2);
  CHECK(run("experiment --id NOPE --out " + out.string()) == 2);
  CHECK(run("pade --family f1_log --policy bogus --out " + out.string()) == 2);
  CHECK(run("denoise") == 2);  // missing required options
  // 3: numerical failure surfaces as SolveError
  CHECK(run("pade --family fib_generating --order 3 3 --policy strict --out " +
            out.string()) == 3);
  // 4: unwritable output location (a file where a directory must go)
  { std::ofstream block(out / "blockfile"); }
  CHECK(run("series --family pole2 --out " + (out / "blockfile" / "sub").string()) ==
        4);
  CHECK(run("pade --input no_such_input.csv --order 2 2 --out " + out.string()) == 4);
}

TEST_CASE("experiment reruns are byte-identical") {
  const fs::path a = fresh_dir("exp_a");
  const fs::path b = fresh_dir("exp_b");
  CHECK(run("experiment --id FIG1_F1_COMPARE --out " + a.string()) == 0);
  CHECK(run("experiment --id FIG1_F1_COMPARE --out " + b.string()) == 0);
  CHECK(slurp(a / "fig1_f1_compare.csv") == slurp(b / "fig1_f1_compare.csv"));
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  CHECK(slurp(a / "manifest.json").find("\"fnv1a64\"") != std::string::npos);
}

TEST_CASE("experiment results do not depend on the thread budget") {
  const fs::path one = fresh_dir("exp_t1");
  const fs::path four = fresh_dir("exp_t4");
  CHECK(run_env("PADE_LAB_THREADS=1", "experiment --id FIG8_POLE_NOISE --out " +
                                          one.string()) == 0);
  CHECK(run_env("PADE_LAB_THREADS=4", "experiment --id FIG8_POLE_NOISE --out " +
                                          four.string()) == 0);
  CHECK(slurp(one / "fig8_runs.csv") == slurp(four / "fig8_runs.csv"));
  CHECK(slurp(one / "fig8_summary.csv") == slurp(four / "fig8_summary.csv"));
  const std::string summary = slurp(one / "fig8_summary.csv");
  CHECK(line_count(summary) == 6);  // header + five noise levels
}
