#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "tlab/cli.hpp"
#include "tlab/field_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "tlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "tlab_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"norm"}).code == 2);
  CHECK(run({"norm", "--norm", "nope", "--member", "single_mode_1"}).code == 2);
  CHECK(run({"norm", "--norm", "campanato"}).code == 2);
  CHECK(run({"norm", "--norm", "campanato", "--input", "/nonexistent.bin"}).code == 2);
  CHECK(run({"norm", "--norm", "campanato", "--member", "single_mode_1", "--alpha", "x"}).code == 2);
  CHECK(run({"verify", "--theorem", "9.9"}).code == 2);
  CHECK(run({"ns", "--probe", "sideways"}).code == 2);
  const auto bad = run({"corpus", "--grid", "64"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("max_freq") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("corpus and norm commands") {
  const auto dir = scratch();
  const auto c = run({"corpus", "--fields", "--out", (dir / "c").string()});
  REQUIRE(c.code == 0);
  CHECK(fs::exists(dir / "c" / "corpus.json"));
  CHECK(fs::exists(dir / "c" / "manifest.json"));
  CHECK(fs::exists(dir / "c" / "run_config.json"));
  REQUIRE(fs::exists(dir / "c" / "frac_noise_3.bin"));

  const auto from_file = run({"norm", "--norm", "campanato", "--alpha=-0.25", "--input",
                              (dir / "c" / "frac_noise_3.bin").string()});
  const auto from_member = run({"norm", "--norm", "campanato", "--alpha=-0.25", "--member", "frac_noise_3",
                                "--corpus", (dir / "c" / "corpus.json").string()});
  REQUIRE(from_file.code == 0);
  CHECK(from_file.out == from_member.out);

  for (const char* n : {"campanato_pair", "q", "frac_campanato", "inverse_space", "h_alpha2", "scaled_h", "star",
                        "t_alpha2", "scaled_t", "dagger", "bloch_hb", "bloch_cb", "besov"}) {
    const auto r = run({"norm", "--norm", n, "--alpha", "0.5", "--member", "trig_poly_1", "--grid", "128", "--out",
                        (dir / (std::string(n) + ".json")).string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / (std::string(n) + ".json")));
  }
  const auto q = run({"norm", "--norm", "q", "--alpha", "0.5", "--member", "trig_poly_1", "--grid", "128", "--table"});
  CHECK(q.out.find("per_box") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("verify writes its tables and gates the exit code") {
  const auto dir = scratch();
  const auto ok = run({"verify", "--theorem", "2.1,4.2", "--alpha=-0.5,0.5", "--grid", "128", "--out", dir.string()});
  CHECK(ok.code == 0);
  for (const char* f : {"verify_2.1.json", "verify_4.2.json", "summary.csv", "run_config.json", "manifest.json"})
    CHECK(fs::exists(dir / f));
  CHECK(ok.out.find("all thresholds met") != std::string::npos);

  const auto strict = run({"verify", "--theorem", "2.1", "--alpha", "0.5", "--grid", "128", "--max-spread", "1.01",
                           "--no-refine"});
  CHECK(strict.code == 1);
  CHECK(strict.out.find("FAIL") != std::string::npos);

  tlab::io::write_text(dir / "cfg.json", R"({"verify": {"max_spread": 1.01, "refine": false}})");
  CHECK(run({"verify", "--theorem", "2.1", "--alpha", "0.5", "--grid", "128", "--config", (dir / "cfg.json").string()})
            .code == 1);
  CHECK(run({"verify", "--theorem", "2.1", "--alpha", "0.5", "--grid", "128", "--config", (dir / "cfg.json").string(),
             "--max-spread", "30"})
            .code == 0);
  fs::remove_all(dir);
}

TEST_CASE("ns solve exports a trace") {
  const auto dir = scratch();
  const auto r = run({"ns", "--probe", "solve", "--grid", "16", "--T", "0.02", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "trace.json"));
  CHECK(fs::exists(dir / "trace.csv"));
  const auto u = tlab::load_field(dir / "trace" / "node_0031_u2.bin");
  CHECK(u.grid().dims == 3);
  const auto rk = run({"ns", "--probe", "solve", "--grid", "16", "--T", "0.02", "--method", "ifrk4", "--linear-only"});
  CHECK(rk.code == 0);
  fs::remove_all(dir);
}
