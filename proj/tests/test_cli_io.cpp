// Serialization and the command-line front end: lossless number formatting,
// content hashing, CSV round-trips, scenario outputs, determinism across
// reruns, and the installed binary's observable behaviour.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <kswave/kswave.hpp>

using namespace kswave;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path d = fs::temp_directory_path() / ("kswave_test_" + leaf);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Path of the command-line binary: the build injects it as a compile
// definition; an environment variable of the same name overrides.
const char* cli_path() {
  if (const char* env = std::getenv("KSWAVE_CLI_PATH")) return env;
#ifdef KSWAVE_CLI_PATH
  return KSWAVE_CLI_PATH;
#else
  return nullptr;
#endif
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  REQUIRE(cli_path() != nullptr);
  const fs::path tmp = fs::temp_directory_path() / "kswave_cli_stdout.txt";
  const std::string cmd =
      std::string(cli_path()) + " " + args + " > " + tmp.string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  if (out) *out = slurp(tmp);
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("g17 formatting round-trips every double exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 3.14159265358979323846, 2.0, -7.25e17}) {
    const std::string s = format_g17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("64-bit FNV-1a matches the published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hex64(0xcbf29ce484222325ull) == "cbf29ce484222325");
}

TEST_CASE("profile CSV round-trips bit-exactly") {
  const ModelParams p;
  WaveProfile pr = sample_profile(Construction::limit, -5.0, 3.0, 57, p);
  pr.construction = Construction::shooting;  // exercise a non-default tag

  std::ostringstream os;
  write_profile_csv(os, pr, {{"note", "round-trip"}});
  std::istringstream is(os.str());
  const WaveProfile back = read_profile_csv(is);

  REQUIRE(back.z.size() == pr.z.size());
  CHECK(back.construction == Construction::shooting);
  for (std::size_t i = 0; i < pr.z.size(); ++i) {
    CHECK(back.z[i] == pr.z[i]);
    CHECK(back.u[i] == pr.u[i]);
    CHECK(back.w[i] == pr.w[i]);
  }
}

TEST_CASE("profile CSV rejects malformed input") {
  SECTION("missing header") {
    std::istringstream is("0.0,1.0,2.0\n");
    CHECK_THROWS_AS(read_profile_csv(is), Error);
  }
  SECTION("malformed row") {
    std::istringstream is("z,u,w\n0.0,1.0\n");
    CHECK_THROWS_AS(read_profile_csv(is), Error);
  }
  SECTION("non-numeric entry") {
    std::istringstream is("z,u,w\n0.0,abc,2.0\n");
    CHECK_THROWS_AS(read_profile_csv(is), Error);
  }
  SECTION("x column header is accepted") {
    std::istringstream is("x,u,w\n0.0,1.0,2.0\n1.0,0.5,0.25\n");
    const WaveProfile pr = read_profile_csv(is);
    CHECK(pr.z.size() == 2);
  }
}

TEST_CASE("field CSV carries the timestamp and grid") {
  Grid1D g;
  g.x_min = 0.0;
  g.x_max = 1.0;
  g.n = 16;
  Field1D f;
  f.t = 0.75;
  f.u.assign(g.n, 1.0);
  f.w.assign(g.n, 0.5);
  std::ostringstream os;
  write_field_csv(os, f, g);
  const std::string text = os.str();
  CHECK(text.find("# t = 0.75\n") != std::string::npos);
  CHECK(text.find("x,u,w\n") != std::string::npos);
}

TEST_CASE("canonical configuration string drives the run hash") {
  ScenarioConfig a;
  a.command = "exact";
  ScenarioConfig b = a;
  CHECK(detail::canonical_config_string(a) == detail::canonical_config_string(b));
  b.params.eps = 0.2;
  CHECK(detail::canonical_config_string(a) != detail::canonical_config_string(b));
  ScenarioConfig c = a;
  c.n = 777;
  CHECK(detail::canonical_config_string(a) != detail::canonical_config_string(c));
  // The output location must NOT feed the hash: same science, same identity.
  ScenarioConfig d = a;
  d.out_dir = "/elsewhere";
  CHECK(detail::canonical_config_string(a) == detail::canonical_config_string(d));
}

TEST_CASE("scenario runs write parseable, deterministic files") {
  ScenarioConfig cfg;
  cfg.command = "exact";
  cfg.n = 101;
  const fs::path d1 = fresh_dir("scn1");
  const fs::path d2 = fresh_dir("scn2");

  cfg.out_dir = d1.string();
  const RunReport r1 = run_scenario(cfg);
  REQUIRE_FALSE(r1.files_written.empty());
  for (const auto& f : r1.files_written) CHECK(fs::exists(f));

  // The profile parses back and matches the closed form.
  const fs::path prof = d1 / "run_profile.csv";
  REQUIRE(fs::exists(prof));
  std::ifstream is(prof);
  const WaveProfile pr = read_profile_csv(is);
  CHECK(pr.z.size() == 101);
  CHECK(pr.construction == Construction::exact);

  // The summary parses as JSON and self-identifies.
  const fs::path summ = d1 / "run_summary.json";
  REQUIRE(fs::exists(summ));
  const auto j = nlohmann::json::parse(slurp(summ));
  CHECK(j["command"] == "exact");
  CHECK(j["tool"] == "kswave");
  CHECK(j["config_hash"].get<std::string>().rfind("fnv1a:", 0) == 0);

  // Rerunning into a different directory produces byte-identical files.
  cfg.out_dir = d2.string();
  const RunReport r2 = run_scenario(cfg);
  REQUIRE(r1.files_written.size() == r2.files_written.size());
  for (const auto& f : r1.files_written) {
    const fs::path rel = fs::path(f).filename();
    CHECK(slurp(d1 / rel) == slurp(d2 / rel));
  }
}

TEST_CASE("scenario validate round-trip accepts shipped profiles") {
  const fs::path d = fresh_dir("val");
  ScenarioConfig mk;
  mk.command = "exact";
  mk.out_dir = d.string();
  run_scenario(mk);

  ScenarioConfig val;
  val.command = "validate";
  val.in_path = (d / "run_profile.csv").string();
  val.out_dir = d.string();
  val.tag = "check";
  const RunReport r = run_scenario(val);
  CHECK(r.summary["n"].get<std::size_t>() == 501);
  CHECK(r.summary["construction"] == "exact");
}

TEST_CASE("unknown scenario command is rejected") {
  ScenarioConfig cfg;
  cfg.command = "frobnicate";
  CHECK_THROWS_AS(run_scenario(cfg), Error);
}

TEST_CASE("command-line binary: exit codes and self-reporting") {
  REQUIRE(cli_path() != nullptr);
  const fs::path d = fresh_dir("cli");

  SECTION("a good run exits 0 and prints the summary it wrote") {
    std::string out;
    const int rc = run_cli("exact -o " + d.string() + " -n 51", &out);
    CHECK(rc == 0);
    const std::string file_copy = slurp(d / "run_summary.json");
    CHECK(out == file_copy);
  }
  SECTION("unknown options exit nonzero") {
    CHECK(run_cli("exact --definitely-not-an-option") != 0);
  }
  SECTION("unknown subcommand exits nonzero") {
    CHECK(run_cli("frobnicate") != 0);
  }
  SECTION("invalid physics exits nonzero with a diagnostic") {
    // d_w >= chi has no closed-form wave
    CHECK(run_cli("exact --eps 2.5 -o " + d.string()) != 0);
  }
}

TEST_CASE("command-line binary agrees with the in-process scenario runner") {
  REQUIRE(cli_path() != nullptr);
  const fs::path dbin = fresh_dir("parity_bin");
  const fs::path dlib = fresh_dir("parity_lib");

  const int rc = run_cli("shoot --eps 0.01 --u-tilde-start 1 -o " + dbin.string());
  REQUIRE(rc == 0);

  ScenarioConfig cfg;
  cfg.command = "shoot";
  cfg.params.eps = 0.01;
  cfg.u_tilde_start = 1.0;
  cfg.out_dir = dlib.string();
  run_scenario(cfg);

  for (const char* leaf : {"run_summary.json", "run_profile.csv"}) {
    CHECK(slurp(dbin / leaf) == slurp(dlib / leaf));
  }
}

TEST_CASE("command-line binary validates a profile it produced") {
  REQUIRE(cli_path() != nullptr);
  const fs::path d = fresh_dir("cli_val");
  REQUIRE(run_cli("exact -o " + d.string()) == 0);
  std::string out;
  const int rc =
      run_cli("validate --in " + (d / "run_profile.csv").string() + " -o " + d.string(), &out);
  CHECK(rc == 0);
  const auto j = nlohmann::json::parse(out);
  CHECK(j["construction"] == "exact");
}
