#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "landau/cli.hpp"
#include "landau/io.hpp"
#include "support.hpp"

using namespace landau;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("landau_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "landau");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kBase = "n = 16\nL = 8\nt_end = 0.3\np = 2\nm = 12\n";

}  // namespace

TEST_SUITE("io_cli") {
  TEST_CASE("config parsing") {
    const SimConfig c = parse_config_text(std::string(kBase) +
                                          "initial = two_bump  # comment\nseparation = 2.5\nweights = 0.6, 0.4\ncfl = 0.25\n"
                                          "snapshot_every = 2\nclip_negatives = true\ncoefficient_refresh = 3\n");
    CHECK(c.n == 16);
    CHECK(c.extent == 8.0);
    CHECK(c.t_end == 0.3);
    CHECK(c.cfl == 0.25);
    CHECK(c.snapshot_every == 2);
    CHECK(c.clip_negatives);
    CHECK(c.coefficient_refresh == 3);
    const auto& d = std::get<TwoBump>(c.initial);
    CHECK(d.separation == 2.5);
    CHECK(d.weights[0] == 0.6);
    CHECK(d.weights[1] == 0.4);

    const SimConfig def = parse_config_text(std::string(kBase) + "initial = maxwellian\n");
    CHECK(def.cfl == 0.5);
    CHECK(def.snapshot_every == 1);
    CHECK_FALSE(def.clip_negatives);
    CHECK(def.coefficient_refresh == 1);
  }

  TEST_CASE("config errors name the key") {
    CHECK(error_of("n = 16\nL = 8\nt_end = 1\np = 2\ninitial = maxwellian\n") == "config key 'm': required key is missing");
    CHECK(error_of(std::string(kBase) + "initial = maxwellian\nfoo = 1\n") == "config key 'foo': unknown key");
    CHECK(error_of(std::string(kBase) + "initial = maxwellian\namplitude = 0.1\n") ==
          "config key 'amplitude': not valid for initial = maxwellian");
    CHECK(error_of(std::string(kBase) + "initial = perturbed_maxwellian\namplitude = 2\n").rfind("config key 'amplitude': ", 0) == 0);
    CHECK(error_of(std::string(kBase) + "initial = perturbed_maxwellian\namplitude = x\n").rfind("config key 'amplitude': ", 0) == 0);
    CHECK(error_of(std::string(kBase) + "initial = anisotropic_gaussian\ntemperatures = 1, 2\n").rfind("config key 'temperatures': ", 0) == 0);
    CHECK(error_of("n = 15\nL = 8\nt_end = 1\np = 2\nm = 12\ninitial = maxwellian\n").rfind("config key 'n': ", 0) == 0);
    CHECK(error_of("n = 16\nL = 8\nt_end = 1\np = 1.2\nm = 12\ninitial = maxwellian\n").rfind("config key 'p': ", 0) == 0);
    CHECK(error_of(std::string(kBase) + "initial = cube\n").rfind("config key 'initial': ", 0) == 0);
    CHECK_FALSE(error_of(std::string(kBase) + "initial = maxwellian\nn = 32\n").empty());
    CHECK_THROWS_AS(parse_config("/nonexistent/landau.cfg"), std::runtime_error);
  }

  TEST_CASE("format_config round-trips") {
    SimConfig c = landau::testing::config(24, AnisotropicGaussian{{0.7, 1.1, 1.3}}, 0.75, 0.3);
    c.clip_negatives = true;
    const SimConfig back = parse_config_text(format_config(c));
    CHECK(format_config(back) == format_config(c));
    CHECK(std::get<AnisotropicGaussian>(back.initial).temperatures[2] == 1.3);
  }

  TEST_CASE("trajectory round trip is bitwise") {
    TempDir dir("roundtrip");
    SimConfig c = parse_config_text(std::string(kBase) + "initial = perturbed_maxwellian\namplitude = 0.3\nmode = 2\n");
    const Trajectory tr = run(c);
    write_trajectory(tr, dir.path);
    const Trajectory back = read_trajectory(dir.path);
    CHECK(back.grid == tr.grid);
    CHECK(back.p == tr.p);
    CHECK(back.m == tr.m);
    REQUIRE(back.snapshots.size() == tr.snapshots.size());
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
      CHECK(back.times[i] == tr.times[i]);
      CHECK(std::memcmp(back.snapshots[i].values().data(), tr.snapshots[i].values().data(), tr.grid.size() * 8) == 0);
    }
    REQUIRE(back.scalars.size() == tr.scalars.size());
    CHECK(back.scalars.back().entropy == tr.scalars.back().entropy);
    CHECK(back.scalars.back().grad_energy == tr.scalars.back().grad_energy);
    CHECK(back.clipped_mass == tr.clipped_mass);
    CHECK(scalars_csv(back) == scalars_csv(tr));

    // header plus rows, 12 columns each
    std::istringstream csv(slurp(dir.path / kScalarsFile));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv, line)) {
      CHECK(std::count(line.begin(), line.end(), ',') == kScalarColumns - 1);
      ++rows;
    }
    CHECK(rows == tr.scalars.size() + 1);
  }

  TEST_CASE("reading rejects a sidecar that disagrees with the trajectory") {
    TempDir dir("mismatch");
    const Trajectory tr = run(parse_config_text(std::string(kBase) + "initial = maxwellian\n"));
    write_trajectory(tr, dir.path);
    std::ofstream(dir.path / "snapshot_00001.txt") << "n = 24\nL = 8\ntime = 0.1\n";
    CHECK_THROWS_AS(read_trajectory(dir.path), std::runtime_error);
    CHECK_THROWS_AS(read_trajectory(dir.path / "absent"), std::runtime_error);
  }

  TEST_CASE("manifest") {
    TempDir dir("manifest");
    RunManifest m;
    m.config = parse_config_text(std::string(kBase) + "initial = maxwellian\n");
    m.version = version_string();
    m.start_time = utc_timestamp();
    m.end_time = utc_timestamp();
    m.outputs = {"scalars.csv"};
    m.abort_reason = "||f||_inf exceeded";
    write_manifest(m, dir.path);
    const auto j = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
    CHECK(j.at("version") == "landau 0.1.0");
    CHECK(j.at("abort_reason") == "||f||_inf exceeded");
    CHECK(j.at("outputs").size() == 1);
    CHECK(j.at("start_time").get<std::string>().back() == 'Z');
    int leftovers = 0;
    for (const auto& e : fs::directory_iterator(dir.path)) leftovers += e.path().filename() != "manifest.json";
    CHECK(leftovers == 0);
  }

  TEST_CASE("cli exponents") {
    const CliResult r = cli({"exponents", "--p", "2", "--m", "55"});
    CHECK(r.code == 0);
    CHECK(r.out.find("gamma = 0.278787878788\n") != std::string::npos);
    CHECK(r.out.find("theorem_admissible = false") != std::string::npos);
    CHECK(cli({"exponents", "--p", "1.2", "--m", "55"}).code == 2);
  }

  TEST_CASE("cli usage errors") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"run", "--config", "/nonexistent.cfg", "--out", "/tmp/x"}).code == 2);
    CHECK(cli({"diagnose", "--dir", "/nonexistent/landau"}).code == 2);
    CHECK(cli({"verify", "--n", "7"}).code == 2);
  }

  TEST_CASE("cli run, diagnose and determinism") {
    TempDir dir("cli");
    const fs::path cfg = dir.path / "run.cfg";
    std::ofstream(cfg) << kBase << "t_end = 2\n"
                       << "initial = two_bump\n";
    // duplicate key is a usage error
    CHECK(cli({"run", "--config", cfg.string(), "--out", (dir.path / "a").string()}).code == 2);
    std::ofstream(cfg) << "n = 16\nL = 8\nt_end = 1.2\np = 2\nm = 12\ninitial = two_bump\n";
    REQUIRE(cli({"run", "--config", cfg.string(), "--out", (dir.path / "a").string()}).code == 0);
    REQUIRE(cli({"run", "--config", cfg.string(), "--out", (dir.path / "b").string()}).code == 0);
    CHECK(slurp(dir.path / "a" / kScalarsFile) == slurp(dir.path / "b" / kScalarsFile));
    CHECK(fs::exists(dir.path / "a" / "manifest.json"));

    const CliResult d = cli({"diagnose", "--dir", (dir.path / "a").string()});
    CHECK(d.code == 0);
    for (const char* f : {"report.json", "energy.csv", "moments.csv", "degiorgi.csv"}) {
      CHECK(fs::exists(dir.path / "a" / "diagnostics" / f));
    }
    const auto report = nlohmann::json::parse(slurp(dir.path / "a" / "diagnostics" / "report.json"));
    CHECK(report.at("p") == 2.0);
  }

  TEST_CASE("cli sweep") {
    TempDir dir("sweep");
    const CliResult r = cli({"sweep", "--amplitudes", "0.1,0.3", "--n", "16", "--t-end", "0.2", "--workers", "2", "--out",
                             dir.path.string()});
    CHECK(r.code == 0);
    std::istringstream csv(slurp(dir.path / "summary.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 3);
    CHECK(fs::exists(dir.path / "run_a0.3_n16_p2" / kScalarsFile));
    CHECK(cli({"sweep", "--amplitudes", "1.5", "--out", dir.path.string()}).code == 2);
  }

  TEST_CASE("cli verify") {
    const CliResult r = cli({"verify", "--n", "32"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS trace_identity") != std::string::npos);
  }
}
