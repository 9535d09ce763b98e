#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mirage/config.hpp"
#include "mirage/errors.hpp"
#include "mirage/grid_io.hpp"

using namespace mirage;
namespace fs = std::filesystem;

namespace {

const char* cli() {
  const char* p = std::getenv("MIRAGE_CLI");
  REQUIRE_MESSAGE(p, "MIRAGE_CLI not set");
  return p;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mirage_test_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Result {
  int code;
  std::string out;
};

Result sh(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / ("mirage_cli_" + std::to_string(::getpid()) + ".log");
  const std::string cmd = std::string(cli()) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in, "missing " << p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Short runs with a coarse cache keep the CLI tests quick.
fs::path small_config(const fs::path& dir) {
  RunConfig c;
  c.normalization_grid = 128;
  c.cache_resolution = 256;
  c.sim.max_total_iters = 3000;
  c.bins = 30;
  c.grid = 40;
  c.presets = {{"uniform_depth", 0.5, 0.5}, {"focus_impurity", 0.05, 0.5}};
  const fs::path path = dir / "small.json";
  save_config(path, c);
  return path;
}

HistogramGrid sample_counts() {
  HistogramGrid g(3, 2, Bounds{-1, 2, 0, 1}, GridKind::counts);
  g(0, 0) = 250;
  g(1, 0) = 220;
  g(2, 0) = 110;
  g(0, 1) = 0;
  g(1, 1) = 1;
  g(2, 1) = 219.4;
  return g;
}

std::string pgm_pixels(const std::string& bytes) {
  // header "P5\n<w> <h>\n255\n"
  std::size_t pos = 0;
  for (int lines = 0; lines < 3; ++lines) pos = bytes.find('\n', pos) + 1;
  return bytes.substr(pos);
}

}  // namespace

TEST_CASE("grid CSV round trip") {
  HistogramGrid g(5, 4, Bounds{-14.25, 14.25, -12.34, 12.34}, GridKind::mean_displacement);
  g(1, 2) = 0.1 + 0.2;
  g(4, 3) = 1e-17;
  std::stringstream ss;
  write_grid_csv(ss, g);
  const std::string text = ss.str();
  const HistogramGrid back = read_grid_csv(ss);
  CHECK(back.kind() == g.kind());
  CHECK(back.bounds() == g.bounds());
  CHECK(back(1, 2) == g(1, 2));
  CHECK(back(4, 3) == g(4, 3));
  CHECK(back.is_empty(0, 0));
  std::stringstream again;
  write_grid_csv(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("malformed grid CSV reports the line") {
  std::stringstream ss;
  write_grid_csv(ss, sample_counts());
  std::string text = ss.str();
  // corrupt the fifth data row (line 8)
  std::size_t pos = 0;
  for (int i = 0; i < 7; ++i) pos = text.find('\n', pos) + 1;
  text.insert(pos, "x");
  std::stringstream bad(text);
  try {
    read_grid_csv(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 8);
    CHECK(std::string(e.what()).find("line 8") != std::string::npos);
  }
  std::stringstream truncated("# mirage-grid v1\n# kind=counts nx=2 ny=2 xmin=0 xmax=1 ymin=0 ymax=1\nx,y,value\n0,0,1\n");
  CHECK_THROWS_AS(read_grid_csv(truncated), ParseError);
  std::stringstream wrong_kind("# mirage-grid v1\n# kind=pressure nx=1 ny=1 xmin=0 xmax=1 ymin=0 ymax=1\n");
  CHECK_THROWS_AS(read_grid_csv(wrong_kind), ParseError);
}

TEST_CASE("pixel mapping") {
  const PixelRange counts{0, 220};
  CHECK(to_pixel(250, counts) == 255);
  CHECK(to_pixel(220, counts) == 255);
  CHECK(to_pixel(110, counts) == 128);
  CHECK(to_pixel(0, counts) == 0);
  CHECK(to_pixel(std::nan(""), counts) == 0);
  CHECK(to_pixel(5, PixelRange{0, 0}) == 0);
  HistogramGrid f(2, 1, Bounds{0, 1, 0, 1}, GridKind::field);
  f(0, 0) = -2;
  f(1, 0) = 1;
  const PixelRange r = pixel_range(f);
  CHECK(r.lo == -2);
  CHECK(r.hi == 2);
  CHECK(to_pixel(0, r) == 128);
}

TEST_CASE("trajectory CSV layout") {
  Trajectory t;
  WalkerState s;
  s.pos = Point(1.5, -2.0);
  t.states.push_back(s);
  s.iter = 1;
  s.p = 0.125;
  s.w = 0.5;
  t.states.push_back(s);
  std::stringstream ss;
  write_trajectory_csv(ss, std::span(&t, 1));
  CHECK(ss.str() == "run_id,iter,x_mm,y_mm,w,p_drawn\n0,0,1.5,-2,0,\n0,1,1.5,-2,0.5,0.125\n");
}

TEST_CASE("config defaults, round trip and strictness") {
  const RunConfig d;
  CHECK(d.presets.size() == 3);
  CHECK(d.bins == 90);
  CHECK(d.saturation == 220);
  const RunConfig back = config_from_json(nlohmann::json::parse(to_json(d).dump()));
  CHECK(to_json(back) == to_json(d));
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"simulation": {"mu": 0.9, "muu": 1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"stats": {"bins": "many"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"simulation": {"propulsion": "up"}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"modes": {"beta_mode": {"parity": "both"}}})")),
                  ConfigError);
  const RunConfig partial = config_from_json(nlohmann::json::parse(R"({"simulation": {"seed": 7}})"));
  CHECK(partial.sim.seed == 7);
  CHECK(partial.sim.mu == d.sim.mu);
}

TEST_CASE("committed default config parses") {
  const char* src = std::getenv("MIRAGE_SOURCE_DIR");
  REQUIRE(src);
  const RunConfig c = load_config(fs::path(src) / "config" / "default.json");
  CHECK(c.presets.size() == 3);
  CHECK(c.presets[1].alpha == 0.05);
  CHECK(c.presets[2].beta == 0.1);
}

TEST_CASE("modes command") {
  const fs::path dir = scratch("modes");
  const fs::path cfg = small_config(dir);
  const auto r = sh("modes --config " + cfg.string() + " --grid 64 --out " + (dir / "out").string());
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("odd_1_5 q = ") != std::string::npos);
  CHECK(r.out.find("even_4_4 q = ") != std::string::npos);
  const std::string csv = slurp(dir / "out/modes/even_4_4.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 64 * 64 + 3);
  CHECK(fs::exists(dir / "out/modes/odd_1_5.pgm"));
  const auto meta = nlohmann::json::parse(slurp(dir / "out/modes/metadata.json"));
  CHECK(meta["modes"][0]["label"] == "odd_1_5");
  CHECK(meta.contains("version"));

  const std::string first = slurp(dir / "out/modes/odd_1_5.csv");
  REQUIRE(sh("modes --config " + cfg.string() + " --grid 64 --out " + (dir / "out").string()).code == 0);
  CHECK(slurp(dir / "out/modes/odd_1_5.csv") == first);
}

TEST_CASE("simulate is reproducible and writes metadata") {
  const fs::path dir = scratch("simulate");
  const fs::path cfg = small_config(dir);
  const std::string base = "simulate --config " + cfg.string() + " --seed 42 --out ";
  auto r = sh(base + (dir / "a").string());
  REQUIRE_MESSAGE(r.code == 0, r.out);
  r = sh(base + (dir / "b").string());
  REQUIRE_MESSAGE(r.code == 0, r.out);
  for (const char* preset : {"uniform_depth", "focus_impurity"})
    for (const char* file : {"trajectory.csv", "positions.csv", "positions.pgm", "displacement.csv",
                             "displacement.pgm", "field_snapshot.csv"}) {
      const fs::path rel = fs::path("simulate") / preset / file;
      CHECK_MESSAGE(slurp(dir / "a" / rel) == slurp(dir / "b" / rel), rel);
    }
  const auto meta = nlohmann::json::parse(slurp(dir / "a/simulate/uniform_depth/metadata.json"));
  CHECK(meta["seed"] == 42);
  CHECK(meta["generator"].get<std::string>().find("mt19937_64") != std::string::npos);
  CHECK(meta["config"]["simulation"]["max_total_iters"] == 3000);
  CHECK(meta["result"]["states"] == 3000);
  // metadata differs only in the echoed output directory
  auto other = nlohmann::json::parse(slurp(dir / "b/simulate/uniform_depth/metadata.json"));
  other["config"]["output"]["dir"] = meta["config"]["output"]["dir"];
  CHECK(other == meta);

  r = sh("simulate --config " + cfg.string() + " --seed 43 --out " + (dir / "c").string());
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "c/simulate/uniform_depth/trajectory.csv") !=
        slurp(dir / "a/simulate/uniform_depth/trajectory.csv"));
}

TEST_CASE("simulate with explicit weights and the anti-gradient variant") {
  const fs::path dir = scratch("weights");
  const fs::path cfg = small_config(dir);
  const auto r = sh("simulate --config " + cfg.string() + " --weights 0.5 0.1 --propulsion anti_gradient --out " +
                    (dir / "out").string());
  REQUIRE_MESSAGE(r.code == 0, r.out);
  const auto meta = nlohmann::json::parse(slurp(dir / "out/simulate/weights_0.5_0.1/metadata.json"));
  CHECK(meta["config"]["simulation"]["propulsion"] == "anti_gradient");
  CHECK(meta["result"]["beta"] == 0.1);
}

TEST_CASE("avgfield writes analytic and Monte Carlo fields") {
  const fs::path dir = scratch("avgfield");
  const fs::path cfg = small_config(dir);
  const auto r = sh("avgfield --config " + cfg.string() + " --mc 1000 --out " + (dir / "out").string());
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("max deviation") != std::string::npos);
  CHECK(fs::exists(dir / "out/avgfield/focus_impurity/mc.csv"));
  const auto meta = nlohmann::json::parse(slurp(dir / "out/avgfield/focus_impurity/metadata.json"));
  CHECK(meta["max_abs_deviation"].get<double>() < 0.1);

  const auto bad = sh("avgfield --config " + cfg.string() + " --weights 0 0 --out " + (dir / "out").string());
  CHECK(bad.code != 0);
  CHECK(bad.out.find("alpha = beta = 0") != std::string::npos);
}

TEST_CASE("render") {
  const fs::path dir = scratch("render");
  write_grid_csv(dir / "counts.csv", sample_counts());
  auto r = sh("render " + (dir / "counts.csv").string());
  REQUIRE_MESSAGE(r.code == 0, r.out);
  const std::string first = slurp(dir / "counts.pgm");
  CHECK(first.rfind("P5\n3 2\n255\n", 0) == 0);
  // top row is the largest y
  CHECK(pgm_pixels(first) == std::string("\x00\x01\xfe\xff\xff\x80", 6));
  REQUIRE(sh("render " + (dir / "counts.csv").string()).code == 0);
  CHECK(slurp(dir / "counts.pgm") == first);
  CHECK(fs::exists(dir / "counts.pgm.txt"));

  HistogramGrid zero(4, 4, Bounds{0, 1, 0, 1}, GridKind::field);
  write_grid_csv(dir / "zero.csv", zero);
  r = sh("render " + (dir / "zero.csv").string() + " -o " + (dir / "zero_out.pgm").string());
  REQUIRE(r.code == 0);
  CHECK(pgm_pixels(slurp(dir / "zero_out.pgm")) == std::string(16, '\0'));
}

TEST_CASE("errors give nonzero exit codes") {
  const fs::path dir = scratch("errors");
  std::ofstream(dir / "bad.csv") << "# mirage-grid v1\n# kind=counts nx=1 ny=2 xmin=0 xmax=1 ymin=0 ymax=1\n"
                                    "x,y,value\n0.5,0.25,1\n0.5,0.75,oops\n";
  auto r = sh("render " + (dir / "bad.csv").string());
  CHECK(r.code == 3);
  CHECK(r.out.find("line 5") != std::string::npos);

  std::ofstream(dir / "typo.json") << R"({"simulation": {"sed": 4}})";
  r = sh("simulate --config " + (dir / "typo.json").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("unknown key 'sed'") != std::string::npos);

  CHECK(sh("simulate --propulsion sideways --out " + dir.string()).code == 2);
  CHECK(sh("frobnicate").code != 0);
}
