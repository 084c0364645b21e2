#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "latgrow/config.hpp"
#include "latgrow/experiment.hpp"
#include "latgrow/io.hpp"
#include "latgrow/raster.hpp"

using namespace latgrow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("latgrow_unit_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("fnv-1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("csv formatting") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(1e-20) == "1e-20");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CsvTable t({"x", "y"});
  t.add_row({"1", "2"});
  CHECK_THROWS(t.add_row({"1"}));
  Provenance prov{"abc", "v0", {{"k", "v"}}};
  CHECK(t.str(&prov) == "# config_hash=abc version=v0 k=v\r\nx,y\r\n1,2\r\n");
  CHECK(t.str() == "x,y\r\n1,2\r\n");
}

TEST_CASE("config validation, defaults and round trip") {
  ExperimentConfig c = parse_config("process = fpphe\np = 0.02\n# comment\nlambda=0.7\n");
  CHECK(c.real("p") == 0.02);
  CHECK(c.integer("window") == 400);
  CHECK(c.text("seed_rule") == "absorb");
  ExperimentConfig again = parse_config(c.emit());
  CHECK(again == c);
  CHECK(again.hash() == c.hash());

  auto with_out = parse_key_values(c.emit());
  with_out["out"] = "elsewhere";
  with_out["threads"] = "4";
  CHECK(validate_config(with_out).hash() == c.hash());
  with_out["seed"] = "2";
  CHECK(validate_config(with_out).hash() != c.hash());
}

TEST_CASE("config rejections") {
  CHECK_THROWS_AS(parse_config("process=fpphe\nlambda=1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=fpphe\nbogus=1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=fpphe\nmu=0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=fpphe\np=0.1\np=0.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=nothing\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("p=0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=fpphe-det\nlambda=0.9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=fpphe-det\nt_max=2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=fpp\nwindow=20\nmargin=20\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("process=schedule\nc_fpp=3\nc_fpp_prime=2\n"), ConfigError);
  CHECK(parse_config("process=fpphe-det\nlambda=9/10\n").rational("lambda") == RationalTime(9, 10));
}

TEST_CASE("raster of an empty grid is background and one site is one pixel") {
  Window w(2, 3);
  SiteGrid g(w);
  RasterOptions opt;
  SnapshotRaster r = rasterize(g, opt);
  CHECK(r.width == 7);
  CHECK(r.height == 7);
  for (std::int64_t j = 0; j < 7; ++j)
    for (std::int64_t i = 0; i < 7; ++i) CHECK(r.pixel(i, j) == kBackground);
  g.occupy(w.index(Coord{1, 2}), SiteLabel::type1, 1.0);
  r = rasterize(g, opt);
  std::size_t painted = 0;
  for (std::int64_t j = 0; j < 7; ++j)
    for (std::int64_t i = 0; i < 7; ++i) painted += r.pixel(i, j) != kBackground;
  CHECK(painted == 1);
  CHECK(r.pixel(1 + 3, 3 - 2) != kBackground);
}

TEST_CASE("epoch colors depend only on the band of the occupation time") {
  Window w(1, 10);
  SiteGrid g(w);
  for (int x = 0; x <= 10; ++x) g.occupy(w.index(Coord{x}), SiteLabel::aggregate, x);
  RasterOptions opt;
  opt.t_ref = 10.0;
  opt.epochs = 5;
  SnapshotRaster r = rasterize(g, opt);
  CHECK(r.height == 1);
  CHECK(r.pixel(10, 0) == r.pixel(11, 0));  // times 0 and 1 share a band
  CHECK(r.pixel(10, 0) != r.pixel(20, 0));
  opt.t = 4.0;
  SnapshotRaster cut = rasterize(g, opt);
  CHECK(cut.pixel(15, 0) == kBackground);
  CHECK(cut.pixel(14, 0) == r.pixel(14, 0));
}

TEST_CASE("type-label raster shows dormant seeds") {
  Window w(2, 2);
  SiteGrid g(w);
  g.occupy(w.origin(), SiteLabel::type1, 0.0);
  g.occupy(w.index(Coord{1, 0}), SiteLabel::type2, 5.0);
  RasterOptions opt;
  opt.style = RasterStyle::type_label;
  opt.t = 1.0;
  opt.seed_mask.assign(static_cast<std::size_t>(w.size()), 0);
  opt.seed_mask[static_cast<std::size_t>(w.index(Coord{1, 0}))] = 1;
  SnapshotRaster r = rasterize(g, opt);
  CHECK(r.pixel(3, 2) != kBackground);
  CHECK(r.pixel(3, 2) != r.pixel(2, 2));
  opt.t = 5.0;
  CHECK(rasterize(g, opt).pixel(3, 2) != r.pixel(3, 2));
}

TEST_CASE("ppm bytes") {
  SnapshotRaster r;
  r.width = 2;
  r.height = 1;
  r.rgb = {1, 2, 3, 4, 5, 6};
  std::string b = ppm_bytes(r, "hello");
  CHECK(b == std::string("P6\n# hello\n2 1 255\n") + std::string("\x01\x02\x03\x04\x05\x06", 6));
}

TEST_CASE("experiments rerun byte-identically and reps=0 writes nothing") {
  fs::path base = scratch("rerun");
  for (const char* tag : {"a", "b"}) {
    auto raw = parse_key_values("process=fpphe\np=0.03\nlambda=0.6\nwindow=40\nreps=3\nseed=9\n");
    raw["out"] = (base / tag).string();
    raw["snapshot_times"] = "5,10";
    std::ostringstream log;
    REQUIRE(run_experiment(validate_config(raw), log) == kExitOk);
  }
  for (const auto& e : fs::directory_iterator(base / "a")) {
    if (e.path().filename() == "config.txt") continue;
    INFO(e.path().filename().string());
    CHECK(slurp(e.path()) == slurp(base / "b" / e.path().filename()));
  }
  auto raw = parse_key_values("process=fpphe\nreps=0\n");
  raw["out"] = (base / "none").string();
  std::ostringstream log;
  CHECK(run_experiment(validate_config(raw), log) == kExitOk);
  CHECK_FALSE(fs::exists(base / "none"));
  fs::remove_all(base);
}

TEST_CASE("unwritable output maps to the IO exit code") {
  fs::path base = scratch("blocked");
  fs::create_directories(base.parent_path());
  { std::ofstream(base.string()) << "file, not a directory"; }
  auto raw = parse_key_values("process=schedule\n");
  raw["out"] = (base / "sub").string();
  std::ostringstream log;
  CHECK(run_experiment(validate_config(raw), log) == kExitIo);
  fs::remove(base);
}

TEST_CASE("presets") {
  CHECK(preset_names().size() == 6);
  auto runs = preset("fig4");
  CHECK(runs.size() == 3);
  for (const auto& r : runs) CHECK(r.config.process() == "fpphe-det");
  auto over = preset("fig6", {{"out", "/tmp/x"}});
  REQUIRE(over.size() == 1);
  CHECK(over[0].config.text("out").rfind("/tmp/x/", 0) == 0);
  CHECK_THROWS_AS(preset("fig9"), ConfigError);
}
