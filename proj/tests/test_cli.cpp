#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "radium/cli.hpp"
#include "radium/results.hpp"

namespace fs = std::filesystem;
using radium::cli::run;

namespace {

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "radium_lab_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("variance and bounds print closed-form values") {
  const auto v = invoke({"variance", "--k", "2"});
  CHECK(v.code == 0);
  CHECK(std::abs(std::stod(v.out) - 0.2732) < 1e-4);

  const auto b = invoke({"bounds", "--q", "0.3", "--t-star", "600", "--k", "2"});
  CHECK(b.code == 0);
  CHECK(std::abs(std::stod(b.out) - 0.2169) < 1e-4);
}

TEST_CASE("daa-sim writes 30 rows and a manifest sidecar") {
  const fs::path out = scratch("daa.csv");
  const auto r = invoke({"daa-sim", "--protocol", "radium", "--k", "2", "--trials", "1000",
                         "--blocks", "30", "--window", "2", "--seed", "7", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(line_count(r.out) == 1);
  const std::string csv = slurp(out);
  CHECK(first_line(csv) == "block_index,p5,median,p95");
  CHECK(line_count(csv) == 31);

  const auto manifest = nlohmann::json::parse(slurp(radium::manifest_path(out)));
  CHECK(manifest["subcommand"] == "daa-sim");
  CHECK(manifest["config"]["seed"] == 7);
  CHECK(manifest["config"]["window"] == 2);
  CHECK(manifest["format"] == "csv");
  CHECK(manifest["tool_version"] == radium::kToolVersion);
  CHECK(manifest.contains("timestamp"));

  SUBCASE("replaying the manifest reproduces the file byte for byte") {
    const fs::path again = scratch("daa_replay.csv");
    const auto rr = invoke({"replay", radium::manifest_path(out).string(), "--out", again.string()});
    REQUIRE(rr.code == 0);
    CHECK(slurp(again) == csv);
  }
}

TEST_CASE("CSV schemas") {
  const auto fm = invoke({"future-mine", "--q", "0.3", "--t-star", "300,600", "--trials", "50"});
  REQUIRE(fm.code == 0);
  CHECK(first_line(fm.out) == "q,t_star,trials,successes,success_rate,bound");
  CHECK(line_count(fm.out) == 3);

  const auto ds = invoke({"doublespend", "--q", "0.1,0.2", "--z", "1,2", "--trials", "50"});
  REQUIRE(ds.code == 0);
  CHECK(first_line(ds.out) == "protocol,q,z,trials,successes,success_rate");
  CHECK(line_count(ds.out) == 1 + 2 * 2 * 2);

  const auto sw = invoke({"switch-mine", "--k", "2", "--x", "1,10", "--trials", "100"});
  REQUIRE(sw.code == 0);
  CHECK(first_line(sw.out) == "k,x,trials,reward_per_second,baseline");

  const auto orphan = invoke({"orphan", "--blocks", "5000"});
  REQUIRE(orphan.code == 0);
  CHECK(first_line(orphan.out) == "protocol,k,blocks,orphans,orphan_rate");

  const auto df = invoke({"defacto", "--tau", "600", "--trials", "100", "--preemptor", "0"});
  REQUIRE(df.code == 0);
  CHECK(first_line(df.out).rfind("tau,miner,hash_fraction", 0) == 0);
}

TEST_CASE("numbers use six significant digits") {
  CHECK(radium::format_number(0.216849314) == "0.216849");
  CHECK(radium::format_number(1797.4414) == "1797.44");
  CHECK(radium::format_number(600.0) == "600");
}

TEST_CASE("JSON output mirrors the CSV fields") {
  const fs::path out = scratch("sw.json");
  const auto r = invoke({"switch-mine", "--k", "2", "--x", "2", "--trials", "100", "--format",
                         "json", "--out", out.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["columns"] == nlohmann::json({"k", "x", "trials", "reward_per_second", "baseline"}));
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["x"] == 2.0);
  CHECK(j["rows"][0]["trials"] == 100);
}

TEST_CASE("argument errors exit 2, runtime errors exit 1") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({"daa-sim", "--trials", "0"}).code == 2);
  CHECK(invoke({"daa-sim", "--protocol", "ethereum"}).code == 2);
  CHECK(invoke({"bounds", "--q", "1.5"}).code == 2);
  CHECK(invoke({"future-mine", "--q", "0.3,-0.1"}).code == 2);
  CHECK(invoke({"future-mine", "--k", "0.5"}).code == 2);
  CHECK(invoke({"defacto", "--miners", "0.5,0.4"}).code == 2);
  CHECK(invoke({"switch-mine", "--x", "0.5"}).code == 2);
  const auto bad = invoke({"daa-sim", "--trials", "0"});
  CHECK(bad.err.find("Usage") != std::string::npos);

  const auto io = invoke({"variance", "--out", "/nonexistent-dir/x/y.csv"});
  CHECK(io.code == 1);
  CHECK(io.err.find("error") != std::string::npos);
  CHECK(invoke({"replay", "/nonexistent-manifest.json"}).code == 1);
}

TEST_CASE("output is identical at 1 and 8 threads") {
  for (const std::vector<std::string>& base :
       {std::vector<std::string>{"future-mine", "--q", "0.2,0.4", "--t-star", "300,900",
                                 "--trials", "400", "--seed", "3"},
        std::vector<std::string>{"doublespend", "--q", "0.3", "--z", "1,3", "--trials", "400",
                                 "--seed", "3"},
        std::vector<std::string>{"daa-sim", "--protocol", "bitcoin", "--trials", "300", "--seed",
                                 "3"},
        std::vector<std::string>{"orphan", "--blocks", "30000", "--seed", "3"}}) {
    auto one = base, eight = base;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    const auto a = invoke(one);
    const auto b = invoke(eight);
    REQUIRE(a.code == 0);
    CHECK_MESSAGE(a.out == b.out, base.front());
  }
}

TEST_CASE("RADIUM_LAB_THREADS caps workers") {
  ::setenv("RADIUM_LAB_THREADS", "2", 1);
  const auto capped = invoke({"doublespend", "--q", "0.3", "--z", "2", "--trials", "300"});
  ::unsetenv("RADIUM_LAB_THREADS");
  const auto free = invoke({"doublespend", "--q", "0.3", "--z", "2", "--trials", "300"});
  CHECK(capped.out == free.out);
}
