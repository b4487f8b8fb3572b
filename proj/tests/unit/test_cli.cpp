#include "parashear/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = parashear::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("parashear_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("cli usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  const auto missing = run({"cq-verify", "--out", scratch("usage").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("--epsilon") != std::string::npos);
  CHECK(run({"sigma-model", "--epsilon", "0.1", "--model", "cubic", "--out", scratch("model").string()}).code == 2);
  CHECK(run({"chain-basis", "--algebra", "nonsense", "--out", scratch("alg").string()}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli cf and determinism") {
  const auto dir = scratch("cf");
  const auto a = run({"cf", "--alpha", "golden", "--out", dir.string()});
  CHECK(a.code == 0);
  CHECK(a.out == "cf: PASS\n");
  const auto first = slurp(dir / "report.json");
  CHECK(run({"cf", "--alpha", "golden", "--out", dir.string()}).code == 0);
  CHECK(slurp(dir / "report.json") == first);
  const auto doc = json::parse(first);
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("experiment") == "cf");
  CHECK(doc.at("pass") == true);
  CHECK(doc.at("result").at("partial_quotients").size() == 30);

  const auto half = run({"cf", "--alpha", "0.5", "--out", dir.string()});
  CHECK(half.code == 1);
  CHECK(half.out == "cf: FAIL\n");
  CHECK(half.err.find("terminated") != std::string::npos);
  CHECK(run({"cf", "--alpha", "sqrt2", "--C", "1", "--out", dir.string()}).code == 1);
  CHECK(run({"cf", "--alpha", "sqrt2", "--C", "2", "--out", dir.string()}).code == 0);
}

TEST_CASE("cli config file") {
  const auto dir = scratch("config");
  const auto ini = dir / "run.ini";
  std::ofstream(ini) << "[cf]\nalpha = sqrt2\nC = 2\n";
  CHECK(run({"cf", "--config", ini.string(), "--out", dir.string()}).code == 0);
  const auto doc = load(dir / "report.json");
  CHECK(doc.at("result").at("max_quotient") == 2);
  CHECK(doc.at("config").at("file").get<std::string>().find("sqrt2") != std::string::npos);
  CHECK(run({"cf", "--config", ini.string(), "--alpha", "0.5", "--out", dir.string()}).code == 1);
  CHECK(run({"cf", "--config", (dir / "missing.ini").string(), "--out", dir.string()}).code == 2);
}

TEST_CASE("cli lie subcommands") {
  const auto dir = scratch("lie");
  CHECK(run({"gr", "--algebra", "sl3", "--out", dir.string()}).code == 0);
  CHECK(load(dir / "report.json").at("result").at("gr") == 13);
  CHECK(run({"chain-basis", "--algebra", "sl2sl2", "--conjugate", "0.3", "--seed", "4", "--out", dir.string()}).code == 0);
  CHECK(load(dir / "report.json").at("result").at("gr") == 6);

  const auto cq = run({"cq-verify", "--algebra", "sl2sl2", "--epsilon", "0.1", "--L-grid", "5", "--samples", "50",
                       "--out", dir.string()});
  CHECK(cq.code == 0);
  CHECK(first_line(dir / "windows.csv") == "L,p_L,fraction,max_distance");

  const auto none = run({"cq-verify", "--algebra", "sl2", "--epsilon", "0.1", "--out", dir.string()});
  CHECK(none.code == 1);
  CHECK(none.err.find("NoQualifyingChain") != std::string::npos);
}

TEST_CASE("cli witness experiments and replay") {
  const auto dir = scratch("horo");
  const auto h = run({"horo-shear", "--a", "0", "--b", "1e-9", "--c", "-1e-17", "--epsilon", "0.1",
                      "--samples", "50", "--out", dir.string()});
  CHECK(h.code == 0);
  CHECK(first_line(dir / "divergence.csv") == "t,D_raw,D_comp,f");
  CHECK(run({"witness", "--report", (dir / "report.json").string(), "--out", (dir / "replay").string()}).code == 0);

  auto doc = load(dir / "report.json");
  bool tampered = false;
  std::function<void(json&)> walk = [&](json& j) {
    if (j.is_object()) {
      if (j.contains("windows") && !j["windows"].empty() && j.contains("terminal_ok")) {
        j["windows"][0]["fraction"] = 0.0;
        tampered = true;
      }
      for (auto& [k, v] : j.items()) walk(v);
    } else if (j.is_array()) {
      for (auto& v : j) walk(v);
    }
  };
  walk(doc);
  REQUIRE(tampered);
  std::ofstream(dir / "tampered.json") << doc.dump();
  const auto bad = run({"witness", "--report", (dir / "tampered.json").string(), "--out", (dir / "replay").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("disagrees") != std::string::npos);

  const auto sdir = scratch("sigma");
  CHECK(run({"sigma-model", "--a", "0", "--c", "1e-6", "--epsilon", "0.1", "--out", sdir.string()}).code == 0);
  CHECK(first_line(sdir / "windows.csv") == "L,p_L,fraction,max_distance");
  CHECK(run({"sigma-model", "--a", "0", "--c", "0", "--epsilon", "0.1", "--out", sdir.string()}).code == 1);

  const auto hdir = scratch("heis");
  const auto triv = run({"heis-shear", "--roof", "constant:1", "--dy", "1e-3", "--delta", "1e-2", "--epsilon", "0.3",
                         "--out", hdir.string()});
  CHECK(triv.code == 1);
  CHECK(load(hdir / "report.json").at("error").at("type") == "NotFound");
}
