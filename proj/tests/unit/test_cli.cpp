#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

#ifndef WFX_BIN
#error "WFX_BIN must point at the wfx executable"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(WFX_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("wfx_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string ones(std::size_t n) {
  std::string s = "{\"values\":[";
  for (std::size_t i = 0; i < n; ++i) s += i ? ",1" : "1";
  return s + "]}";
}

}  // namespace

TEST_CASE("A_p of the constant weight") {
  Scratch s;
  const auto w = s.write("ones.json", ones(64));
  const auto r = run("ap --weight " + w + " --basis intervals --p 2");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("value").get<double>() == 1.0);
  CHECK(j.at("schema") == "wfx/1");
}

TEST_CASE("usage errors exit 3 without output files") {
  Scratch s;
  const auto w = s.write("ones.json", ones(16));
  const auto rep = s.path("report.json");
  CHECK(run("ap --weight " + w + " --p 2 --no-such-flag --report " + rep).code == 3);
  CHECK_FALSE(fs::exists(rep));
  CHECK(run("frobnicate").code == 3);
  CHECK(run("ap --p 2").code == 3);

  const auto bad = s.write("bad.json", "{\"values\":\n  [1, 2,, 3]}");
  const auto b = run("ap --weight " + bad + " --p 2 --report " + rep);
  CHECK(b.code == 3);
  CHECK_FALSE(fs::exists(rep));
  for (const auto& e : fs::directory_iterator(s.dir)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("malformed JSON is reported with line and column") {
  Scratch s;
  const auto bad = s.write("bad.json", "{\"values\":\n  [1, 2,, 3]}");
  const std::string cmd = std::string(WFX_BIN) + " ap --weight " + bad + " --p 2 2>&1 >/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string err;
  char buf[1024];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) err.append(buf, got);
  pclose(p);
  CHECK(err.find("bad.json:2:") != std::string::npos);
}

TEST_CASE("reports are written whole and are reproducible") {
  Scratch s;
  s.write("sp.json", "{\"family\":\"lp\",\"p\":2,\"space\":{\"n\":[64]}}");
  const auto a = s.path("a.json"), b = s.path("b.json");
  const std::string args = "extrapolate --family identity --mode bfs --p0 2 --inputs 3 --space " + s.path("sp.json");
  const auto r1 = run(args + " --report " + a);
  const auto r2 = run(args + " --report " + b);
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto j = json::parse(slurp(a));
  CHECK(j.at("schema") == "wfx/1");
  CHECK(j.at("verdict") == "PASS");
}

TEST_CASE("suite subset") {
  const auto r = run("suite --preset paper-core --only 10");
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("schema") == "wfx/1");
}
