#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  json report() const { return json::parse(out); }
};

Run run(const std::string& args) {
  Run r;
  const std::string cmd = std::string(GRREG_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path scratch(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / ("grreg_cli_" + std::to_string(getpid()));
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("input errors exit with 1") {
    CHECK(run("analyze /nonexistent/symbol.json").code == 1);
    const fs::path empty = scratch("empty.json", R"({"domain": {"base": "ClosedInterval", "lo": 0, "hi": 1}, "pieces": []})");
    const Run r = run("analyze " + empty.string());
    CHECK(r.code == 1);
    CHECK(r.report()["exit_code"] == 1);
    CHECK(r.report()["error"]["code"] == "InvalidInput");
    CHECK(run("analyze " + scratch("bad.json", "{ not json").string()).code == 1);
    const fs::path syn = scratch("syn.json", R"({"domain": {"base": "ClosedInterval", "lo": 0, "hi": 1},
        "pieces": [{"lo": 0, "hi": 1, "expr": "1+*x"}]})");
    CHECK(run("analyze " + syn.string()).code == 1);
    CHECK(run("no-such-command").code == 1);
    CHECK(run("toeplitz 1 1-z --N 64 --config /nonexistent/cfg.json").code == 1);
  }

  TEST_CASE("mathematical failures exit with 2") {
    const fs::path mis = scratch("mismatch.json", R"({"domain": {"base": "ClosedInterval", "lo": 0, "hi": 1, "punctures": [0]},
        "pieces": [{"lo": 0, "hi": 1, "expr": "1/x"}],
        "declarations": [{"at": 0, "class": "RegB", "limit": 0}]})");
    const Run r = run("analyze " + mis.string());
    CHECK(r.code == 2);
    CHECK(r.report()["error"]["code"] == "DeclarationMismatch");
    const fs::path tri = scratch("triple.json", R"({"a": [[0.5, 0], [0, 0.5]], "a_star": [[0.5, 0], [0, 0.5]],
        "b": [[0.9, 0], [0, 0.5]]})");
    const Run t = run("transform --op inverse --input " + tri.string());
    CHECK(t.code == 2);
    CHECK(t.report()["results"]["axioms"]["valid"] == false);
    CHECK(t.report()["results"]["source"] == "input triple");
  }

  TEST_CASE("an unmet expectation exits with 2") {
    const fs::path e = scratch("expect.json", R"({"domain": {"base": "RealLine", "punctures": [0]},
        "pieces": [{"lo": "-inf", "hi": 0, "expr": "1/x"}, {"lo": 0, "hi": "inf", "expr": "1/x"}],
        "declarations": [{"at": 0, "class": "RegInf"}], "expect": {"regular": true}})");
    CHECK(run("analyze " + e.string()).code == 2);
  }

  TEST_CASE("successful runs") {
    const Run cat = run("analyze " + std::string(GRREG_SOURCE_DIR) + "/catalog/one_over_x.json");
    REQUIRE(cat.code == 0);
    const json j = cat.report();
    CHECK(j["schema"] == "grreg.report/1");
    CHECK(j["exit_code"] == 0);

    const Run z = run("transform --op bounded --zero --n 2");
    REQUIRE(z.code == 0);
    CHECK(z.report()["results"]["norm"] == 0.0);
    CHECK(z.report()["results"]["in_Z"] == true);

    const Run c = run("transform --op calc --n 4 --seed 7");
    REQUIRE(c.code == 0);
    CHECK(c.report()["results"]["residual_vs_a"].get<double>() < 1e-10);
    CHECK(c.report()["seed"] == 7);

    const Run t = run("toeplitz 1 1-z --N 64");
    REQUIRE(t.code == 0);
    CHECK(t.report()["results"]["affiliation"]["verdict"] == "AssociatedOnly");

    const Run w = run("experiment --which weyl --M 256 --limits-M 2048");
    REQUIRE(w.code == 0);
    CHECK(w.out.find("\"xyrel1\"") != std::string::npos);
    const json rel = w.report()["results"];
    bool found = false;
    for (auto it = rel.begin(); it != rel.end(); ++it)
      if (it.value().is_array())
        for (const json& row : it.value())
          if (row.is_object() && row.contains("xyrel1")) {
            CHECK(row["xyrel1"].get<double>() < 1e-12);
            found = true;
          }
    CHECK(found);
  }

  TEST_CASE("json report file mirrors stdout") {
    const fs::path out = scratch("report.json", "");
    const Run r = run("--json " + out.string() + " toeplitz 1 1-z/2 --N 64");
    REQUIRE(r.code == 0);
    std::ifstream in(out);
    const json file = json::parse(in);
    CHECK(file == r.report());
    CHECK(file["results"]["affiliation"]["verdict"] == "Affiliated");
  }
}
