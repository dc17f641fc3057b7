#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "htlab/json_io.hpp"
#include "oracles/golden.hpp"

namespace {

struct Output {
  int code;
  std::string out, err;
};

Output run(std::vector<std::string> args) {
  args.insert(args.begin(), "htlab");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = htlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kA = R"({"d":2,"pairs":[["0","00"],["10","01"],["11","1"]]})";

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"vd", "compose", "{\"d\":2"}).code == 2);
  CHECK(run({"vd", "compose", R"({"d":2,"pairs":[["0","1"],["1"]]})", kA}).code == 2);
  CHECK(run({"vd", "witness", R"j({"d":2,"sources":["(0)"],"targets":["(1)"]})j"}).code == 1);
  CHECK(run({"vd", "compose", kA, kA}).code == 0);
  CHECK(run({"vd", "compose", "/nonexistent/file.json", kA}).code == 2);
}

TEST_CASE("brin report through the CLI") {
  auto r = run({"--json", "vd", "brin", kA});
  REQUIRE(r.code == 0);
  auto j = htlab::io::json::parse(r.out);
  CHECK(j["att"] == htlab::io::json::array({"(0)"}));
  CHECK(j["rep"] == htlab::io::json::array({"(1)"}));
}

TEST_CASE("golden outputs are byte-identical") {
  const std::filesystem::path dir = HTLAB_GOLDEN_DIR;
  const bool update = std::getenv("HTLAB_UPDATE_GOLDEN") != nullptr;
  const auto cases = oracle::golden_cases(dir);
  CHECK(cases.size() >= 15);
  for (const auto& c : cases) {
    INFO(c.name);
    const std::string got = oracle::run_golden(c, dir);
    CHECK(got == oracle::run_golden(c, dir));
    if (update) {
      std::ofstream(c.expected, std::ios::binary) << got;
      continue;
    }
    REQUIRE(std::filesystem::exists(c.expected));
    CHECK(got == oracle::slurp(c.expected));
  }
}
