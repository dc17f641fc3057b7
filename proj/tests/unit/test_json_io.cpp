#include <doctest.h>

#include "htlab/error.hpp"
#include "htlab/json_io.hpp"
#include "oracles/random_values.hpp"

using namespace htlab;
using io::json;

TEST_CASE("canonical element form") {
  auto id = vd::PrefixMap::identity(2);
  CHECK(io::from_json<vd::PrefixMap>(io::to_json(id)) == id);
  auto swap = vd::PrefixMap::make(2, {{"0", "1"}, {"1", "0"}});
  CHECK(io::to_json(swap).dump() == R"({"d":2,"pairs":[["0","1"],["1","0"]]})");
  CHECK(io::from_json<vd::PrefixMap>(json::parse(R"({"d":2,"pairs":[["00","10"],["01","11"],["1","0"]]})")) ==
        swap);
}

TEST_CASE("schema errors name the offending field") {
  auto path_of = [](const char* text) {
    try {
      io::from_json<vd::PrefixMap>(json::parse(text));
    } catch (const SchemaError& e) {
      return e.path();
    }
    return std::string("no error");
  };
  CHECK(path_of(R"({"d":2,"pairs":[["0","1"],["1"]]})") == "$.pairs[1]");
  CHECK(path_of(R"({"d":2,"pairs":[["0","1"],["1",0]]})") == "$.pairs[1][1]");
  CHECK(path_of(R"({"pairs":[]})") == "$.d");
  CHECK(path_of(R"({"d":2,"pairs":[["0","1"],["2","0"]]})") == "$.pairs[1][0]");
  CHECK_THROWS_AS(io::from_json<vd::PrefixMap>(json::parse(R"({"d":2,"pairs":[["0","1"],["0","0"]]})")), Error);
}

TEST_CASE("documented forms") {
  auto f = io::from_json<pl::PLMap>(
      json::parse(R"({"domain":["0","1"],"pieces":[["0","1/2","0"],["1/2","1","-1/4"],["3/4","2","-1"]]})"));
  CHECK(f(parse_rational("5/8")) == parse_rational("3/8"));
  CHECK(io::to_json(f).dump() ==
        R"({"domain":["0","1"],"pieces":[["0","1/2","0"],["1/2","1","-1/4"],["3/4","2","-1"]]})");
  auto t = io::from_json<pl::PLMap>(json::parse(R"({"domain":"line","pieces":[[null,"1","3/2"]]})"));
  CHECK(t(0) == parse_rational("3/2"));
  auto v = io::from_json<pl::PLMap>(json::parse(R"({"kind":"interval","vertices":[["0","0"],["1/2","1/4"],["1","1"]]})"));
  CHECK(v(parse_rational("1/2")) == parse_rational("1/4"));
  CHECK_THROWS_AS(io::from_json<pl::PLMap>(json::parse(R"({"domain":["0","1"],"pieces":[["0","-1","1"]]})")),
                  htlab::Error);

  auto X = io::from_json<flow::StoneSystem>(json::parse(R"({"a":"ab","b":"a"})"));
  CHECK(X.minimal());
  auto p = io::from_json<cantor::EvPeriodicPoint>(json::parse(R"j({"d":2,"point":"1(0)"})j"));
  CHECK(p.str() == "1(0)");
  auto g = io::from_json<perm::PermGroup>(json::parse(R"j({"n":4,"generators":["(0 1 2 3)",[1,0,2,3]]})j"));
  CHECK(g.order() == 24);
  auto c = io::from_json<cantor::ClopenSet>(json::parse(R"({"d":2,"cells":["00","01"]})"));
  CHECK(io::to_json(c).dump() == R"({"cells":["0"],"d":2})");
}

TEST_CASE("round trips of random values") {
  random::Rng rng(101);
  oracle::RandomValues r{rng};
  for (int i = 0; i < 500; ++i) {
    CHECK(oracle::round_trips(r.rational()));
    CHECK(oracle::round_trips(r.clopen()));
    CHECK(oracle::round_trips(r.point()));
    CHECK(oracle::round_trips(r.element()));
    CHECK(oracle::round_trips(r.perm()));
    CHECK(oracle::round_trips(r.group()));
    CHECK(oracle::round_trips(r.plmap()));
    CHECK(oracle::round_trips(r.system()));
    CHECK(oracle::round_trips(r.cylinder()));
    CHECK(oracle::round_trips(r.segment()));
    CHECK(oracle::round_trips(r.involution()));
    CHECK(oracle::round_trips(r.point_spec()));
    CHECK(oracle::round_trips(r.flow()));
    CHECK(oracle::round_trips(r.flow_point()));
    CHECK(oracle::round_trips(r.chart_element()));
  }
}
