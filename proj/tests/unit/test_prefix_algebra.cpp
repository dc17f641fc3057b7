#include <doctest.h>

#include <map>
#include <set>

#include "htlab/cantor.hpp"
#include "htlab/error.hpp"
#include "htlab/random.hpp"
#include "oracles/words.hpp"

using namespace htlab;
using namespace htlab::cantor;

namespace {

Word W(const char* s, int d = 2) { return Word::parse(d, s); }

ClopenSet S(std::initializer_list<const char*> cells, int d = 2) {
  std::vector<Word> ws;
  for (const char* c : cells)
    ws.push_back(W(c, d));
  return ClopenSet(d, ws);
}

Antichain A(std::initializer_list<const char*> cells, int d = 2) {
  std::vector<Word> ws;
  for (const char* c : cells)
    ws.push_back(W(c, d));
  return Antichain(d, ws);
}

}  // namespace

TEST_CASE("words parse and reject foreign letters") {
  CHECK(W("0110").str() == "0110");
  CHECK(W("").empty());
  CHECK_THROWS_AS(Word::parse(2, "012"), DomainError);
  CHECK_THROWS_AS(Word::parse(1, "0"), DomainError);
  CHECK(W("01").is_prefix_of(W("011")));
  CHECK_FALSE(W("01").is_prefix_of(W("00")));
}

TEST_CASE("clopen algebra") {
  CHECK(set_union(S({"00", "01"}), ClopenSet(2)) == S({"0"}));
  CHECK(set_intersection(S({"0"}), S({"01"})) == S({"01"}));
  CHECK(complement(S({"0"})) == S({"1"}));
  CHECK(complement(ClopenSet::full(2)).empty());
  CHECK(complement(ClopenSet(3)).is_full());
  CHECK(is_subset(S({"01"}), S({"0"})));
  CHECK_FALSE(is_subset(S({"0"}), S({"01"})));
  CHECK_THROWS_AS(set_union(S({"0"}), S({"0"}, 3)), DomainError);
}

TEST_CASE("common refinement") {
  CHECK(common_refinement(A({"0", "1"}), A({"00", "01", "1"})) == A({"00", "01", "1"}));
  CHECK(common_refinement(A({"0", "10", "11"}), A({"00", "01", "1"})) == A({"00", "01", "10", "11"}));
  CHECK(common_refinement(A({"0", "10", "11"}), A({"0", "10", "11"})) == A({"0", "10", "11"}));
  CHECK_THROWS_AS(common_refinement(A({"0"}), A({"0", "1"})), DomainError);
}

TEST_CASE("contains_point") {
  CHECK(contains_point(S({"0"}), EvPeriodicPoint::parse(2, "(0)")));
  CHECK(contains_point(S({"10"}), EvPeriodicPoint::parse(2, "1(0)")));
  CHECK_FALSE(contains_point(S({"11"}), EvPeriodicPoint::parse(2, "1(0)")));
}

TEST_CASE("pad_antichain") {
  CHECK(pad_antichain(A({""}), 3) == A({"0", "10", "11"}));
  CHECK_THROWS_AS(pad_antichain(A({""}, 3), 4), DomainError);
  CHECK(pad_antichain(A({""}, 3), 5) == A({"0", "1", "20", "21", "22"}, 3));
  try {
    pad_antichain(A({""}, 3), 4);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("residue gap 1") != std::string::npos);
  }
}

TEST_CASE("eventually periodic points are canonical") {
  auto p = EvPeriodicPoint(W("0101"), W("0101"));
  CHECK(p.str() == "(01)");
  CHECK(EvPeriodicPoint::parse(2, "1(00)").str() == "1(0)");
  CHECK(EvPeriodicPoint::parse(2, "01(01)").str() == "(01)");
  CHECK(p.shift(1).str() == "(10)");
  CHECK(EvPeriodicPoint::parse(2, "(0)").prepend(W("1")).str() == "1(0)");
  CHECK_THROWS_AS(EvPeriodicPoint::parse(2, "1()"), DomainError);
}

TEST_CASE("canonical form is unique: equal unions canonicalize identically") {
  for (int d : {2, 3}) {
    const std::size_t depth = d == 2 ? 4 : 3;
    random::Rng rng(7 + static_cast<unsigned>(d));
    std::map<std::set<std::string>, std::vector<std::string>> seen;
    for (int trial = 0; trial < 3000; ++trial) {
      ClopenSet c = random::random_clopen(rng, d, 6, depth);
      ClopenSet again(d, c.cells());
      CHECK(again == c);
      auto key = oracle::members(c, depth);
      auto cells = oracle::cell_strings(c);
      auto [it, fresh] = seen.emplace(key, cells);
      if (!fresh)
        CHECK(it->second == cells);
    }
  }
}

TEST_CASE("set operations match depth enumeration") {
  random::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = trial % 2 ? 3 : 2;
    const std::size_t depth = 4;
    ClopenSet a = random::random_clopen(rng, d, 5, depth), b = random::random_clopen(rng, d, 5, depth);
    auto ma = oracle::members(a, depth), mb = oracle::members(b, depth);
    std::set<std::string> u = ma, i, c;
    u.insert(mb.begin(), mb.end());
    for (const auto& w : ma)
      if (mb.count(w))
        i.insert(w);
    for (const auto& w : oracle::all_words(d, depth))
      if (!ma.count(w))
        c.insert(w);
    CHECK(oracle::members(set_union(a, b), depth) == u);
    CHECK(oracle::members(set_intersection(a, b), depth) == i);
    CHECK(oracle::members(complement(a), depth) == c);
    CHECK(complement(complement(a)) == a);
    CHECK(is_subset(a, b) == std::includes(mb.begin(), mb.end(), ma.begin(), ma.end()));
  }
}

TEST_CASE("refinement and padding invariants") {
  random::Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 3;
    auto x = random::random_complete_antichain(rng, d, 1 + (d - 1) * random::uniform(rng, 0, 5));
    auto y = random::random_complete_antichain(rng, d, 1 + (d - 1) * random::uniform(rng, 0, 5));
    Antichain a(d, x), b(d, y);
    CHECK(a.size() % static_cast<std::size_t>(d - 1) == 1 % static_cast<std::size_t>(d - 1));
    Antichain r = common_refinement(a, b), s = common_refinement(b, a);
    CHECK(r == s);
    CHECK(r.is_complete());
    for (const Word& w : r.cells()) {
      int in_a = 0, in_b = 0;
      for (const Word& u : a.cells())
        in_a += u.is_prefix_of(w);
      for (const Word& u : b.cells())
        in_b += u.is_prefix_of(w);
      CHECK(in_a == 1);
      CHECK(in_b == 1);
    }
    const std::size_t target = a.size() + static_cast<std::size_t>(d - 1) * random::uniform(rng, 0, 4);
    Antichain p = pad_antichain(a, target);
    CHECK(p.size() == target);
    CHECK(ClopenSet(d, p.cells()) == ClopenSet(d, a.cells()));
    CHECK(p.is_complete());
  }
}
