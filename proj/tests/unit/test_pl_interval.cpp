#include <doctest.h>

#include "htlab/error.hpp"
#include "htlab/pl.hpp"
#include "htlab/random.hpp"
#include "oracles/pl_eval.hpp"
#include "oracles/pl_gen.hpp"

using namespace htlab;
using namespace htlab::pl;

namespace {

Rational q(const char* s) { return parse_rational(s); }

PLMap interval(std::initializer_list<std::pair<const char*, const char*>> v) {
  std::vector<Vertex> out;
  for (const auto& [x, y] : v)
    out.emplace_back(q(x), q(y));
  return PLMap::on_interval(out);
}

PLMap line(std::initializer_list<std::pair<const char*, const char*>> v) {
  std::vector<Vertex> out;
  for (const auto& [x, y] : v)
    out.emplace_back(q(x), q(y));
  return PLMap::on_line(out);
}

const PLMap f_ = interval({{"0", "0"}, {"1/2", "1/4"}, {"3/4", "1/2"}, {"1", "1"}});

Interval open(const char* lo, const char* hi) { return {q(lo), q(hi)}; }

Rational naive(const PLMap& f, const Rational& x) { return oracle::interpolate(f.vertices(), f.on_line(), x); }

}  // namespace

TEST_CASE("rationals") {
  CHECK(to_string(q("6/8")) == "3/4");
  CHECK(to_string(q("-2")) == "-2");
  CHECK_THROWS_AS(q("0.375"), DomainError);
  CHECK_THROWS_AS(q("1/0"), DomainError);
  CHECK(is_dyadic(q("3/8")));
  CHECK_FALSE(is_dyadic(q("1/3")));
  CHECK(is_power_of_two(q("1/4")));
  CHECK_FALSE(is_power_of_two(q("3")));
}

TEST_CASE("standard map pieces") {
  auto pieces = f_.pieces();
  REQUIRE(pieces.size() == 3);
  CHECK(pieces[0].slope == q("1/2"));
  CHECK(pieces[1].offset == q("-1/4"));
  CHECK(pieces[2].slope == 2);
  CHECK(pieces[2].offset == -1);
  CHECK(f_(q("5/8")) == q("3/8"));
  CHECK_THROWS_AS(interval({{"0", "0"}, {"1/2", "1/2"}, {"1/4", "1"}}), DomainError);
  CHECK_THROWS_AS(interval({{"0", "0"}, {"1/2", "1/2"}, {"1", "1/4"}}), DomainError);
}

TEST_CASE("composition") {
  CHECK(pl_compose(f_, inverse(f_)).is_identity());
  auto ff = pl_compose(f_, f_);
  CHECK(ff.breakpoints() == std::vector<Rational>{q("1/2"), q("3/4"), q("7/8")});
  for (int i = 0; i <= 10; ++i) {
    Rational x(i, 10);
    CHECK(ff(x) == f_(f_(x)));
  }
  CHECK_THROWS_AS(pl_compose(f_, PLMap::identity(q("0"), q("2"))), DomainError);
  auto collinear = interval({{"0", "0"}, {"1/2", "1/2"}, {"1", "1"}});
  CHECK(collinear.vertices().size() == 2);
}

TEST_CASE("support components") {
  CHECK(support_components(PLMap::identity(q("0"), q("1"))).empty());
  CHECK(support_components(f_) == std::vector<Interval>{open("0", "1")});
  auto bumps = interval({{"0", "0"},
                         {"1/4", "1/4"},
                         {"5/16", "11/32"},
                         {"3/8", "3/8"},
                         {"1/2", "1/2"},
                         {"9/16", "19/32"},
                         {"5/8", "5/8"},
                         {"1", "1"}});
  CHECK(support_components(bumps) == std::vector<Interval>{open("1/4", "3/8"), open("1/2", "5/8")});
  CHECK(support_components(PLMap::translation(q("1"))) == std::vector<Interval>{Interval{}});
}

TEST_CASE("dyadicity") {
  CHECK(is_dyadic(f_));
  CHECK_FALSE(is_dyadic(interval({{"0", "0"}, {"1/4", "3/4"}, {"1", "1"}})));
  CHECK_FALSE(is_dyadic(interval({{"0", "0"}, {"1/3", "1/6"}, {"1", "1"}})));
}

TEST_CASE("disjoint conjugates") {
  auto h = interval({{"0", "0"}, {"1/4", "1/4"}, {"3/8", "7/16"}, {"1/2", "1/2"}, {"1", "1"}});
  auto w = disjoint_conjugate_witness({h}, inverse(f_));
  CHECK(w.ok);
  REQUIRE(w.conjugates.size() == 1);
  CHECK(support_components(w.conjugates[0]) == std::vector<Interval>{open("1/2", "3/4")});
  CHECK(disjoint_conjugate_witness({PLMap::identity(q("0"), q("1"))}, f_).ok);
  auto weak = disjoint_conjugate_witness({h}, interval({{"0", "0"}, {"1/4", "3/8"}, {"1", "1"}}));
  CHECK_FALSE(weak.ok);
  CHECK(weak.blocking.has_value());
  CHECK_THROWS_AS(disjoint_conjugate_witness({}, f_), DomainError);
}

TEST_CASE("mixed identity witnesses") {
  random::Rng rng(61);
  auto g = oracle::sawtooth(rng, -20, 20);
  auto one = mixed_identity_witness({1}, {g}, q("-20"), q("20"));
  CHECK(one.h.is_identity());
  CHECK(one.certified);
  auto two = mixed_identity_witness({1, 1}, {g, g}, q("-20"), q("20"));
  CHECK(two.certified);
  CHECK(evaluate_word({1, 1}, {g, g}, two.h, two.t[0]) >= two.t[1]);
  CHECK(two.t[1] > two.t[0]);
  CHECK_THROWS_AS(mixed_identity_witness({1, 1}, {g, PLMap::identity_line()}, q("-20"), q("20")), DomainError);
}

TEST_CASE("crossing profiles") {
  auto t1 = crossing_profile(PLMap::translation(q("1")), q("-10"), q("10"));
  REQUIRE(t1.size() == 1);
  CHECK(t1[0].sign == 1);
  auto id = crossing_profile(PLMap::identity_line(), q("-10"), q("10"));
  REQUIRE(id.size() == 1);
  CHECK(id[0].sign == 0);
  auto alt = line({{"0", "0"}, {"1/2", "3/4"}, {"1", "1"}, {"3/2", "5/4"}, {"2", "2"}});
  auto p = crossing_profile(alt, q("0"), q("2"));
  std::vector<int> signs;
  for (const auto& s : p)
    signs.push_back(s.sign);
  CHECK(signs == std::vector<int>{0, 1, 0, -1, 0});
}

TEST_CASE("composition is exact against pointwise evaluation") {
  random::Rng rng(67);
  for (int i = 0; i < 100; ++i) {
    auto f = oracle::random_interval_map(rng, q("0"), q("1"), 5, i % 2);
    auto g = oracle::random_interval_map(rng, q("0"), q("1"), 5, i % 2);
    auto fg = pl_compose(f, g);
    Rational x(static_cast<long>(random::uniform(rng, 0, 997)), 997);
    CHECK(fg(x) == naive(f, naive(g, x)));
    CHECK(f(x) == naive(f, x));
    auto lf = oracle::random_line_map(rng, q("-3"), q("3"), 4), lg = oracle::random_line_map(rng, q("-2"), q("4"), 4);
    Rational y = oracle::random_rational(rng, 50, 13, false);
    CHECK(pl_compose(lf, lg)(y) == naive(lf, naive(lg, y)));
    CHECK(inverse(lf)(lf(y)) == y);
  }
}

TEST_CASE("support of a conjugate is the image of the support") {
  random::Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    auto g = oracle::random_interval_map(rng, q("0"), q("1"), 4, false);
    auto h = oracle::random_interval_map(rng, q("0"), q("1"), 4, false);
    std::vector<Interval> expect;
    for (const auto& c : support_components(h))
      expect.push_back({g(*c.lo), g(*c.hi)});
    CHECK(support_components(conjugate(g, h)) == expect);
  }
}

TEST_CASE("dyadic maps are closed under composition and inversion") {
  random::Rng rng(73);
  for (int i = 0; i < 200; ++i) {
    auto f = oracle::thompson_word(rng, 5);
    auto g = oracle::thompson_word(rng, 5);
    REQUIRE(is_dyadic(f));
    CHECK(is_dyadic(pl_compose(f, g)));
    CHECK(is_dyadic(inverse(f)));
  }
}

TEST_CASE("disjoint conjugates commute") {
  random::Rng rng(79);
  int hits = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<PLMap> hs;
    for (int j = 0; j < 2; ++j) {
      auto local = oracle::random_interval_map(rng, q("1/8"), q("3/8"), 3, true);
      auto v = local.vertices();
      v.insert(v.begin(), {q("0"), q("0")});
      v.emplace_back(q("1"), q("1"));
      hs.push_back(PLMap::on_interval(v));
    }
    auto g = oracle::random_interval_map(rng, q("0"), q("1"), 3, true);
    auto w = disjoint_conjugate_witness(hs, g);
    if (!w.ok)
      continue;
    ++hits;
    for (const auto& c : w.conjugates)
      for (const auto& h : hs)
        CHECK(commute(c, h));
  }
  CHECK(hits > 10);
}

TEST_CASE("mixed identity reports certify") {
  random::Rng rng(83);
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = random::uniform(rng, 1, 3);
    std::vector<long> n;
    std::vector<PLMap> gs;
    for (std::size_t j = 0; j < k; ++j) {
      long e = static_cast<long>(random::uniform(rng, 1, 2));
      n.push_back(random::uniform(rng, 0, 1) ? e : -e);
      gs.push_back(oracle::sawtooth(rng, -30, 30));
    }
    auto r = mixed_identity_witness(n, gs, q("-30"), q("30"));
    CHECK(r.certified);
    CHECK(evaluate_word(n, gs, r.h, r.t.front()) > r.t.front());
  }
}
