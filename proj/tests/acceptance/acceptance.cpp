#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "htlab/dynamics.hpp"
#include "htlab/error.hpp"
#include "htlab/perm.hpp"
#include "htlab/pl.hpp"
#include "htlab/random.hpp"
#include "htlab/suspension.hpp"
#include "oracles/brin_audit.hpp"
#include "oracles/charts.hpp"
#include "oracles/fibonacci.hpp"
#include "oracles/golden.hpp"
#include "oracles/perms.hpp"
#include "oracles/pl_eval.hpp"
#include "oracles/pl_gen.hpp"
#include "oracles/random_values.hpp"

using namespace htlab;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned limits.
constexpr double kAlgebraSeconds = 5.0;
constexpr double kBrinSeconds = 60.0;
constexpr double kFixboundSeconds = 300.0;
constexpr std::size_t kBrinSampleDepth = 15;
constexpr std::size_t kBrinNeighbourhood = 10;
constexpr std::size_t kBrinSteps = 50;
constexpr long kLeafRadius = 40;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Tally {
  std::size_t ok = 0, total = 0;
  std::string first_failure;
  void operator()(bool pass, const std::string& what) {
    ++total;
    if (pass)
      ++ok;
    else if (first_failure.empty())
      first_failure = what;
  }
  Outcome outcome(const std::string& unit) const {
    std::string d = std::to_string(ok) + "/" + std::to_string(total) + " " + unit;
    if (!first_failure.empty())
      d += "; first failure: " + first_failure;
    return {ok == total && total > 0, d};
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

Outcome with_deadline(Outcome o, Clock::time_point t0, double limit) {
  const double s = seconds_since(t0);
  o.detail += ", " + fmt_seconds(s) + " (limit " + fmt_seconds(limit) + ")";
  o.pass = o.pass && s < limit;
  return o;
}

Outcome group_algebra(random::Rng& rng) {
  const auto t0 = Clock::now();
  Tally t;
  for (int d : {2, 3}) {
    for (int i = 0; i < 500; ++i) {
      auto g = random::random_element(rng, d, 8);
      t(vd::compose(g, vd::invert(g)).is_identity(), "g g^-1 for d=" + std::to_string(d));
    }
    for (int i = 0; i < 200; ++i) {
      auto a = random::random_element(rng, d, 8), b = random::random_element(rng, d, 8),
           c = random::random_element(rng, d, 8);
      t(vd::compose(vd::compose(a, b), c) == vd::compose(a, vd::compose(b, c)), "associativity");
    }
  }
  return with_deadline(t.outcome("identities"), t0, kAlgebraSeconds);
}

Outcome brin_audit(random::Rng& rng) {
  const auto t0 = Clock::now();
  Tally t;
  oracle::BrinAuditParams prm;
  prm.samples = 30;
  prm.sample_depth = kBrinSampleDepth;
  prm.neighbourhood = kBrinNeighbourhood;
  prm.steps = kBrinSteps;
  for (int i = 0; i < 200; ++i) {
    auto g = random::random_generator_word(rng, 5);
    try {
      auto b = vd::brin_decomposition(g);
      const std::string why = oracle::audit_brin(g, b, rng, prm);
      t(why.empty(), why);
    } catch (const Error& e) {
      t(false, e.what());
    }
  }
  return with_deadline(t.outcome("elements"), t0, kBrinSeconds);
}

Outcome transitivity(random::Rng& rng) {
  Tally t;
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 2;
    const std::size_t k = random::uniform(rng, 1, 4);
    const auto period = random::random_word(rng, d, random::uniform(rng, 1, 3));
    std::vector<cantor::EvPeriodicPoint> src, dst;
    auto fresh = [&](std::vector<cantor::EvPeriodicPoint>& v) {
      for (;;) {
        // Rotating the period keeps every point in one cofinality class.
        const auto r = random::uniform(rng, 0, period.size() - 1);
        cantor::EvPeriodicPoint p(random::random_word(rng, d, random::uniform(rng, 0, 6)) + period.drop(r),
                                  period.drop(r) + period.prefix(r));
        if (std::find(v.begin(), v.end(), p) == v.end())
          return v.push_back(p);
      }
    };
    for (std::size_t j = 0; j < k; ++j) {
      fresh(src);
      fresh(dst);
    }
    try {
      auto g = vd::transitivity_witness(src, dst);
      bool ok = true;
      for (std::size_t j = 0; j < k; ++j)
        ok = ok && vd::evaluate(g, src[j]) == dst[j];
      t(ok, "image mismatch");
    } catch (const Error& e) {
      t(false, e.what());
    }
  }
  return t.outcome("tuples");
}

Outcome compression(random::Rng& rng) {
  Tally t;
  while (t.total < 200) {
    const int d = 2 + static_cast<int>(random::uniform(rng, 0, 1));
    auto c = random::random_clopen(rng, d, 5, 4), u = random::random_clopen(rng, d, 4, 4);
    if (c.is_full() || u.empty())
      continue;
    try {
      auto g = vd::compress(c, u);
      t(cantor::is_subset(vd::evaluate(g, c), u), "image not inside U");
    } catch (const Error& e) {
      t(false, e.what());
    }
  }
  return t.outcome("pairs");
}

Outcome germ_pairs(random::Rng& rng) {
  Tally t;
  while (t.total < 100) {
    const int d = 2 + static_cast<int>(random::uniform(rng, 0, 1));
    auto g = random::random_element(rng, d, 8);
    auto x = random::random_point(rng, d), y = random::random_point(rng, d);
    if (x == y)
      continue;
    try {
      auto h = vd::match_germs(g, {x, y});
      auto fix = vd::fixed_interior(vd::compose(g, vd::invert(h)));
      t(vd::germ_equal(g, h, x) && vd::germ_equal(g, h, y) && cantor::contains_point(fix, vd::evaluate(h, x)) &&
            cantor::contains_point(fix, vd::evaluate(h, y)),
        "germ mismatch at " + x.str() + " or " + y.str());
    } catch (const Error& e) {
      t(false, e.what());
    }
  }
  return t.outcome("triples");
}

Outcome fixbound(random::Rng&) {
  const auto t0 = Clock::now();
  const auto rows = perm::audit_fixbound(5);
  std::size_t violations = 0, confining = 0;
  for (const auto& r : rows) {
    violations += r.violation;
    confining += r.confining_singletons + r.confining_pairs;
  }
  Outcome o{violations == 0 && rows.size() == 19,
            std::to_string(rows.size()) + " classes, " + std::to_string(confining) + " confining sets, " +
                std::to_string(violations) + " violations"};
  return with_deadline(o, t0, kFixboundSeconds);
}

Outcome displacement(random::Rng&) {
  const auto all = oracle::all_perms(9);
  std::atomic<std::size_t> good{0}, bad{0}, involutions{0}, rejected{0};
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < all.size(); i += workers) {
        const perm::Perm s = perm::Perm::from_images(all[i]);
        if (s.is_identity())
          continue;
        if ((s * s).is_identity()) {
          ++involutions;
          bool thrown = false;
          try {
            (void)perm::find_displacement_config({s});
          } catch (const DomainError&) {
            thrown = true;
          }
          const auto chk = perm::check_displacement_config({s}, {{{s.support().front()}}});
          if (thrown && !chk.ok && chk.condition == 3)
            ++rejected;
          continue;
        }
        const auto cfg = perm::find_displacement_config({s});
        if (cfg && perm::check_displacement_config({s}, *cfg).ok)
          ++good;
        else
          ++bad;
      }
    });
  for (auto& th : pool)
    th.join();
  return {bad == 0 && rejected == involutions,
          std::to_string(good.load()) + " configurations validated, " + std::to_string(bad.load()) + " failures, " +
              std::to_string(rejected.load()) + "/" + std::to_string(involutions.load()) + " involutions rejected"};
}

Outcome fibonacci(random::Rng&) {
  const auto X = flow::StoneSystem::substitution(oracle::fibonacci_rules());
  const std::string text = oracle::fixed_prefix(oracle::fibonacci_rules(), 'a', 20000);
  Tally t;
  for (std::size_t n = 1; n <= 20; ++n) {
    const auto& w = X.legal_words(n);
    t(std::set<std::string>(w.begin(), w.end()) == oracle::factors(text, n), "legal words of length " + std::to_string(n));
  }
  const auto ga = oracle::gaps(text, "a"), gb = oracle::gaps(text, "b");
  t(flow::smallest_return_time(X, {"a", 0}) == 1 && *ga.begin() == 1, "tau_[a]");
  t(flow::smallest_return_time(X, {"b", 0}) == 2 && *gb.begin() == 2, "tau_[b]");
  // First return from each extension of a, read off the oracle text.
  std::vector<flow::ReturnCell> expect;
  for (const auto& ext : oracle::factors(text, 2)) {
    if (ext[0] != 'a')
      continue;
    std::set<long> times;
    for (std::size_t i = 0; i + 2 <= text.size() - 10; ++i)
      if (text.compare(i, 2, ext) == 0)
        times.insert(static_cast<long>(text.find('a', i + 1) - i));
    t(times.size() == 1, "return time constant on [" + ext + "]");
    expect.push_back({{ext, 0}, *times.begin()});
  }
  t(flow::first_return_partition(X, {"a", 0}) == expect, "first-return partition of [a]");
  std::set<long> lib;
  for (const auto& c : flow::first_return_partition(X, {"b", 0}))
    lib.insert(c.time);
  t(lib == gb && gb == std::set<long>{2, 3}, "b-gap set");
  return t.outcome("checks");
}

Outcome charts(random::Rng& rng) {
  const auto X = flow::StoneSystem::substitution(oracle::fibonacci_rules());
  const std::string text = oracle::fixed_prefix(oracle::fibonacci_rules(), 'a', 20000);
  const flow::CylinderX C{"a", 0};
  const Rational a(-1, 4), b(1, 4);
  const auto out = flow::chart_decomposition(X, C, a, b);
  const std::vector<std::pair<Rational, Rational>> literal{{Rational(1, 4), Rational(5, 4)},
                                                           {Rational(1, 4), Rational(9, 4)}};
  std::vector<std::pair<Rational, Rational>> got;
  std::string listed;
  for (const auto& rc : out) {
    got.emplace_back(rc.chart.span.lo, rc.chart.span.hi);
    listed += (listed.empty() ? "" : ", ") + rc.chart.cell.word + " " + rc.chart.span.str();
  }
  const bool intervals = got == literal;

  std::vector<oracle::Box> boxes{{C.word, a, b, true, true}};
  for (const auto& rc : out)
    boxes.push_back({rc.chart.cell.word, rc.chart.span.lo, rc.chart.span.hi, false, false});
  Tally t;
  for (int i = 0; i < 100; ++i) {
    const std::size_t start = random::uniform(rng, 0, text.size() - 100);
    const flow::Window w{static_cast<long>(random::uniform(rng, 0, 50)) - 25, text.substr(start, 48)};
    const auto r = flow::certify_leaf_segment(w, C, a, b, out);
    bool sampled = true;
    for (int k = 0; k < 20 && r.ok; ++k) {
      const Rational s(static_cast<long>(16 * (w.first + 12) + random::uniform(rng, 0, 16 * 24)), 16);
      sampled = sampled && oracle::cover_count(w.letters, w.first, boxes, s) == 1;
    }
    t(r.ok && sampled, r.ok ? "sampled cover count" : r.detail);
  }
  auto cover = t.outcome("leaf segments tiled");
  return {intervals && cover.pass, "charts " + listed + " (expected (1/4, 5/4), (1/4, 9/4)); " + cover.detail};
}

Outcome mixed_identity(random::Rng& rng) {
  Tally t;
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = random::uniform(rng, 1, 3);
    std::vector<long> n;
    std::vector<pl::PLMap> gs;
    for (std::size_t j = 0; j < k; ++j) {
      const long e = static_cast<long>(random::uniform(rng, 1, 2));
      n.push_back(random::uniform(rng, 0, 1) ? e : -e);
      const long lo = -40 + static_cast<long>(random::uniform(rng, 0, 1));
      gs.push_back(oracle::sawtooth(rng, lo, 40));
    }
    try {
      const auto r = pl::mixed_identity_witness(n, gs, Rational(-40), Rational(40));
      // Independent evaluation through the vertex graphs.
      const auto hv = r.h.vertices();
      oracle::Graph hinv;
      for (const auto& [x, y] : hv)
        hinv.emplace_back(y, x);
      Rational v = r.t.front();
      for (std::size_t j = 0; j < k; ++j) {
        v = oracle::interpolate(gs[j].vertices(), true, v);
        for (long m = 0; m < std::abs(n[j]); ++m)
          v = oracle::interpolate(n[j] > 0 ? hv : hinv, true, v);
      }
      t(r.certified && v == r.value && v != r.t.front(), "w(h)(t_1) = " + to_string(v));
    } catch (const Error& e) {
      t(false, e.what());
    }
  }
  return t.outcome("words");
}

Outcome leaf_orientation(random::Rng&) {
  const auto S = flow::build_dinfty(
      flow::StoneSystem::substitution({{'a', "ab"}, {'b', "AB"}, {'A', "BA"}, {'B', "ba"}}),
      flow::InvolutionSpec{{{'a', 'A'}, {'A', 'a'}, {'b', 'B'}, {'B', 'b'}}});
  const auto x = flow::find_fixed_point(S.base());
  const Rational lo(-3, 4), hi(3, 4);
  const auto C = flow::admissible_chart_around(S, x, 0, lo, hi);
  const auto f = pl::PLMap::on_interval({{lo, lo}, {Rational(0), Rational(3, 8)}, {hi, hi}});
  const flow::ChartElement g{C, f};
  const auto crossings = flow::leaf_itinerary(S, x, -kLeafRadius, kLeafRadius, C, lo, hi);
  const auto act = flow::leaf_action(S, x, g, -kLeafRadius, kLeafRadius);
  bool plus = false, minus = false;
  for (const auto& s : pl::crossing_profile(act, -kLeafRadius, kLeafRadius)) {
    plus = plus || s.sign > 0;
    minus = minus || s.sign < 0;
  }
  std::size_t reflected = 0;
  bool reversed = true;
  for (const auto& c : crossings) {
    if (c.sign > 0)
      continue;
    ++reflected;
    reversed = reversed && c.to_leaf(lo) == c.span.hi && c.to_leaf(hi) == c.span.lo;
    for (int k = 1; k < 16; ++k) {
      const Rational u = lo + (hi - lo) * Rational(k, 16);
      reversed = reversed && act(c.to_leaf(u)) == c.to_leaf(f(u));
    }
  }
  return {plus && minus && reflected > 0 && reversed && S.certificate().free,
          "chart [" + C.word + "] at " + std::to_string(C.position) + ", " + std::to_string(crossings.size()) +
              " traversals (" + std::to_string(reflected) + " reflected), profile signs " + (plus ? "+" : "") +
              (minus ? "-" : "") + (reversed ? ", endpoints reversed" : ", endpoint mismatch")};
}

Outcome serialization(random::Rng& rng) {
  Tally t;
  oracle::RandomValues r{rng};
  for (int i = 0; i < 500; ++i) {
    t(oracle::round_trips(r.rational()), "Rational");
    t(oracle::round_trips(r.clopen()), "ClopenSet");
    t(oracle::round_trips(r.point()), "EvPeriodicPoint");
    t(oracle::round_trips(r.element()), "PrefixMap");
    t(oracle::round_trips(r.perm()), "Perm");
    t(oracle::round_trips(r.group()), "PermGroup");
    t(oracle::round_trips(r.plmap()), "PLMap");
    t(oracle::round_trips(r.system()), "StoneSystem");
    t(oracle::round_trips(r.cylinder()), "CylinderX");
    t(oracle::round_trips(r.segment()), "Segment");
    t(oracle::round_trips(r.involution()), "InvolutionSpec");
    t(oracle::round_trips(r.point_spec()), "PointSpec");
    t(oracle::round_trips(r.flow()), "FlowElement");
    t(oracle::round_trips(r.flow_point()), "FlowPoint");
    t(oracle::round_trips(r.chart_element()), "ChartElement");
  }
  const std::filesystem::path dir = HTLAB_GOLDEN_DIR;
  const auto cases = oracle::golden_cases(dir);
  for (const auto& c : cases) {
    const auto once = oracle::run_golden(c, dir);
    t(once == oracle::run_golden(c, dir) && once == oracle::slurp(c.expected), "golden " + c.name);
  }
  return t.outcome("round trips and golden outputs");
}

struct Criterion {
  const char* title;
  std::function<Outcome(random::Rng&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"group algebra", group_algebra},
      {"Brin audit", brin_audit},
      {"high-transitivity witnesses", transitivity},
      {"compression witnesses", compression},
      {"germ-pair covering", germ_pairs},
      {"fixed-point bound over S_5", fixbound},
      {"displacement configurations over S_9", displacement},
      {"Fibonacci return times", fibonacci},
      {"chart decomposition", charts},
      {"mixed-identity witnesses", mixed_identity},
      {"leaf itinerary orientation", leaf_orientation},
      {"serialization", serialization},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite: one PASS/FAIL line per criterion", "htlab_acceptance"};
  std::vector<int> selected;
  std::uint64_t seed = 1;
  app.add_option("--criterion", selected, "Run only these criteria (1-12)")->check(CLI::Range(1, 12));
  app.add_option("--seed", seed, "Seed for the randomized criteria")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 12; ++i)
      selected.push_back(i);

  bool all = true;
  for (int n : selected) {
    const auto& c = criteria()[static_cast<std::size_t>(n - 1)];
    random::Rng rng(seed * 1000003u + static_cast<std::uint64_t>(n));
    Outcome o;
    try {
      o = c.run(rng);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << "  (" << o.detail
              << ")" << std::endl;
  }
  return all ? 0 : 1;
}
