#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "htlab/dynamics.hpp"
#include "htlab/error.hpp"
#include "htlab/json_io.hpp"
#include "htlab/perm.hpp"
#include "htlab/pl.hpp"
#include "htlab/random.hpp"
#include "htlab/suspension.hpp"

namespace htlab::cli {

namespace {

using io::json;

struct Result {
  json data;
  std::string text;  // replaces the generic rendering when set
};

using Action = std::function<Result()>;

// Inline JSON when the argument starts with '{' or '[', a file path otherwise.
json load(const std::string& arg) {
  std::string text = arg;
  if (arg.empty() || (arg.front() != '{' && arg.front() != '[')) {
    std::ifstream in(arg);
    if (!in) throw SchemaError(arg, "cannot read file");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(arg, std::string("invalid JSON: ") + e.what());
  }
}

template <class T>
T load_as(const std::string& arg) {
  return io::from_json<T>(load(arg));
}

std::vector<cantor::EvPeriodicPoint> point_list(int d, const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of points");
  std::vector<cantor::EvPeriodicPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(io::from_json<cantor::EvPeriodicPoint>(json{{"d", d}, {"point", j[i]}},
                                                         path + "[" + std::to_string(i) + "]"));
  return out;
}

cantor::ClopenSet cell_set(int d, const json& j, const std::string& path) {
  return io::from_json<cantor::ClopenSet>(json{{"d", d}, {"cells", j}}, path);
}

int arity_of(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer()) throw SchemaError("$.d", "missing arity");
  return j["d"].get<int>();
}

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("$.") + key, "missing field");
  return j[key];
}

std::pair<Rational, Rational> rational_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [lo, hi]");
  return {io::from_json<Rational>(j[0], path + "[0]"), io::from_json<Rational>(j[1], path + "[1]")};
}

Rational parse_arg(const std::string& s, const std::string& name) {
  try {
    return parse_rational(s);
  } catch (const DomainError& e) {
    throw SchemaError(name, e.what());
  }
}

void render(const json& j, std::ostream& out, int indent);

bool scalar(const json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar_text(const json& j) {
  // Empty words would otherwise vanish from the text form.
  if (j.is_string()) return j.get<std::string>().empty() ? "\"\"" : j.get<std::string>();
  return j.dump();
}

void render_value(const std::string& label, const json& v, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (scalar(v)) {
    out << pad << label << " " << scalar_text(v) << "\n";
  } else if (v.is_array() && std::all_of(v.begin(), v.end(), scalar)) {
    out << pad << label << " [";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
    out << "]\n";
  } else {
    out << pad << label << "\n";
    render(v, out, indent + 2);
  }
}

void render(const json& j, std::ostream& out, int indent) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_value(k + ":", v, out, indent);
  } else if (j.is_array()) {
    for (const auto& v : j) render_value("-", v, out, indent);
  } else {
    out << std::string(static_cast<std::size_t>(indent), ' ') << scalar_text(j) << "\n";
  }
}

json cycle_strings(const std::vector<perm::Perm>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.str());
  return a;
}

std::vector<perm::Perm> perm_list(const json& spec) {
  const long n = need(spec, "n").get<long>();
  const json& els = need(spec, "elements");
  if (!els.is_array()) throw SchemaError("$.elements", "expected an array");
  std::vector<perm::Perm> out;
  for (std::size_t i = 0; i < els.size(); ++i) {
    json one = els[i].is_string() ? json{{"n", n}, {"cycles", els[i]}} : json{{"n", n}, {"images", els[i]}};
    out.push_back(io::from_json<perm::Perm>(one, "$.elements[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string fixbound_table(const std::vector<perm::FixboundRow>& rows, int n) {
  std::ostringstream os;
  os << "fixed-point bound audit over subgroup classes of S_" << n << "\n";
  os << std::setw(4) << "id" << std::setw(8) << "order" << std::setw(7) << "fixed" << std::setw(10) << "min |P|"
     << std::setw(12) << "singletons" << std::setw(10) << "pairs" << "  bound\n";
  std::size_t violations = 0;
  for (const auto& r : rows) {
    const std::string min = r.smallest ? std::to_string(r.smallest->size()) : "-";
    os << std::setw(4) << r.id << std::setw(8) << r.order << std::setw(7) << r.fixed << std::setw(10) << min
       << std::setw(12) << r.confining_singletons << std::setw(10) << r.confining_pairs << "  "
       << (r.violation ? "VIOLATED" : "ok") << "\n";
    violations += r.violation;
  }
  os << "classes: " << rows.size() << ", violations: " << violations << "\n";
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computational toolkit for Higman-Thompson groups, permutation audits, PL maps and suspension flows",
               "htlab"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  std::uint64_t seed = 1;
  app.add_flag("--json", as_json, "Emit the result as JSON");
  app.add_option("--seed", seed, "Seed for randomized commands")->capture_default_str();

  Action action;
  std::vector<std::string> files;
  std::string file_a, file_b;

  auto* vd = app.add_subcommand("vd", "Elements of V_d")->require_subcommand(1)->fallthrough();
  auto* vd_compose = vd->add_subcommand("compose", "Compose elements, first argument outermost");
  vd_compose->add_option("elements", files, "Element JSON (file or inline)")->required()->expected(2, 64);
  vd_compose->callback([&] {
    action = [&] {
      auto g = load_as<vd::PrefixMap>(files.front());
      for (std::size_t i = 1; i < files.size(); ++i) g = vd::compose(g, load_as<vd::PrefixMap>(files[i]));
      return Result{io::to_json(g), {}};
    };
  });

  long max_power = 64;
  auto* vd_brin = vd->add_subcommand("brin", "Brin decomposition into periodic and hyperbolic parts");
  vd_brin->add_option("element", file_a)->required();
  vd_brin->add_option("--max-power", max_power)->capture_default_str();
  vd_brin->callback([&] {
    action = [&] {
      vd::BrinOptions opts;
      opts.max_power = max_power;
      return Result{io::to_json(vd::brin_decomposition(load_as<vd::PrefixMap>(file_a), opts)), {}};
    };
  });

  auto* vd_orbit = vd->add_subcommand("orbit", "Decide whether two points are cofinal");
  vd_orbit->add_option("x", file_a)->required();
  vd_orbit->add_option("y", file_b)->required();
  vd_orbit->callback([&] {
    action = [&] {
      auto x = load_as<cantor::EvPeriodicPoint>(file_a);
      auto y = load_as<cantor::EvPeriodicPoint>(file_b);
      auto r = vd::same_orbit(x, y);
      json j{{"x", x.str()}, {"y", y.str()}, {"same_orbit", r.has_value()}};
      if (r) j["shifts"] = {r->first, r->second};
      return Result{j, {}};
    };
  });

  auto* vd_witness = vd->add_subcommand("witness", "Element carrying source points to target points");
  vd_witness->add_option("spec", file_a, "{d, sources, targets}")->required();
  vd_witness->callback([&] {
    action = [&] {
      json spec = load(file_a);
      const int d = arity_of(spec);
      auto src = point_list(d, need(spec, "sources"), "$.sources");
      auto dst = point_list(d, need(spec, "targets"), "$.targets");
      auto g = vd::transitivity_witness(src, dst);
      json images = json::array();
      for (const auto& x : src) images.push_back(vd::evaluate(g, x).str());
      return Result{{{"element", io::to_json(g)}, {"images", images}}, {}};
    };
  });

  auto* vd_compress = vd->add_subcommand("compress", "Element moving a proper clopen set or points into U");
  vd_compress->add_option("spec", file_a, "{d, target | target_points, u}")->required();
  vd_compress->callback([&] {
    action = [&] {
      json spec = load(file_a);
      const int d = arity_of(spec);
      auto u = cell_set(d, need(spec, "u"), "$.u");
      json j;
      if (spec.contains("target_points")) {
        auto pts = point_list(d, spec["target_points"], "$.target_points");
        auto g = vd::compress(pts, u);
        json images = json::array();
        for (const auto& x : pts) images.push_back(vd::evaluate(g, x).str());
        j = {{"element", io::to_json(g)}, {"images", images}};
      } else {
        auto c = cell_set(d, need(spec, "target"), "$.target");
        auto g = vd::compress(c, u);
        j = {{"element", io::to_json(g)}, {"image", io::to_json(vd::evaluate(g, c))}};
      }
      return Result{j, {}};
    };
  });

  auto* vd_germs = vd->add_subcommand("germs", "Element matching the germs of g at the given points");
  vd_germs->add_option("element", file_a)->required();
  vd_germs->add_option("points", file_b, "{d, points}")->required();
  vd_germs->callback([&] {
    action = [&] {
      auto g = load_as<vd::PrefixMap>(file_a);
      json spec = load(file_b);
      auto pts = point_list(arity_of(spec), need(spec, "points"), "$.points");
      auto h = vd::match_germs(g, pts);
      return Result{{{"element", io::to_json(h)}}, {}};
    };
  });

  int rand_d = 2;
  std::size_t rand_cells = 8;
  auto* vd_random = vd->add_subcommand("random", "Random element (seeded)");
  vd_random->add_option("--d", rand_d)->capture_default_str();
  vd_random->add_option("--cells", rand_cells)->capture_default_str();
  vd_random->callback([&] {
    action = [&] {
      cantor::check_arity(rand_d);
      if (rand_cells < 1) throw DomainError("need at least one cell");
      random::Rng rng(seed);
      return Result{io::to_json(random::random_element(rng, rand_d, rand_cells)), {}};
    };
  });

  auto* pm = app.add_subcommand("perm", "Finite permutation group audits")->require_subcommand(1)->fallthrough();
  int max_size = 2;
  auto* p_conf = pm->add_subcommand("confining", "Search a confining set P for H in G");
  p_conf->add_option("H", file_a)->required();
  p_conf->add_option("G", file_b)->required();
  p_conf->add_option("--max-size", max_size)->capture_default_str();
  p_conf->callback([&] {
    action = [&] {
      auto H = load_as<perm::PermGroup>(file_a);
      auto G = load_as<perm::PermGroup>(file_b);
      auto P = perm::find_confining(H, G, max_size);
      json j{{"found", P.has_value()}};
      j["P"] = P ? cycle_strings(*P) : json(nullptr);
      return Result{j, {}};
    };
  });

  auto* p_blocks = pm->add_subcommand("blocks", "Orbits and minimal block systems");
  p_blocks->add_option("H", file_a)->required();
  p_blocks->callback([&] {
    action = [&] {
      auto H = load_as<perm::PermGroup>(file_a);
      auto prof = perm::orbit_profile(H);
      json j = io::to_json(perm::block_systems(H));
      j["order"] = H.order();
      j["fixed_points"] = prof.fixed_points;
      j["orbits"] = prof.orbits;
      return Result{j, {}};
    };
  });

  auto* p_disp = pm->add_subcommand("displacement", "Find and check a displacement configuration");
  p_disp->add_option("spec", file_a, "{n, elements}")->required();
  p_disp->callback([&] {
    action = [&] {
      auto P = perm_list(load(file_a));
      auto cfg = perm::find_displacement_config(P);
      if (!cfg) throw DomainError("no displacement configuration found");
      return Result{{{"config", io::to_json(*cfg)}, {"check", io::to_json(perm::check_displacement_config(P, *cfg))}},
                    {}};
    };
  });

  int degree = 5;
  auto* p_audit = pm->add_subcommand("audit-fixbound", "Compare |fix(H)| with |P| - 1 over subgroup classes");
  p_audit->add_option("--degree", degree)->capture_default_str();
  p_audit->callback([&] {
    action = [&] {
      auto rows = perm::audit_fixbound(degree);
      json table = json::array();
      std::size_t violations = 0;
      for (const auto& r : rows) {
        table.push_back(io::to_json(r));
        violations += r.violation;
      }
      return Result{{{"degree", degree}, {"classes", rows.size()}, {"violations", violations}, {"rows", table}},
                    fixbound_table(rows, degree)};
    };
  });

  auto* plc = app.add_subcommand("pl", "Piecewise-linear homeomorphisms")->require_subcommand(1)->fallthrough();
  auto* pl_compose = plc->add_subcommand("compose", "f after g");
  pl_compose->add_option("f", file_a)->required();
  pl_compose->add_option("g", file_b)->required();
  pl_compose->callback([&] {
    action = [&] {
      return Result{io::to_json(pl::pl_compose(load_as<pl::PLMap>(file_a), load_as<pl::PLMap>(file_b))), {}};
    };
  });

  auto* pl_support = plc->add_subcommand("support", "Support components and breakpoints");
  pl_support->add_option("f", file_a)->required();
  pl_support->callback([&] {
    action = [&] {
      auto f = load_as<pl::PLMap>(file_a);
      json comps = json::array(), bps = json::array();
      for (const auto& c : pl::support_components(f)) comps.push_back(io::to_json(c));
      for (const auto& b : f.breakpoints()) bps.push_back(to_string(b));
      return Result{{{"components", comps}, {"breakpoints", bps}, {"dyadic", pl::is_dyadic(f)}}, {}};
    };
  });

  auto* pl_mixed = plc->add_subcommand("mixed-identity", "Construct h with w(h) moving t_1 forward");
  pl_mixed->add_option("spec", file_a, "{exponents, maps, window}")->required();
  pl_mixed->callback([&] {
    action = [&] {
      json spec = load(file_a);
      const json& ex = need(spec, "exponents");
      const json& maps = need(spec, "maps");
      if (!ex.is_array()) throw SchemaError("$.exponents", "expected an array");
      if (!maps.is_array()) throw SchemaError("$.maps", "expected an array");
      std::vector<long> exps;
      for (std::size_t i = 0; i < ex.size(); ++i) {
        if (!ex[i].is_number_integer()) throw SchemaError("$.exponents[" + std::to_string(i) + "]", "expected an integer");
        exps.push_back(ex[i].get<long>());
      }
      std::vector<pl::PLMap> gs;
      for (std::size_t i = 0; i < maps.size(); ++i)
        gs.push_back(io::from_json<pl::PLMap>(maps[i], "$.maps[" + std::to_string(i) + "]"));
      auto [lo, hi] = rational_pair(need(spec, "window"), "$.window");
      return Result{io::to_json(pl::mixed_identity_witness(exps, gs, lo, hi)), {}};
    };
  });

  std::string lo_arg = "0", hi_arg = "1";
  auto* pl_cross = plc->add_subcommand("crossings", "Sign profile of f(t) - t");
  pl_cross->add_option("f", file_a)->required();
  pl_cross->add_option("--lo", lo_arg)->capture_default_str();
  pl_cross->add_option("--hi", hi_arg)->capture_default_str();
  pl_cross->callback([&] {
    action = [&] {
      auto f = load_as<pl::PLMap>(file_a);
      json prof = json::array();
      for (const auto& s : pl::crossing_profile(f, parse_arg(lo_arg, "--lo"), parse_arg(hi_arg, "--hi")))
        prof.push_back(io::to_json(s));
      return Result{{{"profile", prof}}, {}};
    };
  });

  auto* fl = app.add_subcommand("flow", "Stone systems and suspension flows")->require_subcommand(1)->fallthrough();
  std::string cell = "";
  long position = 0;
  long bound = flow::kDefaultReturnBound;
  auto add_cell = [&](CLI::App* s) {
    s->add_option("system", file_a, "System JSON, e.g. {\"a\":\"ab\",\"b\":\"a\"}")->required();
    s->add_option("--cell", cell, "Cylinder word")->required();
    s->add_option("--position", position)->capture_default_str();
    s->add_option("--bound", bound)->capture_default_str();
  };
  auto* f_ret = fl->add_subcommand("return-times", "Smallest return time and first-return times");
  add_cell(f_ret);
  f_ret->callback([&] {
    action = [&] {
      auto X = load_as<flow::StoneSystem>(file_a);
      const flow::CylinderX C{cell, position};
      std::set<long> times;
      for (const auto& rc : flow::first_return_partition(X, C, bound)) times.insert(rc.time);
      json j{{"cell", io::to_json(C)},
             {"tau", flow::smallest_return_time(X, C, bound)},
             {"times", std::vector<long>(times.begin(), times.end())},
             {"minimal", X.minimal()},
             {"warnings", X.warnings()}};
      return Result{j, {}};
    };
  });

  auto* f_first = fl->add_subcommand("first-return", "Partition of a cylinder by first-return time");
  add_cell(f_first);
  f_first->callback([&] {
    action = [&] {
      auto X = load_as<flow::StoneSystem>(file_a);
      json cells = json::array();
      for (const auto& rc : flow::first_return_partition(X, {cell, position}, bound)) cells.push_back(io::to_json(rc));
      return Result{{{"cells", cells}}, {}};
    };
  });

  std::string a_arg = "-1/4", b_arg = "1/4";
  auto* f_dec = fl->add_subcommand("decompose", "Charts filling the complement of C x [a, b]");
  add_cell(f_dec);
  f_dec->add_option("--a", a_arg)->capture_default_str();
  f_dec->add_option("--b", b_arg)->capture_default_str();
  f_dec->callback([&] {
    action = [&] {
      auto X = load_as<flow::StoneSystem>(file_a);
      json charts = json::array();
      for (const auto& rc : flow::chart_decomposition(X, {cell, position}, parse_arg(a_arg, "--a"),
                                                      parse_arg(b_arg, "--b"), bound))
        charts.push_back(io::to_json(rc));
      return Result{{{"charts", charts}}, {}};
    };
  });

  auto* f_leaf = fl->add_subcommand("leaf-signs", "Oriented chart traversals along a leaf");
  f_leaf->add_option("spec", file_a, "{system, involution, point?, cell?, t?, interval, window, depth?}")->required();
  f_leaf->callback([&] {
    action = [&] {
      json spec = load(file_a);
      auto X = io::from_json<flow::StoneSystem>(need(spec, "system"), "$.system");
      auto inv = io::from_json<flow::InvolutionSpec>(need(spec, "involution"), "$.involution");
      const long depth = spec.contains("depth") ? spec["depth"].get<long>() : 16;
      auto S = flow::build_dinfty(X, inv, depth);
      auto x = spec.contains("point") ? io::from_json<flow::PointSpec>(spec["point"], "$.point") : flow::find_fixed_point(X);
      auto [lo, hi] = rational_pair(need(spec, "interval"), "$.interval");
      auto [wlo, whi] = rational_pair(need(spec, "window"), "$.window");
      flow::CylinderX C;
      if (spec.contains("cell")) {
        C = io::from_json<flow::CylinderX>(spec["cell"], "$.cell");
      } else {
        const Rational t = spec.contains("t") ? io::from_json<Rational>(spec["t"], "$.t") : (lo + hi) / 2;
        C = flow::admissible_chart_around(S, x, t, lo, hi);
      }
      json crossings = json::array();
      std::string signs;
      for (const auto& c : flow::leaf_itinerary(S, x, wlo, whi, C, lo, hi)) {
        crossings.push_back(io::to_json(c));
        signs += c.sign > 0 ? '+' : '-';
      }
      return Result{{{"cell", io::to_json(C)},
                     {"point", io::to_json(x)},
                     {"signs", signs},
                     {"crossings", crossings},
                     {"certificate", io::to_json(S.certificate())}},
                    {}};
    };
  });

  auto* f_eval = fl->add_subcommand("eval", "Apply a flow element to a point of the suspension");
  f_eval->add_option("spec", file_a, "{system, element, point}")->required();
  f_eval->callback([&] {
    action = [&] {
      json spec = load(file_a);
      auto X = io::from_json<flow::StoneSystem>(need(spec, "system"), "$.system");
      auto g = io::from_json<flow::FlowElement>(need(spec, "element"), "$.element");
      auto p = io::from_json<flow::FlowPoint>(need(spec, "point"), "$.point");
      auto v = flow::validate_flow(X, g);
      json j{{"validation", io::to_json(v)}, {"dyadic", flow::is_dyadic(g)}};
      if (!v.ok) throw DomainError("invalid flow element: " + v.issues.front().message);
      j["result"] = io::to_json(flow::flow_eval(X, g, p));
      return Result{j, {}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  if (!action) {
    err << "no command given\n";
    return 2;
  }
  try {
    Result r = action();
    if (as_json)
      out << r.data.dump(2) << "\n";
    else if (!r.text.empty())
      out << r.text;
    else
      render(r.data, out, 0);
    return 0;
  } catch (const SchemaError& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace htlab::cli
