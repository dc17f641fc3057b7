#include "htlab/json_io.hpp"

#include "htlab/error.hpp"

namespace htlab::io {

namespace {

std::string member(const std::string& path, const std::string& key) { return path + "." + key; }
std::string element(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(member(path, key), "missing field");
  return *it;
}

const json* optional_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

long get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<long>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

const json& get_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

char get_letter(const json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  if (s.size() != 1) throw SchemaError(path, "expected a single letter");
  return s[0];
}

template <class F>
auto guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const DomainError& e) {
    throw SchemaError(path, e.what());
  }
}

int get_arity(const json& j, const std::string& path) {
  const std::string p = member(path, "d");
  const long d = get_int(field(j, "d", path), p);
  guarded(p, [&] {
    cantor::check_arity(static_cast<int>(d));
    return 0;
  });
  return static_cast<int>(d);
}

json strings(const std::vector<cantor::Word>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back(w.str());
  return a;
}

json points(const std::vector<cantor::EvPeriodicPoint>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.str());
  return a;
}

json images(const perm::Perm& p) { return p.images(); }

perm::Perm perm_images(const json& j, const std::string& path) {
  get_array(j, path);
  std::vector<int> img;
  for (std::size_t i = 0; i < j.size(); ++i) img.push_back(static_cast<int>(get_int(j[i], element(path, i))));
  return guarded(path, [&] { return perm::Perm::from_images(img); });
}

json sets(const std::vector<std::vector<int>>& s) { return s; }

}  // namespace

json to_json(const Rational& q) { return to_string(q); }

template <>
Rational from_json(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  const std::string s = get_string(j, path);
  return guarded(path, [&] { return parse_rational(s); });
}

json to_json(const cantor::Word& w) { return w.str(); }

cantor::Word word_from_json(int d, const json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  return guarded(path, [&] { return cantor::Word::parse(d, s); });
}

json to_json(const cantor::ClopenSet& c) { return {{"d", c.arity()}, {"cells", strings(c.cells())}}; }

template <>
cantor::ClopenSet from_json(const json& j, const std::string& path) {
  const int d = get_arity(j, path);
  const std::string p = member(path, "cells");
  const json& cells = get_array(field(j, "cells", path), p);
  std::vector<cantor::Word> ws;
  for (std::size_t i = 0; i < cells.size(); ++i) ws.push_back(word_from_json(d, cells[i], element(p, i)));
  return cantor::ClopenSet(d, std::move(ws));
}

json to_json(const cantor::EvPeriodicPoint& p) { return {{"d", p.arity()}, {"point", p.str()}}; }

template <>
cantor::EvPeriodicPoint from_json(const json& j, const std::string& path) {
  const int d = get_arity(j, path);
  const std::string p = member(path, "point");
  const std::string s = get_string(field(j, "point", path), p);
  return guarded(p, [&] { return cantor::EvPeriodicPoint::parse(d, s); });
}

json to_json(const vd::PrefixMap& g) {
  json pairs = json::array();
  for (const auto& pr : g.pairs()) pairs.push_back({pr.domain.str(), pr.range.str()});
  return {{"d", g.arity()}, {"pairs", pairs}};
}

template <>
vd::PrefixMap from_json(const json& j, const std::string& path) {
  const int d = get_arity(j, path);
  const std::string p = member(path, "pairs");
  const json& pairs = get_array(field(j, "pairs", path), p);
  std::vector<vd::Pair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string pi = element(p, i);
    if (!pairs[i].is_array() || pairs[i].size() != 2) throw SchemaError(pi, "expected a [domain, range] pair");
    out.push_back({word_from_json(d, pairs[i][0], element(pi, 0)), word_from_json(d, pairs[i][1], element(pi, 1))});
  }
  return vd::PrefixMap::make(d, std::move(out));
}

json to_json(const perm::Perm& p) { return {{"n", p.degree()}, {"images", images(p)}}; }

template <>
perm::Perm from_json(const json& j, const std::string& path) {
  const long n = get_int(field(j, "n", path), member(path, "n"));
  guarded(member(path, "n"), [&] {
    perm::check_degree(static_cast<int>(n));
    return 0;
  });
  if (const json* c = optional_field(j, "cycles", path)) {
    const std::string p = member(path, "cycles");
    const std::string s = get_string(*c, p);
    return guarded(p, [&] { return perm::Perm::parse(static_cast<int>(n), s); });
  }
  const std::string p = member(path, "images");
  perm::Perm q = perm_images(field(j, "images", path), p);
  if (q.degree() != n) throw SchemaError(p, "length differs from n");
  return q;
}

json to_json(const perm::PermGroup& g) {
  json gens = json::array();
  for (const auto& p : g.generators()) gens.push_back(images(p));
  return {{"n", g.degree()}, {"generators", gens}};
}

template <>
perm::PermGroup from_json(const json& j, const std::string& path) {
  const std::string pn = member(path, "n");
  const long n = get_int(field(j, "n", path), pn);
  guarded(pn, [&] {
    perm::check_degree(static_cast<int>(n));
    return 0;
  });
  const std::string p = member(path, "generators");
  const json& gens = get_array(field(j, "generators", path), p);
  std::vector<perm::Perm> out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string pi = element(p, i);
    perm::Perm q = gens[i].is_string()
                       ? guarded(pi, [&] { return perm::Perm::parse(static_cast<int>(n), gens[i].get<std::string>()); })
                       : perm_images(gens[i], pi);
    if (q.degree() != n) throw SchemaError(pi, "degree differs from n");
    out.push_back(q);
  }
  return perm::PermGroup(static_cast<int>(n), std::move(out));
}

json to_json(const pl::PLMap& f) {
  json ps = json::array();
  for (const pl::Piece& pc : f.pieces())
    ps.push_back({pc.start ? json(to_string(*pc.start)) : json(nullptr), to_string(pc.slope), to_string(pc.offset)});
  json out = {{"domain", f.on_line() ? json("line") : json::array({to_string(f.lo()), to_string(f.hi())})},
              {"pieces", ps}};
  return out;
}

// Also accepts {"kind": "line" | "interval", "vertices": [[x, y], ...]}.
template <>
pl::PLMap from_json(const json& j, const std::string& path) {
  if (optional_field(j, "vertices", path)) {
    const std::string pk = member(path, "kind");
    const std::string kind = get_string(field(j, "kind", path), pk);
    if (kind != "line" && kind != "interval") throw SchemaError(pk, "expected \"line\" or \"interval\"");
    const std::string p = member(path, "vertices");
    const json& vs = get_array(field(j, "vertices", path), p);
    std::vector<pl::Vertex> out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const std::string pi = element(p, i);
      if (!vs[i].is_array() || vs[i].size() != 2) throw SchemaError(pi, "expected an [x, y] pair");
      out.emplace_back(from_json<Rational>(vs[i][0], element(pi, 0)), from_json<Rational>(vs[i][1], element(pi, 1)));
    }
    return guarded(p, [&] { return kind == "line" ? pl::PLMap::on_line(out) : pl::PLMap::on_interval(out); });
  }
  const std::string pd = member(path, "domain");
  const json& dom = field(j, "domain", path);
  std::optional<Rational> lo, hi;
  if (dom.is_string()) {
    if (dom.get<std::string>() != "line") throw SchemaError(pd, "expected \"line\" or [lo, hi]");
  } else {
    if (!dom.is_array() || dom.size() != 2) throw SchemaError(pd, "expected \"line\" or [lo, hi]");
    lo = from_json<Rational>(dom[0], element(pd, 0));
    hi = from_json<Rational>(dom[1], element(pd, 1));
    if (!(*lo < *hi)) throw SchemaError(pd, "empty domain");
  }
  const std::string p = member(path, "pieces");
  const json& ps = get_array(field(j, "pieces", path), p);
  if (ps.empty()) throw SchemaError(p, "no pieces");
  std::vector<pl::Piece> out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string pi = element(p, i);
    if (!ps[i].is_array() || ps[i].size() != 3) throw SchemaError(pi, "expected a [start, slope, offset] triple");
    pl::Piece pc;
    if (!ps[i][0].is_null()) pc.start = from_json<Rational>(ps[i][0], element(pi, 0));
    pc.slope = from_json<Rational>(ps[i][1], element(pi, 1));
    pc.offset = from_json<Rational>(ps[i][2], element(pi, 2));
    if (i > 0 && (!pc.start || (out.back().start && !(*pc.start > *out.back().start))))
      throw SchemaError(pi, "piece starts must increase");
    out.push_back(pc);
  }
  if (lo && out.front().start != lo) throw SchemaError(element(p, 0), "first piece must start at the domain's left end");
  return guarded(p, [&] { return pl::PLMap::from_pieces(std::move(out), hi); });
}

json to_json(const flow::StoneSystem& X) {
  switch (X.kind()) {
    case flow::StoneSystem::Kind::Substitution: {
      json rules = json::object();
      for (const auto& [c, image] : X.rules()) rules[std::string(1, c)] = image;
      return {{"kind", "substitution"}, {"rules", rules}};
    }
    case flow::StoneSystem::Kind::Periodic:
      return {{"kind", "periodic"}, {"word", X.period()}};
    case flow::StoneSystem::Kind::FullShift:
      break;
  }
  return {{"kind", "full_shift"}, {"alphabet", X.alphabet()}};
}

namespace {

std::map<char, std::string> rules_from(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object of rules");
  std::map<char, std::string> rules;
  for (const auto& [k, v] : j.items()) {
    const std::string pk = member(path, k);
    if (k.size() != 1) throw SchemaError(pk, "rule key must be a single letter");
    rules[k[0]] = get_string(v, pk);
  }
  return rules;
}

}  // namespace

template <>
flow::StoneSystem from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  if (!j.contains("kind")) return flow::StoneSystem::substitution(rules_from(j, path));
  const std::string pk = member(path, "kind");
  const std::string kind = get_string(j["kind"], pk);
  if (kind == "substitution")
    return flow::StoneSystem::substitution(rules_from(field(j, "rules", path), member(path, "rules")));
  if (kind == "periodic")
    return flow::StoneSystem::periodic(get_string(field(j, "word", path), member(path, "word")));
  if (kind == "full_shift")
    return flow::StoneSystem::full_shift(get_string(field(j, "alphabet", path), member(path, "alphabet")));
  throw SchemaError(pk, "unknown system kind \"" + kind + "\"");
}

json to_json(const flow::CylinderX& C) { return {{"word", C.word}, {"position", C.position}}; }

template <>
flow::CylinderX from_json(const json& j, const std::string& path) {
  flow::CylinderX C;
  C.word = get_string(field(j, "word", path), member(path, "word"));
  if (const json* p = optional_field(j, "position", path)) C.position = get_int(*p, member(path, "position"));
  return C;
}

json to_json(const flow::Segment& s) {
  return {{"lo", to_string(s.lo)}, {"hi", to_string(s.hi)}, {"lo_closed", s.lo_closed}, {"hi_closed", s.hi_closed}};
}

template <>
flow::Segment from_json(const json& j, const std::string& path) {
  flow::Segment s;
  s.lo = from_json<Rational>(field(j, "lo", path), member(path, "lo"));
  s.hi = from_json<Rational>(field(j, "hi", path), member(path, "hi"));
  if (const json* c = optional_field(j, "lo_closed", path)) s.lo_closed = get_bool(*c, member(path, "lo_closed"));
  if (const json* c = optional_field(j, "hi_closed", path)) s.hi_closed = get_bool(*c, member(path, "hi_closed"));
  return s;
}

json to_json(const flow::InvolutionSpec& s) {
  json letters = json::object();
  for (const auto& [a, b] : s.letters) letters[std::string(1, a)] = std::string(1, b);
  return {{"letters", letters}, {"reflect", s.reflect}, {"offset", s.offset}};
}

template <>
flow::InvolutionSpec from_json(const json& j, const std::string& path) {
  flow::InvolutionSpec s;
  const std::string pl = member(path, "letters");
  const json& letters = field(j, "letters", path);
  if (!letters.is_object()) throw SchemaError(pl, "expected an object");
  for (const auto& [k, v] : letters.items()) {
    if (k.size() != 1) throw SchemaError(member(pl, k), "key must be a single letter");
    s.letters[k[0]] = get_letter(v, member(pl, k));
  }
  if (const json* r = optional_field(j, "reflect", path)) s.reflect = get_bool(*r, member(path, "reflect"));
  if (const json* o = optional_field(j, "offset", path)) s.offset = get_int(*o, member(path, "offset"));
  return s;
}

json to_json(const flow::PointSpec& x) {
  json out;
  if (x.kind == flow::PointSpec::Kind::Periodic) {
    out = {{"kind", "periodic"}, {"word", x.word}};
  } else {
    out = {{"kind", "fixed_point"},
           {"left", std::string(1, x.left)},
           {"right", std::string(1, x.right)},
           {"power", x.power}};
  }
  out["shift"] = x.shift;
  out["reflected"] = x.reflected;
  return out;
}

template <>
flow::PointSpec from_json(const json& j, const std::string& path) {
  flow::PointSpec x;
  const std::string pk = member(path, "kind");
  const std::string kind = get_string(field(j, "kind", path), pk);
  if (kind == "periodic") {
    x.kind = flow::PointSpec::Kind::Periodic;
    x.word = get_string(field(j, "word", path), member(path, "word"));
    if (x.word.empty()) throw SchemaError(member(path, "word"), "empty block");
  } else if (kind == "fixed_point") {
    x.kind = flow::PointSpec::Kind::FixedPoint;
    x.left = get_letter(field(j, "left", path), member(path, "left"));
    x.right = get_letter(field(j, "right", path), member(path, "right"));
    if (const json* p = optional_field(j, "power", path)) x.power = get_int(*p, member(path, "power"));
  } else {
    throw SchemaError(pk, "unknown point kind \"" + kind + "\"");
  }
  if (const json* s = optional_field(j, "shift", path)) x.shift = get_int(*s, member(path, "shift"));
  if (const json* r = optional_field(j, "reflected", path)) x.reflected = get_bool(*r, member(path, "reflected"));
  return x;
}

json to_json(const flow::FlowElement& g) {
  json pieces = json::array();
  for (const auto& pc : g.pieces)
    pieces.push_back({{"cell", to_json(pc.cell)}, {"lo", to_string(pc.lo)}, {"hi", to_string(pc.hi)}, {"f", to_json(pc.f)}});
  return {{"pieces", pieces}};
}

template <>
flow::FlowElement from_json(const json& j, const std::string& path) {
  const std::string p = member(path, "pieces");
  const json& pieces = get_array(field(j, "pieces", path), p);
  flow::FlowElement g;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string pi = element(p, i);
    const json& pc = pieces[i];
    g.pieces.push_back({from_json<flow::CylinderX>(field(pc, "cell", pi), member(pi, "cell")),
                        from_json<Rational>(field(pc, "lo", pi), member(pi, "lo")),
                        from_json<Rational>(field(pc, "hi", pi), member(pi, "hi")),
                        from_json<pl::PLMap>(field(pc, "f", pi), member(pi, "f"))});
  }
  return g;
}

json to_json(const flow::FlowPoint& p) { return {{"x", to_json(p.x)}, {"t", to_string(p.t)}}; }

template <>
flow::FlowPoint from_json(const json& j, const std::string& path) {
  return {from_json<flow::PointSpec>(field(j, "x", path), member(path, "x")),
          from_json<Rational>(field(j, "t", path), member(path, "t"))};
}

json to_json(const flow::ChartElement& g) { return {{"cell", to_json(g.cell)}, {"f", to_json(g.f)}}; }

template <>
flow::ChartElement from_json(const json& j, const std::string& path) {
  return {from_json<flow::CylinderX>(field(j, "cell", path), member(path, "cell")),
          from_json<pl::PLMap>(field(j, "f", path), member(path, "f"))};
}

json to_json(const vd::BrinDecomposition& b) {
  json cert = json::array();
  for (const auto& c : b.certificate)
    cert.push_back({{"domain", c.domain.str()},
                    {"range", c.range.str()},
                    {"power", c.power},
                    {"attracting", c.attracting},
                    {"point", c.point.str()}});
  return {{"Y", to_json(b.Y)},
          {"Z", to_json(b.Z)},
          {"order_on_y", b.order_on_y ? json(*b.order_on_y) : json(nullptr)},
          {"att", points(b.att)},
          {"rep", points(b.rep)},
          {"certificate", cert},
          {"y_periods", b.y_periods},
          {"powers_examined", b.powers_examined},
          {"settle_steps", b.settle_steps}};
}

json to_json(const perm::BlockReport& r) {
  json systems = json::array();
  for (const auto& s : r.systems) systems.push_back(sets(s.blocks));
  return {{"transitive", r.transitive}, {"primitive", r.primitive}, {"systems", systems}};
}

json to_json(const perm::DisplacementConfig& c) { return {{"sets", sets(c.sets)}}; }

json to_json(const perm::DisplacementCheck& c) {
  return {{"ok", c.ok}, {"condition", c.condition}, {"first", c.first}, {"second", c.second}, {"detail", c.detail}};
}

json to_json(const perm::FixboundRow& r) {
  json gens = json::array();
  for (const auto& g : r.generators) gens.push_back(g.str());
  json smallest = nullptr;
  if (r.smallest) {
    smallest = json::array();
    for (const auto& p : *r.smallest) smallest.push_back(p.str());
  }
  return {{"id", r.id},
          {"order", r.order},
          {"fixed", r.fixed},
          {"generators", gens},
          {"smallest_confining", smallest},
          {"confining_singletons", r.confining_singletons},
          {"confining_pairs", r.confining_pairs},
          {"violation", r.violation}};
}

json to_json(const pl::Interval& i) {
  return {{"lo", i.lo ? json(to_string(*i.lo)) : json(nullptr)}, {"hi", i.hi ? json(to_string(*i.hi)) : json(nullptr)}};
}

json to_json(const pl::SignInterval& s) {
  json out = to_json(s.span);
  out["sign"] = s.sign;
  return out;
}

json to_json(const pl::MixedIdentityReport& r) {
  json t = json::array(), gt = json::array(), p = json::array();
  for (const auto& q : r.t) t.push_back(to_string(q));
  for (const auto& q : r.g_of_t) gt.push_back(to_string(q));
  for (const auto& q : r.p) p.push_back(to_string(q));
  return {{"h", to_json(r.h)}, {"t", t}, {"g_of_t", gt}, {"p", p}, {"value", to_string(r.value)}, {"certified", r.certified}};
}

json to_json(const flow::ReturnCell& c) { return {{"cell", to_json(c.cell)}, {"time", c.time}}; }

json to_json(const flow::ReturnChart& c) {
  return {{"cell", to_json(c.chart.cell)}, {"interval", to_json(c.chart.span)}, {"time", c.time}};
}

json to_json(const flow::LeafCrossing& c) {
  return {{"interval", to_json(c.span)}, {"sign", c.sign > 0 ? "+" : "-"}, {"n", c.n}};
}

json to_json(const flow::DInftyReport& r) {
  return {{"relations_ok", r.relations_ok},         {"relation_detail", r.relation_detail},
          {"legality_ok", r.legality_ok},           {"legality_witness", r.legality_witness},
          {"free", r.free},                         {"freeness_witness", r.freeness_witness},
          {"witness_kind", r.witness_kind},         {"depth", r.depth},
          {"max_translation", r.max_translation}};
}

json to_json(const flow::TilingReport& r) { return {{"ok", r.ok}, {"detail", r.detail}, {"offending", r.offending}}; }

json to_json(const flow::FlowValidation& v) {
  json issues = json::array();
  for (const auto& is : v.issues) issues.push_back({{"piece", is.piece}, {"message", is.message}});
  return {{"ok", v.ok}, {"issues", issues}};
}

}  // namespace htlab::io
