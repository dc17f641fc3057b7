#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "htlab/cantor.hpp"
#include "htlab/dynamics.hpp"
#include "htlab/perm.hpp"
#include "htlab/pl.hpp"
#include "htlab/suspension.hpp"
#include "htlab/vd.hpp"

// Canonical JSON forms. Structural problems raise SchemaError naming the
// offending field path ("$.pairs[2][0]"); semantic ones keep their DomainError.
namespace htlab::io {

using json = nlohmann::json;

template <class T>
T from_json(const json& j, const std::string& path = "$");

json to_json(const Rational& q);
json to_json(const cantor::Word& w);
json to_json(const cantor::ClopenSet& c);
json to_json(const cantor::EvPeriodicPoint& p);
json to_json(const vd::PrefixMap& g);
json to_json(const perm::Perm& p);
json to_json(const perm::PermGroup& g);
json to_json(const pl::PLMap& f);
json to_json(const flow::StoneSystem& X);
json to_json(const flow::CylinderX& C);
json to_json(const flow::Segment& s);
json to_json(const flow::InvolutionSpec& s);
json to_json(const flow::PointSpec& x);
json to_json(const flow::FlowElement& g);
json to_json(const flow::FlowPoint& p);
json to_json(const flow::ChartElement& g);

// Reports; output only.
json to_json(const vd::BrinDecomposition& b);
json to_json(const perm::BlockReport& r);
json to_json(const perm::DisplacementConfig& c);
json to_json(const perm::DisplacementCheck& c);
json to_json(const perm::FixboundRow& r);
json to_json(const pl::Interval& i);
json to_json(const pl::SignInterval& s);
json to_json(const pl::MixedIdentityReport& r);
json to_json(const flow::ReturnCell& c);
json to_json(const flow::ReturnChart& c);
json to_json(const flow::LeafCrossing& c);
json to_json(const flow::DInftyReport& r);
json to_json(const flow::TilingReport& r);
json to_json(const flow::FlowValidation& v);

template <> Rational from_json(const json& j, const std::string& path);
template <> cantor::ClopenSet from_json(const json& j, const std::string& path);
template <> cantor::EvPeriodicPoint from_json(const json& j, const std::string& path);
template <> vd::PrefixMap from_json(const json& j, const std::string& path);
template <> perm::Perm from_json(const json& j, const std::string& path);
template <> perm::PermGroup from_json(const json& j, const std::string& path);
template <> pl::PLMap from_json(const json& j, const std::string& path);
template <> flow::StoneSystem from_json(const json& j, const std::string& path);
template <> flow::CylinderX from_json(const json& j, const std::string& path);
template <> flow::Segment from_json(const json& j, const std::string& path);
template <> flow::InvolutionSpec from_json(const json& j, const std::string& path);
template <> flow::PointSpec from_json(const json& j, const std::string& path);
template <> flow::FlowElement from_json(const json& j, const std::string& path);
template <> flow::FlowPoint from_json(const json& j, const std::string& path);
template <> flow::ChartElement from_json(const json& j, const std::string& path);

// Words carry no arity of their own.
cantor::Word word_from_json(int d, const json& j, const std::string& path);

}  // namespace htlab::io
