// JSON and CSV wire formats for the library types.
#pragma once

#include "fuplab/constants.hpp"
#include "fuplab/fup_numerics.hpp"
#include "fuplab/geometry.hpp"
#include "fuplab/porosity.hpp"
#include "fuplab/resonances.hpp"
#include "fuplab/weights.hpp"

#include <json.hpp>

#include <string>

namespace fuplab::io {

using nlohmann::json;

json toJson(const geometry::BoundingBox& box);
geometry::BoundingBox boxFromJson(const json& j);

json toJson(const geometry::DyadicSet& s);
geometry::DyadicSet dyadicSetFromJson(const json& j);

json toJson(const geometry::ClosedPolyline& p);
geometry::ClosedPolyline polylineFromJson(const json& j);

// Set-spec: {"kind":"cantor"|"product"|"koch"|"curve-grid", "base":int,
//            "depth":int, "kept":[[int]], "bbox":{"center":[f,f],"side":f},
//            "curve_depth":int (curve-grid only)}
// "koch" builds the closed polyline; the others build a DyadicSet.
struct SetSpecResult {
    bool isCurve{false};
    geometry::DyadicSet set;
    geometry::ClosedPolyline curve;
};
SetSpecResult buildFromSetSpec(const json& spec);

json toJson(const porosity::PorosityCertificate& cert);

json toJson(const porosity::MeasureBoundReport& rep);

json toJson(const porosity::RegularityEstimate& est);

json toJson(const porosity::ArcConstantEstimate& est);

json toJson(const constants::ConstantChainReport& rep);

json toJson(const weights::WeightField& field);
weights::WeightField weightFieldFromJson(const json& j);

json toJson(const weights::HypothesisReport& rep);
std::string hypothesisReportCsv(const weights::HypothesisReport& rep);

json toJson(const fupnum::NormSeries& series);
json toJson(const fupnum::ExponentFit& fit);
std::string normSeriesCsv(const fupnum::NormSeries& series);

json toJson(const resonances::ResonanceTable& table);
std::string resonanceCsv(const resonances::ResonanceTable& table);

}  // namespace fuplab::io
