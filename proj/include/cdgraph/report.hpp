#pragma once

#include <string>

#include <json.hpp>

#include "cdgraph/curvature.hpp"
#include "cdgraph/estimates.hpp"
#include "cdgraph/graph.hpp"

namespace cdgraph {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Rounded to 15 significant digits; non-finite values become strings.
Json number(double value);
Json vertex_function_json(const WeightedGraph& g, const VertexFunction& f);

Json to_json(const GraphMetrics& m);
Json to_json(const WeightedGraph& g, const CurvatureReport& r);
Json to_json(const WeightedGraph& g, const VerifyResult& r);
Json to_json(const Hypothesis& h);
Json to_json(const WeightedGraph& g, const EstimateReport& r);

/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace cdgraph
