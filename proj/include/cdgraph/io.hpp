#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "cdgraph/graph.hpp"

namespace cdgraph {

enum class GraphFormat { EdgeList, Json };

/// "edge-list" or "json"; throws GraphError otherwise.
GraphFormat parse_graph_format(std::string_view name);

/// Edge-list text:
///
///     # comment
///     a   b   1.0          # w_ab = w_ba = 1
///     b   c   1.0  2.0     # w_bc = 1, w_cb = 2
///     [measure]
///     a   0.5
///
/// Fields are separated by tabs or spaces. A row `x y w` also sets w_yx = w
/// unless a later row `y x w'` states it explicitly. A reverse weight of `-`
/// declares a one-directional edge, which is rejected. If a [measure] section
/// is present it must list every vertex; otherwise mu = 1.
WeightedGraph parse_edge_list(std::istream& in);

/// {"vertices":[{"id":..,"mu":..}], "edges":[{"from":..,"to":..,"w":..,"w_rev":..}]}
/// `mu`, `w` default to 1; a missing `w_rev` means symmetric; `"w_rev": null`
/// is a one-directional edge and is rejected.
WeightedGraph parse_graph_json(std::istream& in);

WeightedGraph load_graph(const std::string& path, GraphFormat format);

/// CSV rows `vertex,value`, optional `vertex,value` header, `#` comments.
/// Every vertex of `g` must appear exactly once.
VertexFunction parse_vertex_function(std::istream& in, const WeightedGraph& g);
VertexFunction load_vertex_function(const std::string& path, const WeightedGraph& g);

/// Shortest decimal text with 15 significant digits ("inf"/"-inf"/"nan" for
/// non-finite values).
std::string format_number(double value);

void write_vertex_function(std::ostream& out, const WeightedGraph& g, const VertexFunction& f);

}  // namespace cdgraph
