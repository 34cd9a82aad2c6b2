#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace cdgraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid graph input: parse failures, invariant violations, unknown ids.
class GraphError : public Error {
public:
    using Error::Error;
};

/// Vertex index into a WeightedGraph; ordering follows the input file.
using Vertex = std::size_t;

/// Real-valued function on the vertices of a graph, indexed by Vertex.
using VertexFunction = Eigen::VectorXd;

/// One directed half of an undirected edge: the weight w_xy seen from x.
struct Neighbor {
    Vertex to;
    double weight;
};

/// Input record for graph construction. A missing reverse weight means w_yx = w_xy.
struct EdgeSpec {
    std::string from;
    std::string to;
    double weight = 1.0;
    std::optional<double> reverse_weight;
};

/// Finite connected graph with positive, possibly asymmetric, edge weights and
/// a positive vertex measure. Immutable once built.
///
/// Adjacency is a symmetric relation: w_xy is stored iff w_yx is.
/// Hop distances between all pairs are computed at construction.
class WeightedGraph {
public:
    /// Validates and builds. `measure` may be empty (mu = 1 everywhere) or
    /// give one value per id. Throws GraphError on any invariant violation.
    static WeightedGraph build(std::vector<std::string> ids,
                               const std::vector<EdgeSpec>& edges,
                               std::vector<double> measure = {});

    std::size_t size() const { return ids_.size(); }
    const std::string& id(Vertex v) const { return ids_.at(v); }
    const std::vector<std::string>& ids() const { return ids_; }
    Vertex index(const std::string& id) const;
    std::optional<Vertex> find(const std::string& id) const;

    double mu(Vertex v) const { return mu_[v]; }
    const std::vector<double>& measure() const { return mu_; }
    const std::vector<Neighbor>& neighbors(Vertex v) const { return adj_[v]; }
    double degree(Vertex v) const { return deg_[v]; }

    /// w_xy, or 0 when x and y are not adjacent.
    double weight(Vertex x, Vertex y) const;
    bool adjacent(Vertex x, Vertex y) const { return weight(x, y) > 0.0; }
    bool symmetric_weights() const { return symmetric_; }

    /// Hop-count distance.
    int distance(Vertex x, Vertex y) const { return dist_[x * size() + y]; }

    /// One record per undirected edge, lower index first.
    std::vector<EdgeSpec> edge_specs() const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, Vertex> index_;
    std::vector<double> mu_;
    std::vector<std::vector<Neighbor>> adj_;
    std::vector<double> deg_;
    std::vector<int> dist_;
    bool symmetric_ = true;
};

struct GraphMetrics {
    std::vector<double> degree;
    double d_mu = 0.0;    ///< max_x deg(x)/mu(x)
    double d_w = 0.0;     ///< max over ordered adjacent pairs of deg(x)/w_xy
    double mu_max = 0.0;
    double w_min = std::numeric_limits<double>::infinity();
    double vol_total = 0.0;
    int diameter = 0;
};

GraphMetrics graph_metrics(const WeightedGraph& g);

/// Sum of mu over a vertex set.
double volume(const WeightedGraph& g, const std::vector<Vertex>& vertices);

struct Ball {
    Vertex center = 0;
    int radius = 0;
    std::vector<Vertex> members;  ///< ascending vertex order

    bool contains(Vertex v) const;
};

/// Closed hop-distance ball {v : d(v, center) <= radius}.
Ball ball(const WeightedGraph& g, Vertex center, int radius);

/// Piecewise-linear cutoff: 1 for d < R, (2R - d)/R for R <= d <= 2R, 0 beyond.
VertexFunction cutoff(const WeightedGraph& g, Vertex center, int radius);

}  // namespace cdgraph
