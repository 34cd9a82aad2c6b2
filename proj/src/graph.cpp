#include "cdgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

namespace cdgraph {

namespace {

void require_positive(double value, const std::string& what) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw GraphError("nonpositive " + what);
    }
}

}  // namespace

WeightedGraph WeightedGraph::build(std::vector<std::string> ids,
                                   const std::vector<EdgeSpec>& edges,
                                   std::vector<double> measure) {
    WeightedGraph g;
    if (ids.empty()) {
        throw GraphError("graph has no vertices");
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!g.index_.emplace(ids[i], i).second) {
            throw GraphError("duplicate vertex id '" + ids[i] + "'");
        }
    }
    g.ids_ = std::move(ids);
    const std::size_t n = g.ids_.size();

    if (measure.empty()) {
        measure.assign(n, 1.0);
    } else if (measure.size() != n) {
        throw GraphError("measure size does not match vertex count");
    }
    for (double m : measure) {
        require_positive(m, "measure");
    }
    g.mu_ = std::move(measure);

    g.adj_.assign(n, {});
    for (const auto& e : edges) {
        const auto a = g.find(e.from);
        const auto b = g.find(e.to);
        if (!a || !b) {
            throw GraphError("edge references unknown vertex '" + (a ? e.to : e.from) + "'");
        }
        if (*a == *b) {
            throw GraphError("self-loop at '" + e.from + "'");
        }
        require_positive(e.weight, "weight");
        const double rev = e.reverse_weight.value_or(e.weight);
        require_positive(rev, "weight");
        if (g.weight(*a, *b) > 0.0) {
            throw GraphError("duplicate edge '" + e.from + "'-'" + e.to + "'");
        }
        g.adj_[*a].push_back({*b, e.weight});
        g.adj_[*b].push_back({*a, rev});
        if (rev != e.weight) {
            g.symmetric_ = false;
        }
    }

    g.deg_.assign(n, 0.0);
    for (Vertex x = 0; x < n; ++x) {
        for (const auto& nb : g.adj_[x]) {
            g.deg_[x] += nb.weight;
        }
    }

    g.dist_.assign(n * n, -1);
    for (Vertex s = 0; s < n; ++s) {
        int* row = &g.dist_[s * n];
        row[s] = 0;
        std::deque<Vertex> queue{s};
        while (!queue.empty()) {
            const Vertex v = queue.front();
            queue.pop_front();
            for (const auto& nb : g.adj_[v]) {
                if (row[nb.to] < 0) {
                    row[nb.to] = row[v] + 1;
                    queue.push_back(nb.to);
                }
            }
        }
        if (std::any_of(row, row + n, [](int d) { return d < 0; })) {
            throw GraphError("graph is disconnected");
        }
    }
    return g;
}

Vertex WeightedGraph::index(const std::string& id) const {
    const auto v = find(id);
    if (!v) {
        throw GraphError("unknown vertex id '" + id + "'");
    }
    return *v;
}

std::optional<Vertex> WeightedGraph::find(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

double WeightedGraph::weight(Vertex x, Vertex y) const {
    for (const auto& nb : adj_[x]) {
        if (nb.to == y) {
            return nb.weight;
        }
    }
    return 0.0;
}

std::vector<EdgeSpec> WeightedGraph::edge_specs() const {
    std::vector<EdgeSpec> out;
    for (Vertex x = 0; x < size(); ++x) {
        for (const auto& nb : adj_[x]) {
            if (nb.to > x) {
                out.push_back({ids_[x], ids_[nb.to], nb.weight, weight(nb.to, x)});
            }
        }
    }
    return out;
}

GraphMetrics graph_metrics(const WeightedGraph& g) {
    GraphMetrics m;
    m.degree.resize(g.size());
    for (Vertex x = 0; x < g.size(); ++x) {
        const double deg = g.degree(x);
        m.degree[x] = deg;
        m.d_mu = std::max(m.d_mu, deg / g.mu(x));
        m.mu_max = std::max(m.mu_max, g.mu(x));
        m.vol_total += g.mu(x);
        for (const auto& nb : g.neighbors(x)) {
            m.d_w = std::max(m.d_w, deg / nb.weight);
            m.w_min = std::min(m.w_min, nb.weight);
        }
        for (Vertex y = 0; y < g.size(); ++y) {
            m.diameter = std::max(m.diameter, g.distance(x, y));
        }
    }
    return m;
}

double volume(const WeightedGraph& g, const std::vector<Vertex>& vertices) {
    double vol = 0.0;
    for (Vertex v : vertices) {
        vol += g.mu(v);
    }
    return vol;
}

bool Ball::contains(Vertex v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

Ball ball(const WeightedGraph& g, Vertex center, int radius) {
    if (center >= g.size()) {
        throw GraphError("unknown vertex index");
    }
    if (radius < 0) {
        throw GraphError("negative ball radius");
    }
    Ball b{center, radius, {}};
    for (Vertex v = 0; v < g.size(); ++v) {
        if (g.distance(center, v) <= radius) {
            b.members.push_back(v);
        }
    }
    return b;
}

VertexFunction cutoff(const WeightedGraph& g, Vertex center, int radius) {
    if (center >= g.size()) {
        throw GraphError("unknown vertex index");
    }
    if (radius <= 0) {
        throw GraphError("cutoff radius must be positive");
    }
    VertexFunction phi(g.size());
    const double r = radius;
    for (Vertex v = 0; v < g.size(); ++v) {
        const int d = g.distance(center, v);
        if (d > 2 * radius) {
            phi[v] = 0.0;
        } else if (d >= radius) {
            phi[v] = (2.0 * r - d) / r;
        } else {
            phi[v] = 1.0;
        }
    }
    return phi;
}

}  // namespace cdgraph
