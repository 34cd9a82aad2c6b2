#include "cdgraph/report.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "cdgraph/io.hpp"

namespace cdgraph {

Json number(double value) {
    if (!std::isfinite(value)) {
        return format_number(value);
    }
    return std::strtod(format_number(value).c_str(), nullptr);
}

Json vertex_function_json(const WeightedGraph& g, const VertexFunction& f) {
    Json out = Json::object();
    for (Vertex v = 0; v < g.size(); ++v) {
        out[g.id(v)] = number(f[v]);
    }
    return out;
}

Json to_json(const GraphMetrics& m) {
    Json deg = Json::array();
    for (double d : m.degree) {
        deg.push_back(number(d));
    }
    return Json{{"degree", deg},          {"D_mu", number(m.d_mu)},         {"D_w", number(m.d_w)},
                {"mu_max", number(m.mu_max)}, {"w_min", number(m.w_min)}, {"vol_total", number(m.vol_total)},
                {"diameter", m.diameter}};
}

Json to_json(const WeightedGraph& g, const CurvatureReport& r) {
    Json per = Json::array();
    for (const auto& lc : r.per_vertex) {
        per.push_back(Json{{"vertex", g.id(lc.vertex)},
                           {"k_star", number(lc.k_star)},
                           {"evaluations", lc.evaluations},
                           {"witness", vertex_function_json(g, lc.witness)}});
    }
    Json j{{"kind", r.kind == CurvatureKind::CDE ? "CDE" : "CDpsi"}};
    if (r.kind == CurvatureKind::CDPsi) {
        j["psi"] = r.psi_name;
    }
    j["n"] = number(r.n);
    j["method"] = r.method;
    j["tolerance"] = number(r.tolerance);
    j["min_k_star"] = number(r.min_k_star());
    j["per_vertex"] = per;
    return j;
}

Json to_json(const WeightedGraph& g, const VerifyResult& r) {
    Json margin = Json::object();
    for (std::size_t i = 0; i < r.margin.size(); ++i) {
        margin[g.id(r.report.per_vertex[i].vertex)] = number(r.margin[i]);
    }
    Json j{{"holds", r.holds}, {"n", number(r.n)}, {"K", number(r.K)}, {"tolerance", number(r.tolerance)},
           {"margin", margin}};
    if (r.violation_vertex) {
        j["violation"] = Json{{"vertex", g.id(*r.violation_vertex)},
                              {"confirmed", r.violation_confirmed},
                              {"witness", vertex_function_json(g, *r.witness)}};
    }
    return j;
}

Json to_json(const Hypothesis& h) {
    Json j{{"condition", h.kind == CurvatureKind::CDE ? "CDE" : "CDpsi"}};
    if (!h.psi.empty()) {
        j["psi"] = h.psi;
    }
    j["n"] = number(h.n);
    j["K"] = number(h.K);
    j["certified"] = h.certified;
    j["forced"] = h.forced;
    j["min_k_star"] = number(h.min_k_star);
    return j;
}

namespace {

Json point_json(const WeightedGraph& g, const EstimatePoint& p) {
    Json j{{"assertion", p.assertion}, {"x", g.id(p.x)}};
    if (p.y) {
        j["y"] = g.id(*p.y);
    }
    j["t"] = number(p.t);
    if (p.t2) {
        j["t2"] = number(*p.t2);
    }
    j["lhs"] = number(p.lhs);
    j["rhs"] = number(p.rhs);
    j["slack"] = number(p.slack);
    if (!p.counts) {
        j["counts"] = false;
    }
    return j;
}

}  // namespace

Json to_json(const WeightedGraph& g, const EstimateReport& r) {
    std::set<double> times;
    std::set<Vertex> vertices;
    Json points = Json::array();
    for (const auto& p : r.points) {
        times.insert(p.t);
        vertices.insert(p.x);
        points.push_back(point_json(g, p));
    }
    Json grid_times = Json::array();
    for (double t : times) {
        grid_times.push_back(number(t));
    }
    Json grid_vertices = Json::array();
    for (Vertex v : vertices) {
        grid_vertices.push_back(g.id(v));
    }
    Json by_assertion = Json::object();
    for (const auto& [name, slack] : r.min_slack_by_assertion) {
        by_assertion[name] = number(slack);
    }
    Json constants = Json::object();
    for (const auto& [name, value] : r.constants) {
        constants[name] = number(value);
    }
    Json j{{"theorem_id", r.theorem_id},
           {"holds", r.holds},
           {"hypothesis_verified", r.hypothesis_verified},
           {"min_slack", number(r.min_slack)},
           {"min_slack_by_assertion", by_assertion}};
    j["witness"] = r.witness ? point_json(g, *r.witness) : Json(nullptr);
    j["hypothesis"] = r.hypothesis ? to_json(*r.hypothesis) : Json(nullptr);
    j["constants"] = constants;
    j["notes"] = r.notes;
    j["grid"] = Json{{"times", grid_times}, {"vertices", grid_vertices}};
    j["points"] = points;
    return j;
}

std::string dump(const Json& j) {
    return j.dump(2) + "\n";
}

}  // namespace cdgraph
