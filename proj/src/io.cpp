#include "cdgraph/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cdgraph {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return trim(hash == std::string::npos ? line : line.substr(0, hash));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        out.push_back(tok);
    }
    return out;
}

double parse_real(const std::string& tok, int line_no) {
    double value = 0.0;
    const char* begin = tok.data();
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw GraphError("line " + std::to_string(line_no) + ": cannot parse number '" + tok + "'");
    }
    return value;
}

// Collects vertices in first-appearance order and directed weights with an
// explicit/implicit flag so that `a b w` followed by `b a w'` resolves cleanly.
struct EdgeAccumulator {
    struct Directed {
        double weight;
        bool explicit_;
    };
    std::vector<std::string> order;
    std::map<std::string, std::size_t> seen;
    std::map<std::pair<std::string, std::string>, Directed> directed;
    std::vector<std::pair<std::string, std::string>> pairs;  // undirected, first-seen order

    void touch(const std::string& id) {
        if (seen.emplace(id, order.size()).second) {
            order.push_back(id);
        }
    }

    void set(const std::string& x, const std::string& y, double w, bool is_explicit, int line_no) {
        auto key = std::make_pair(x, y);
        auto it = directed.find(key);
        if (it == directed.end()) {
            directed.emplace(key, Directed{w, is_explicit});
            return;
        }
        if (it->second.explicit_ && is_explicit) {
            throw GraphError("line " + std::to_string(line_no) + ": duplicate edge '" + x + "'-'" + y + "'");
        }
        if (is_explicit) {
            it->second = Directed{w, true};
        }
    }

    void add(const std::string& x, const std::string& y, double w, std::optional<double> rev, int line_no) {
        touch(x);
        touch(y);
        if (x == y) {
            throw GraphError("line " + std::to_string(line_no) + ": self-loop at '" + x + "'");
        }
        if (!directed.count({x, y}) && !directed.count({y, x})) {
            pairs.emplace_back(x, y);
        }
        set(x, y, w, true, line_no);
        set(y, x, rev.value_or(w), rev.has_value(), line_no);
    }

    std::vector<EdgeSpec> edges() const {
        std::vector<EdgeSpec> out;
        for (const auto& [x, y] : pairs) {
            out.push_back({x, y, directed.at({x, y}).weight, directed.at({y, x}).weight});
        }
        return out;
    }
};

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
    if (name == "edge-list" || name == "tsv") {
        return GraphFormat::EdgeList;
    }
    if (name == "json") {
        return GraphFormat::Json;
    }
    throw GraphError("unknown graph format '" + std::string(name) + "'");
}

WeightedGraph parse_edge_list(std::istream& in) {
    EdgeAccumulator acc;
    std::map<std::string, double> measure;
    bool in_measure = false;
    bool measure_section = false;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_comment(raw);
        if (line.empty()) {
            continue;
        }
        if (line == "[measure]") {
            in_measure = true;
            measure_section = true;
            continue;
        }
        if (line == "[edges]") {
            in_measure = false;
            continue;
        }
        const auto fields = split_fields(line);
        if (in_measure) {
            if (fields.size() != 2) {
                throw GraphError("line " + std::to_string(line_no) + ": measure rows are 'vertex mu'");
            }
            const double m = parse_real(fields[1], line_no);
            if (!(m > 0.0)) {
                throw GraphError("line " + std::to_string(line_no) + ": nonpositive measure");
            }
            if (!measure.emplace(fields[0], m).second) {
                throw GraphError("line " + std::to_string(line_no) + ": duplicate measure for '" + fields[0] + "'");
            }
            acc.touch(fields[0]);
            continue;
        }
        if (fields.size() < 3 || fields.size() > 4) {
            throw GraphError("line " + std::to_string(line_no) + ": edge rows are 'x y w_xy [w_yx]'");
        }
        const double w = parse_real(fields[2], line_no);
        if (!(w > 0.0)) {
            throw GraphError("line " + std::to_string(line_no) + ": nonpositive weight");
        }
        std::optional<double> rev;
        if (fields.size() == 4) {
            if (fields[3] == "-") {
                throw GraphError("line " + std::to_string(line_no) + ": one-directional edge '" +
                                 fields[0] + "'->'" + fields[1] + "'");
            }
            rev = parse_real(fields[3], line_no);
            if (!(*rev > 0.0)) {
                throw GraphError("line " + std::to_string(line_no) + ": nonpositive weight");
            }
        }
        acc.add(fields[0], fields[1], w, rev, line_no);
    }
    std::vector<double> mu;
    if (measure_section) {
        for (const auto& id : acc.order) {
            const auto it = measure.find(id);
            if (it == measure.end()) {
                throw GraphError("measure section does not list vertex '" + id + "'");
            }
            mu.push_back(it->second);
        }
    }
    return WeightedGraph::build(acc.order, acc.edges(), std::move(mu));
}

WeightedGraph parse_graph_json(std::istream& in) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw GraphError(std::string("json parse error: ") + e.what());
    }
    auto id_of = [](const json& v) -> std::string {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_number_integer()) {
            return std::to_string(v.get<long long>());
        }
        throw GraphError("vertex ids must be strings or integers");
    };
    auto number_of = [](const json& v, const char* what) -> double {
        if (!v.is_number()) {
            throw GraphError(std::string("field '") + what + "' must be a number");
        }
        return v.get<double>();
    };

    std::vector<std::string> ids;
    std::vector<double> mu;
    bool any_mu = false;
    if (doc.contains("vertices")) {
        for (const auto& v : doc.at("vertices")) {
            if (v.is_object()) {
                ids.push_back(id_of(v.at("id")));
                if (v.contains("mu")) {
                    any_mu = true;
                    mu.push_back(number_of(v.at("mu"), "mu"));
                } else {
                    mu.push_back(1.0);
                }
            } else {
                ids.push_back(id_of(v));
                mu.push_back(1.0);
            }
        }
    }
    std::vector<EdgeSpec> edges;
    if (!doc.contains("edges") || !doc.at("edges").is_array()) {
        throw GraphError("json graph needs an 'edges' array");
    }
    std::map<std::string, bool> known;
    for (const auto& id : ids) {
        known[id] = true;
    }
    for (const auto& e : doc.at("edges")) {
        EdgeSpec spec;
        spec.from = id_of(e.at("from"));
        spec.to = id_of(e.at("to"));
        spec.weight = e.contains("w") ? number_of(e.at("w"), "w") : 1.0;
        if (e.contains("w_rev")) {
            if (e.at("w_rev").is_null()) {
                throw GraphError("one-directional edge '" + spec.from + "'->'" + spec.to + "'");
            }
            spec.reverse_weight = number_of(e.at("w_rev"), "w_rev");
        }
        if (!doc.contains("vertices")) {
            for (const auto* id : {&spec.from, &spec.to}) {
                if (known.emplace(*id, true).second) {
                    ids.push_back(*id);
                    mu.push_back(1.0);
                }
            }
        }
        edges.push_back(std::move(spec));
    }
    return WeightedGraph::build(std::move(ids), edges, any_mu ? std::move(mu) : std::vector<double>{});
}

WeightedGraph load_graph(const std::string& path, GraphFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw GraphError("cannot open graph file '" + path + "'");
    }
    return format == GraphFormat::Json ? parse_graph_json(in) : parse_edge_list(in);
}

VertexFunction parse_vertex_function(std::istream& in, const WeightedGraph& g) {
    VertexFunction f(g.size());
    std::vector<bool> set(g.size(), false);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = strip_comment(raw);
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw GraphError("line " + std::to_string(line_no) + ": expected 'vertex,value'");
        }
        const std::string id = trim(line.substr(0, comma));
        const std::string val = trim(line.substr(comma + 1));
        if (line_no == 1 && id == "vertex") {
            continue;
        }
        const Vertex v = g.index(id);
        if (set[v]) {
            throw GraphError("line " + std::to_string(line_no) + ": duplicate value for '" + id + "'");
        }
        f[v] = parse_real(val, line_no);
        set[v] = true;
    }
    for (Vertex v = 0; v < g.size(); ++v) {
        if (!set[v]) {
            throw GraphError("vertex function has no value for '" + g.id(v) + "'");
        }
    }
    return f;
}

VertexFunction load_vertex_function(const std::string& path, const WeightedGraph& g) {
    std::ifstream in(path);
    if (!in) {
        throw GraphError("cannot open vertex function file '" + path + "'");
    }
    return parse_vertex_function(in, g);
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

void write_vertex_function(std::ostream& out, const WeightedGraph& g, const VertexFunction& f) {
    out << "vertex,value\n";
    for (Vertex v = 0; v < g.size(); ++v) {
        out << g.id(v) << ',' << format_number(f[v]) << '\n';
    }
}

}  // namespace cdgraph
