#include <doctest.h>

#include <random>
#include <sstream>

#include "cdgraph/graph.hpp"
#include "cdgraph/io.hpp"
#include "support/support.hpp"

using namespace cdgraph;

namespace {

WeightedGraph from_text(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

std::string error_of(const std::string& text) {
    try {
        from_text(text);
    } catch (const GraphError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("edge list builds P2 and K3") {
    auto p2 = from_text("a b 1\n");
    CHECK(p2.size() == 2);
    CHECK(p2.edge_specs().size() == 1);
    CHECK(p2.weight(0, 1) == 1.0);
    CHECK(p2.weight(1, 0) == 1.0);

    auto k3 = from_text("a b 1\nb c 1\na c 1\n");
    CHECK(k3.size() == 3);
    for (Vertex v = 0; v < 3; ++v) CHECK(k3.degree(v) == 2.0);
}

TEST_CASE("edge list rejects invariant violations") {
    CHECK(error_of("a b -1\n").find("nonpositive weight") != std::string::npos);
    CHECK(error_of("a b 0\n").find("nonpositive weight") != std::string::npos);
    CHECK(error_of("a a 1\n").find("self-loop") != std::string::npos);
    CHECK(error_of("a b 1\nc d 1\n").find("disconnected") != std::string::npos);
    CHECK(error_of("a b 1 -\n").find("one-directional") != std::string::npos);
    CHECK(error_of("a b 1\na b 2\n").find("duplicate") != std::string::npos);
    CHECK(error_of("a b x\n").find("cannot parse") != std::string::npos);
    CHECK(error_of("a b 1\n[measure]\na 1\n").find("does not list") != std::string::npos);
    CHECK(error_of("a b 1\n[measure]\na 1\nb 0\n").find("nonpositive measure") != std::string::npos);
    CHECK(error_of("").find("no vertices") != std::string::npos);
}

TEST_CASE("asymmetric weights and measure section") {
    auto g = from_text("# comment\na b 1 2\nb c 3\nc b 0.5\n[measure]\na 0.5\nb 1\nc 2\n");
    CHECK(g.weight(g.index("a"), g.index("b")) == 1.0);
    CHECK(g.weight(g.index("b"), g.index("a")) == 2.0);
    CHECK(g.weight(g.index("b"), g.index("c")) == 3.0);
    CHECK(g.weight(g.index("c"), g.index("b")) == 0.5);
    CHECK_FALSE(g.symmetric_weights());
    CHECK(g.mu(g.index("c")) == 2.0);
    CHECK(g.degree(g.index("b")) == 5.0);
    CHECK(g.distance(g.index("a"), g.index("c")) == 2);
}

TEST_CASE("json graph matches the edge list") {
    auto j = load_graph(testsupport::data_path("k3.json"), GraphFormat::Json);
    auto e = load_graph(testsupport::data_path("k3.tsv"), GraphFormat::EdgeList);
    REQUIRE(j.size() == e.size());
    for (Vertex x = 0; x < 3; ++x)
        for (Vertex y = 0; y < 3; ++y) CHECK(j.weight(x, y) == e.weight(x, y));

    std::istringstream bad(R"({"vertices":[{"id":"a"},{"id":"b"}],"edges":[{"from":"a","to":"b","w_rev":null}]})");
    CHECK_THROWS_AS(parse_graph_json(bad), GraphError);
    std::istringstream mu(R"({"vertices":[{"id":"a","mu":2},{"id":"b"}],"edges":[{"from":"a","to":"b","w":3}]})");
    auto g = parse_graph_json(mu);
    CHECK(g.mu(0) == 2.0);
    CHECK(g.weight(1, 0) == 3.0);
    CHECK(parse_graph_format("json") == GraphFormat::Json);
    CHECK_THROWS_AS(parse_graph_format("xml"), GraphError);
}

TEST_CASE("graph metrics") {
    auto k3 = testsupport::complete_graph(3);
    auto m = graph_metrics(k3);
    CHECK(m.d_mu == 2.0);
    CHECK(m.d_w == 2.0);
    CHECK(m.vol_total == 3.0);
    CHECK(m.diameter == 1);

    auto p2 = testsupport::path_graph(2);
    m = graph_metrics(p2);
    CHECK(m.d_mu == 1.0);
    CHECK(m.d_w == 1.0);
    CHECK(m.mu_max == 1.0);
    CHECK(m.w_min == 1.0);
    CHECK(m.degree == std::vector<double>{1.0, 1.0});

    auto p2mu = testsupport::path_graph(2, {1.0, 2.0});
    CHECK(graph_metrics(p2mu).d_mu == 1.0);
    CHECK(graph_metrics(p2mu).mu_max == 2.0);
}

TEST_CASE("metrics against brute force on random graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = testsupport::random_graph(3 + trial % 8, rng, 0.3, trial % 2 == 0);
        auto m = graph_metrics(g);
        double dmu = 0.0, dw = 0.0, vol = 0.0;
        for (Vertex x = 0; x < g.size(); ++x) {
            double deg = 0.0;
            for (Vertex y = 0; y < g.size(); ++y) deg += g.weight(x, y);
            CHECK(deg == doctest::Approx(g.degree(x)).epsilon(1e-14));
            dmu = std::max(dmu, deg / g.mu(x));
            for (Vertex y = 0; y < g.size(); ++y)
                if (g.weight(x, y) > 0) dw = std::max(dw, deg / g.weight(x, y));
            vol += g.mu(x);
        }
        CHECK(m.d_mu == doctest::Approx(dmu).epsilon(1e-14));
        CHECK(m.d_w == doctest::Approx(dw).epsilon(1e-14));
        CHECK(m.vol_total == doctest::Approx(vol).epsilon(1e-14));
        // adjacency is symmetric as a relation
        for (Vertex x = 0; x < g.size(); ++x)
            for (Vertex y = 0; y < g.size(); ++y) CHECK(g.adjacent(x, y) == g.adjacent(y, x));
    }
}

TEST_CASE("balls") {
    auto k3 = testsupport::complete_graph(3);
    CHECK(ball(k3, 0, 0).members == std::vector<Vertex>{0});
    CHECK(ball(k3, 0, 1).members == std::vector<Vertex>{0, 1, 2});
    auto p3 = testsupport::path_graph(3);
    CHECK(ball(p3, 0, 1).members == std::vector<Vertex>{0, 1});
    CHECK(ball(p3, 0, 1).contains(1));
    CHECK_FALSE(ball(p3, 0, 1).contains(2));
    CHECK(volume(p3, ball(p3, 1, 1).members) == 3.0);
    CHECK_THROWS_AS(ball(p3, 0, -1), GraphError);
}

TEST_CASE("cutoff function") {
    auto p5 = testsupport::path_graph(5);
    auto phi = cutoff(p5, 0, 2);
    CHECK(phi[0] == 1.0);
    CHECK(phi[1] == 1.0);
    CHECK(phi[2] == 1.0);
    CHECK(phi[3] == 0.5);
    CHECK(phi[4] == 0.0);
    auto p9 = testsupport::path_graph(9);
    auto psi = cutoff(p9, 4, 2);
    CHECK(psi[0] == 0.0);  // d = 2R
    CHECK(psi[4] == 1.0);
}

TEST_CASE("vertex function csv") {
    auto p2 = load_graph(testsupport::data_path("p2.tsv"), GraphFormat::EdgeList);
    auto u = load_vertex_function(testsupport::data_path("u_p2.csv"), p2);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 4.0);
    std::istringstream missing("a,1\n");
    CHECK_THROWS_AS(parse_vertex_function(missing, p2), GraphError);
    std::istringstream dup("a,1\nb,2\nb,3\n");
    CHECK_THROWS_AS(parse_vertex_function(dup, p2), GraphError);

    std::ostringstream out;
    write_vertex_function(out, p2, u);
    std::istringstream back(out.str());
    CHECK(parse_vertex_function(back, p2) == u);
}

TEST_CASE("number formatting") {
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}
