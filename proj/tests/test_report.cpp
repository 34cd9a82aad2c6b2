#include <doctest.h>

#include <cmath>
#include <limits>

#include "cdgraph/report.hpp"
#include "support/support.hpp"

using namespace cdgraph;

namespace {

VertexFunction vec(std::initializer_list<double> v) {
    VertexFunction f(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) f[i++] = x;
    return f;
}

std::vector<std::string> keys(const Json& j) {
    std::vector<std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
    return out;
}

}  // namespace

TEST_CASE("numbers keep 15 significant digits") {
    CHECK(number(0.1).get<double>() == 0.1);
    CHECK(dump(number(1.0 / 3.0)) == "0.333333333333333\n");
    CHECK(dump(number(2.0)) == "2.0\n");
    CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(number(std::nan("")) == "nan");
    CHECK(dump(Json{{"a", 1}}) == "{\n  \"a\": 1\n}\n");
}

TEST_CASE("vertex functions and metrics") {
    auto p2 = testsupport::path_graph(2);
    auto j = vertex_function_json(p2, vec({1, 4}));
    CHECK(keys(j) == std::vector<std::string>{"v0", "v1"});
    CHECK(j["v1"] == 4.0);
    auto m = to_json(graph_metrics(p2));
    CHECK(keys(m) == std::vector<std::string>{"degree", "D_mu", "D_w", "mu_max", "w_min", "vol_total", "diameter"});
    CHECK(m["diameter"] == 1);
    CHECK(m["vol_total"] == 2.0);
}

TEST_CASE("curvature and verify reports") {
    auto p2 = testsupport::path_graph(2);
    auto r = cde_curvature(p2, 2.0);
    auto j = to_json(p2, r);
    CHECK(j["kind"] == "CDE");
    CHECK_FALSE(j.contains("psi"));
    CHECK(j["per_vertex"].size() == 2);
    CHECK(j["per_vertex"][0]["vertex"] == "v0");
    CHECK(j["min_k_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(j["per_vertex"][1]["witness"].contains("v0"));

    auto v = cde_verify(p2, 2.0, 1.5);
    auto jv = to_json(p2, v);
    CHECK(jv["holds"] == false);
    REQUIRE(jv.contains("violation"));
    CHECK(jv["violation"]["confirmed"] == true);
    auto ok = to_json(p2, cde_verify(p2, 2.0, -1.0));
    CHECK(ok["holds"] == true);
    CHECK_FALSE(ok.contains("violation"));
    CHECK(ok["margin"]["v0"].get<double>() == doctest::Approx(2.0).epsilon(1e-6));

    auto sqrt = PsiFunction::builtin("sqrt");
    auto js = to_json(p2, cdpsi_curvature(p2, sqrt, 2.0));
    CHECK(js["kind"] == "CDpsi");
    CHECK(js["psi"] == "sqrt");
}

TEST_CASE("estimate report layout") {
    auto p2 = testsupport::path_graph(2);
    auto h = certify_cde(p2, 2, 0.1);
    auto r = check_cde_estimate(p2, vec({1, 4}), h, std::nullopt, {0.5, 1.0});
    auto j = to_json(p2, r);
    CHECK(keys(j) == std::vector<std::string>{"theorem_id", "holds", "hypothesis_verified", "min_slack",
                                              "min_slack_by_assertion", "witness", "hypothesis", "constants",
                                              "notes", "grid", "points"});
    CHECK(j["theorem_id"] == "cde-global");
    CHECK(j["holds"] == true);
    CHECK(j["hypothesis"]["condition"] == "CDE");
    CHECK(j["hypothesis"]["certified"] == true);
    CHECK(j["grid"]["times"] == Json::array({0.5, 1.0}));
    CHECK(j["grid"]["vertices"] == Json::array({"v0", "v1"}));
    CHECK(j["points"].size() == 4);
    CHECK(j["points"][0]["assertion"] == "gradient");
    CHECK_FALSE(j["points"][0].contains("counts"));
    CHECK(j["witness"]["slack"] == j["min_slack"]);
    CHECK(j["min_slack_by_assertion"]["gradient"] == j["min_slack"]);
    CHECK(j["constants"]["gradient_constant"].get<double>() == doctest::Approx(std::sqrt(0.2)));

    // Reports without points carry a null witness.
    EstimateReport empty;
    empty.finalize();
    auto je = to_json(p2, empty);
    CHECK(je["witness"].is_null());
    CHECK(je["hypothesis"].is_null());
    CHECK(je["holds"] == false);
    CHECK(je["min_slack"] == "inf");
}

TEST_CASE("points outside the minimum are flagged") {
    auto p2 = testsupport::path_graph(2);
    auto loglin = PsiFunction::builtin("loglin");
    auto h = certify_cdpsi(p2, loglin, 2, 500);
    HeatTypeOptions o;
    o.sharp = false;
    auto r = check_heat_type(p2, loglin, vec({1, 4}), Forcing::constant(0), 1, h, o, {1.0});
    auto j = to_json(p2, r);
    int stated = 0;
    for (const auto& p : j["points"])
        if (p["assertion"] == "stated-bound") {
            CHECK(p["counts"] == false);
            ++stated;
        }
    CHECK(stated == 2);
    CHECK(j["hypothesis"]["psi"] == "loglin");
}
