#include "cdgraph/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>

#include "cdgraph/curvature.hpp"
#include "cdgraph/estimates.hpp"
#include "cdgraph/gamma.hpp"
#include "cdgraph/heat.hpp"
#include "cdgraph/io.hpp"
#include "cdgraph/report.hpp"

namespace cdgraph {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

const std::vector<std::string> kTheorems = {
    "cde-global",    "cde-local",      "cdpsi-alpha",    "cdpsi-alpha-local", "cdpsi-sharp",
    "cdpsi-sharp-local", "kernel-cde", "kernel-cdpsi",   "harnack-cde",       "harnack-cdpsi",
    "heattype-alpha", "heattype-sharp", "log-harnack",
};

// A numeric flag that remembers whether it was given.
struct Flag {
    double value = 0.0;
    std::vector<CLI::Option*> opts;
    bool given() const {
        return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
    }
};

struct RunConfig {
    std::string command;
    std::string graph;
    std::string format = "edge-list";
    std::string psi;
    std::string u0;
    std::string f;
    std::string g;
    std::string op;
    std::string at;
    std::string theorem;
    std::string c;
    std::string x0;
    Flag n, K, alpha, a, sigma, t, t_max, R;
    int steps = 100;
    int starts = 32;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
    bool force = false;

    Json to_json() const {
        Json j{{"command", command}};
        auto str = [&](const char* key, const std::string& v) {
            if (!v.empty()) {
                j[key] = v;
            }
        };
        auto num = [&](const char* key, const Flag& f) {
            if (f.given()) {
                j[key] = number(f.value);
            }
        };
        str("theorem", theorem);
        str("graph", graph);
        if (!graph.empty()) {
            j["format"] = format;
        }
        str("psi", psi);
        str("u0", u0);
        str("f", f);
        str("g", g);
        str("op", op);
        str("at", at);
        num("n", n);
        num("K", K);
        num("alpha", alpha);
        num("a", a);
        str("x0", x0);
        num("R", R);
        str("c", c);
        num("sigma", sigma);
        num("t", t);
        num("t_max", t_max);
        j["seed"] = seed;
        j["threads"] = threads;
        j["starts"] = starts;
        j["force"] = force;
        return j;
    }
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        throw UsageError("cannot write '" + cfg.out + "'");
    }
    file << text;
}

Json envelope(const RunConfig& cfg) {
    return Json{{"schema_version", kSchemaVersion}, {"config", cfg.to_json()}};
}

WeightedGraph load(const RunConfig& cfg) {
    if (cfg.graph.empty()) {
        throw UsageError("--graph is required");
    }
    return load_graph(cfg.graph, parse_graph_format(cfg.format));
}

CurvatureOptions curvature_options(const RunConfig& cfg) {
    CurvatureOptions o;
    o.seed = cfg.seed;
    o.threads = cfg.threads;
    o.starts = cfg.starts;
    return o;
}

VertexFunction initial_datum(const RunConfig& cfg, const WeightedGraph& g) {
    if (!cfg.u0.empty()) {
        return load_vertex_function(cfg.u0, g);
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(0.5, 2.0);
    VertexFunction u(g.size());
    for (Vertex v = 0; v < g.size(); ++v) {
        u[v] = dist(rng);
    }
    return u;
}

void require_positive(const Flag& f, const char* name) {
    if (f.given() && !(f.value > 0.0)) {
        throw UsageError(std::string(name) + " must be positive");
    }
}

double required(const Flag& f, const char* name) {
    if (!f.given()) {
        throw UsageError(std::string(name) + " is required");
    }
    return f.value;
}

// ---- info / ops / hpsi / curvature / heat -------------------------------

int run_info(const RunConfig& cfg, std::ostream& out) {
    const auto g = load(cfg);
    auto j = envelope(cfg);
    j["vertices"] = g.ids();
    j["symmetric_weights"] = g.symmetric_weights();
    j["metrics"] = to_json(graph_metrics(g));
    emit(cfg, dump(j), out);
    return kExitHolds;
}

int run_ops(const RunConfig& cfg, std::ostream& out) {
    static const std::vector<std::string> ops = {"laplacian", "gamma",     "gamma2",    "gamma2-tilde",
                                                 "psi-laplacian", "gamma-psi", "omega-psi", "gamma2-psi"};
    if (std::find(ops.begin(), ops.end(), cfg.op) == ops.end()) {
        throw UsageError("unknown operator '" + cfg.op + "'");
    }
    const bool needs_psi = cfg.op.find("psi") != std::string::npos;
    if (needs_psi && cfg.psi.empty()) {
        throw UsageError("--psi is required for " + cfg.op);
    }
    if (cfg.f.empty() || cfg.at.empty()) {
        throw UsageError("--f and --at are required");
    }
    const auto g = load(cfg);
    const auto f = load_vertex_function(cfg.f, g);
    const Vertex x = g.index(cfg.at);
    double value = 0.0;
    if (cfg.op == "laplacian") {
        value = laplacian(g, f, x);
    } else if (cfg.op == "gamma") {
        value = cfg.g.empty() ? gamma(g, f, x) : gamma(g, f, load_vertex_function(cfg.g, g), x);
    } else if (cfg.op == "gamma2") {
        value = gamma2(g, f, x, Gamma2Variant::Plain);
    } else if (cfg.op == "gamma2-tilde") {
        value = gamma2(g, f, x, Gamma2Variant::Tilde);
    } else {
        const auto psi = PsiFunction::parse(cfg.psi);
        if (cfg.op == "psi-laplacian") {
            value = psi_laplacian(g, psi, f, x);
        } else if (cfg.op == "gamma-psi") {
            value = gamma_psi(g, psi, f, x);
        } else if (cfg.op == "omega-psi") {
            value = omega_psi(g, psi, f, x);
        } else {
            value = gamma2_psi(g, psi, f, x);
        }
    }
    auto j = envelope(cfg);
    j["op"] = cfg.op;
    j["vertex"] = cfg.at;
    j["value"] = number(value);
    emit(cfg, dump(j), out);
    return kExitHolds;
}

int run_hpsi(const RunConfig& cfg, std::ostream& out) {
    if (cfg.psi.empty()) {
        throw UsageError("--psi is required");
    }
    const auto psi = PsiFunction::parse(cfg.psi);
    const double H = harnack_constant(psi);
    if (cfg.out.empty()) {
        out << format_number(H) << "\n";
    } else {
        auto j = envelope(cfg);
        j["psi"] = psi.name();
        j["H_psi"] = number(H);
        emit(cfg, dump(j), out);
    }
    return kExitHolds;
}

int run_curvature(const RunConfig& cfg, std::ostream& out) {
    const double n = required(cfg.n, "--n");
    require_positive(cfg.n, "--n");
    const auto g = load(cfg);
    const auto opts = curvature_options(cfg);
    auto j = envelope(cfg);
    bool holds = true;
    std::optional<PsiFunction> psi;
    if (!cfg.psi.empty()) {
        psi = PsiFunction::parse(cfg.psi);
    }
    if (cfg.K.given()) {
        const auto v = psi ? cdpsi_verify(g, *psi, n, cfg.K.value, opts) : cde_verify(g, n, cfg.K.value, opts);
        j["report"] = to_json(g, v.report);
        j["verify"] = to_json(g, v);
        holds = v.holds;
    } else {
        const auto r = psi ? cdpsi_curvature(g, *psi, n, opts) : cde_curvature(g, n, opts);
        j["report"] = to_json(g, r);
    }
    emit(cfg, dump(j), out);
    return holds ? kExitHolds : kExitFailed;
}

int run_heat_kernel(const RunConfig& cfg, std::ostream& out) {
    const double t = required(cfg.t, "--t");
    require_positive(cfg.t, "--t");
    const auto g = load(cfg);
    const auto k = heat_kernel(g, t);
    std::string text = "x";
    for (const auto& id : g.ids()) {
        text += "," + id;
    }
    text += "\n";
    for (Vertex x = 0; x < g.size(); ++x) {
        text += g.id(x);
        for (Vertex y = 0; y < g.size(); ++y) {
            text += "," + format_number(k.p(x, y));
        }
        text += "\n";
    }
    emit(cfg, text, out);
    return kExitHolds;
}

int run_heat_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const double t_max = required(cfg.t_max, "--t-max");
    require_positive(cfg.t_max, "--t-max");
    if (cfg.steps < 1) {
        throw UsageError("--steps must be positive");
    }
    if (cfg.u0.empty()) {
        throw UsageError("--u0 is required");
    }
    const auto g = load(cfg);
    const auto u0 = load_vertex_function(cfg.u0, g);
    std::vector<double> times(cfg.steps + 1);
    for (int i = 0; i <= cfg.steps; ++i) {
        times[i] = t_max * i / cfg.steps;
    }
    const Trajectory traj = cfg.c.empty()
                                ? heat_solve(g, u0, times)
                                : nonlinear_solve(g, u0, Forcing::parse(cfg.c), cfg.sigma.given() ? cfg.sigma.value : 1.0,
                                                  times);
    for (const auto& w : traj.warnings) {
        err << "warning: " << w << "\n";
    }
    std::string text = "t";
    for (const auto& id : g.ids()) {
        text += "," + id;
    }
    text += "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        text += format_number(traj.times[k]);
        for (Vertex v = 0; v < g.size(); ++v) {
            text += "," + format_number(traj.values[k][v]);
        }
        text += "\n";
    }
    emit(cfg, text, out);
    return kExitHolds;
}

// ---- check ----------------------------------------------------------------

std::string default_psi(const std::string& id) {
    if (id == "cdpsi-alpha" || id == "log-harnack") {
        return "log";
    }
    if (id.rfind("heattype", 0) == 0) {
        return "loglin";
    }
    if (id.rfind("cdpsi", 0) == 0 || id == "kernel-cdpsi" || id == "harnack-cdpsi") {
        return "sqrt";
    }
    return "";
}

bool uses_psi(const std::string& id) {
    return !default_psi(id).empty();
}

bool uses_alpha(const std::string& id) {
    return id == "cdpsi-alpha" || id == "cdpsi-alpha-local" || id == "heattype-alpha" || id == "harnack-cde" ||
           id == "harnack-cdpsi";
}

bool is_local(const std::string& id) {
    return id == "cde-local" || id == "cdpsi-alpha-local" || id == "cdpsi-sharp-local";
}

// Everything checkable without touching the graph file.
void validate_check(const RunConfig& cfg, const std::string& id) {
    if (std::find(kTheorems.begin(), kTheorems.end(), id) == kTheorems.end()) {
        throw UsageError("unknown theorem id '" + id + "'");
    }
    required(cfg.n, "--n");
    required(cfg.K, "--K");
    require_positive(cfg.n, "--n");
    require_positive(cfg.K, "--K");
    require_positive(cfg.a, "--a");
    if (cfg.alpha.given()) {
        if (!uses_alpha(id)) {
            throw UsageError("--alpha does not apply to " + id);
        }
        if (!(cfg.alpha.value > 0.0 && cfg.alpha.value < 1.0)) {
            throw UsageError("--alpha must lie in (0, 1)");
        }
    }
    if (is_local(id)) {
        if (cfg.x0.empty() || !cfg.R.given()) {
            throw UsageError(id + " needs --x0 and --R");
        }
        if (cfg.R.value < 1 || cfg.R.value != std::floor(cfg.R.value)) {
            throw UsageError("--R must be a positive integer");
        }
    }
    if (!cfg.psi.empty() && !uses_psi(id)) {
        throw UsageError("--psi does not apply to " + id);
    }
    if ((!cfg.c.empty() || cfg.sigma.given()) && id.rfind("heattype", 0) != 0 && id != "log-harnack") {
        throw UsageError("--c/--sigma apply to heat-type theorems only");
    }
}

class CheckContext {
public:
    CheckContext(const RunConfig& cfg, const WeightedGraph& g) : cfg_(cfg), g_(g), u0_(initial_datum(cfg, g)) {}

    EstimateReport run(const std::string& id) {
        const double n = cfg_.n.value;
        const double K = cfg_.K.value;
        const double alpha = cfg_.alpha.given() ? cfg_.alpha.value : 0.5;
        const auto m = graph_metrics(g_);

        if (id == "cde-global" || id == "cde-local") {
            if (id == "cde-global") {
                return check_cde_estimate(g_, u0_, cde(n, K, {}), std::nullopt);
            }
            const auto scope = local_scope();
            return check_cde_estimate(g_, u0_, cde(n, K, ball(g_, scope.x0, 2 * scope.R).members), scope);
        }
        if (id.rfind("cdpsi", 0) == 0) {
            const auto psi = psi_for(id);
            CdpsiOptions o;
            o.alpha = alpha;
            o.form = id == "cdpsi-alpha"         ? CdpsiForm::Alpha
                     : id == "cdpsi-sharp"       ? CdpsiForm::Sharp
                     : id == "cdpsi-alpha-local" ? CdpsiForm::AlphaLocal
                                                 : CdpsiForm::SharpLocal;
            std::vector<Vertex> where;
            if (is_local(id)) {
                o.scope = local_scope();
                where = ball(g_, o.scope->x0, 2 * o.scope->R).members;
            }
            return check_cdpsi_estimate(g_, psi, u0_, cdpsi(psi, n, K, where), o);
        }
        const double a = cfg_.a.given() ? cfg_.a.value : 1.0;
        if (id == "kernel-cde") {
            return check_kernel_bounds(g_, a, cde(n, K, {}));
        }
        if (id == "kernel-cdpsi") {
            const auto psi = psi_for(id);
            return check_kernel_bounds(g_, a, cdpsi(psi, n, K, {}), &psi);
        }
        const auto pairs = all_pairs(g_, {{1.0, 2.0}, {0.5, 3.0}});
        if (id == "harnack-cde") {
            const auto h = cde(n, K, {});
            const auto flow = field_of(g_, heat_solve(g_, u0_, {0.0}));
            SpaceTimeField f;
            f.value = [flow](double t) { return VertexFunction(flow.value(t).cwiseSqrt()); };
            f.rate = [flow](double t) {
                const VertexFunction u = flow.value(t);
                return VertexFunction(flow.rate(t).array() / (2.0 * u.array().sqrt()));
            };
            CdeHarnackParams p{n, std::sqrt(0.5 * n * K * m.d_mu * (m.d_w + 1.0)), alpha};
            auto r = check_harnack_cde(g_, f, p, pairs);
            attach(r, h);
            return r;
        }
        if (id == "harnack-cdpsi") {
            const auto psi = psi_for(id);
            const auto h = cdpsi(psi, n, K, {});
            const double dp = psi.derivative_at_one();
            if (!(dp > 0.0)) {
                throw PsiError("inadmissible psi '" + psi.name() + "': needs psi'(1) > 0");
            }
            PsiHarnackParams p;
            if (psi.positive() && psi.increasing()) {
                p = {std::min(1.0, 1.0 / dp), n / (2.0 * dp), std::sqrt(n * K * psi_gradient_bound(g_, psi)) / dp};
            } else {
                p = {(1.0 - alpha) / dp, n / (2.0 * (1.0 - alpha) * dp), K * n / (alpha * dp)};
            }
            auto r = check_harnack_cdpsi(g_, psi, field_of(g_, heat_solve(g_, u0_, {0.0})), p, pairs);
            attach(r, h);
            return r;
        }
        const auto forcing = Forcing::parse(cfg_.c.empty() ? "0" : cfg_.c);
        const double sigma = cfg_.sigma.given() ? cfg_.sigma.value : 1.0;
        if (id == "heattype-sharp" || id == "heattype-alpha") {
            const auto psi = psi_for(id);
            HeatTypeOptions o;
            o.sharp = id == "heattype-sharp";
            o.alpha = alpha;
            return check_heat_type(g_, psi, u0_, forcing, sigma, cdpsi(psi, n, K, {}), o);
        }
        // log-harnack along the heat-type flow, premise from the sharp heat-type bound
        const auto psi = psi_for(id);
        const auto h = cdpsi(psi, n, K, {});
        if (!forcing_admissible(forcing, sigma, default_time_grid().back())) {
            throw EstimateError("inadmissible (c, sigma): need c >= 0 with sigma <= 1 or c <= 0 with sigma >= 1");
        }
        const auto grid = default_time_grid();
        std::vector<double> times{0.0};
        times.insert(times.end(), grid.begin(), grid.end());
        const auto traj = nonlinear_solve(g_, u0_, forcing, sigma, times);
        std::vector<std::pair<Vertex, Vertex>> vertex_pairs;
        for (Vertex x = 0; x < g_.size(); ++x) {
            for (Vertex y = 0; y < g_.size(); ++y) {
                vertex_pairs.emplace_back(x, y);
            }
        }
        EstimateReport merged;
        merged.theorem_id = id;
        for (std::size_t k = 1; k < traj.times.size(); ++k) {
            auto r = check_log_harnack(g_, psi, traj.values[k], n / 2.0, K * n, traj.times[k], vertex_pairs);
            if (merged.constants.empty()) {
                merged.constants = r.constants;
            }
            for (auto& p : r.points) {
                merged.add(std::move(p));
            }
            for (auto& note : r.notes) {
                if (std::find(merged.notes.begin(), merged.notes.end(), note) == merged.notes.end()) {
                    merged.notes.push_back(note);
                }
            }
        }
        merged.notes.insert(merged.notes.end(), traj.warnings.begin(), traj.warnings.end());
        merged.finalize();
        attach(merged, h);
        return merged;
    }

private:
    LocalScope local_scope() const {
        return {g_.index(cfg_.x0), static_cast<int>(cfg_.R.value)};
    }

    PsiFunction psi_for(const std::string& id) const {
        return PsiFunction::parse(cfg_.psi.empty() ? default_psi(id) : cfg_.psi);
    }

    Hypothesis finish(Hypothesis h) const {
        if (!h.certified && !cfg_.force) {
            throw CertificationError("(n, K) = (" + format_number(h.n) + ", " + format_number(h.K) +
                                     ") is not certified: min K* = " + format_number(h.min_k_star) +
                                     " < -K (use --force to run anyway)");
        }
        h.forced = !h.certified && cfg_.force;
        return h;
    }

    Hypothesis cde(double n, double K, const std::vector<Vertex>& where) {
        const std::string key = "cde/" + vertex_key(where);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, certify_cde(g_, n, K, curvature_options(cfg_), where)).first;
        }
        return finish(it->second);
    }

    Hypothesis cdpsi(const PsiFunction& psi, double n, double K, const std::vector<Vertex>& where) {
        const std::string key = "cdpsi/" + psi.name() + "/" + vertex_key(where);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, certify_cdpsi(g_, psi, n, K, curvature_options(cfg_), where)).first;
        }
        return finish(it->second);
    }

    static std::string vertex_key(const std::vector<Vertex>& where) {
        std::string key;
        for (Vertex v : where) {
            key += std::to_string(v) + ",";
        }
        return key;
    }

    void attach(EstimateReport& r, const Hypothesis& h) const {
        r.hypothesis = h;
        if (h.forced) {
            r.hypothesis_verified = false;
            r.notes.insert(r.notes.begin(), "hypothesis unverified");
        }
    }

    const RunConfig& cfg_;
    const WeightedGraph& g_;
    VertexFunction u0_;
    std::map<std::string, Hypothesis> cache_;
};

int run_check(RunConfig cfg, std::ostream& out) {
    const std::string id = cfg.theorem;
    if (id != "all") {
        validate_check(cfg, id);
        const auto g = load(cfg);
        CheckContext ctx(cfg, g);
        const auto report = ctx.run(id);
        auto j = envelope(cfg);
        j["report"] = to_json(g, report);
        emit(cfg, dump(j), out);
        return report.holds ? kExitHolds : kExitFailed;
    }

    required(cfg.n, "--n");
    required(cfg.K, "--K");
    require_positive(cfg.n, "--n");
    require_positive(cfg.K, "--K");
    require_positive(cfg.a, "--a");
    if (!cfg.psi.empty() || cfg.alpha.given()) {
        throw UsageError("check all uses the default psi and alpha of each theorem");
    }
    const auto g = load(cfg);
    CheckContext ctx(cfg, g);
    auto j = envelope(cfg);
    Json reports = Json::array();
    Json summary = Json::array();
    bool all_hold = true;
    std::string table = "theorem              status     min_slack\n";
    for (const auto& id : kTheorems) {
        if (is_local(id) && (cfg.x0.empty() || !cfg.R.given())) {
            continue;
        }
        std::string status;
        Json entry{{"theorem_id", id}};
        try {
            const auto report = ctx.run(id);
            status = report.holds ? "holds" : "FAILS";
            entry["holds"] = report.holds;
            entry["min_slack"] = number(report.min_slack);
            reports.push_back(to_json(g, report));
            all_hold = all_hold && report.holds;
            std::string row = id;
            row.resize(21, ' ');
            std::string st = status;
            st.resize(11, ' ');
            table += row + st + format_number(report.min_slack) + "\n";
        } catch (const Error& e) {
            all_hold = false;
            entry["holds"] = false;
            entry["error"] = e.what();
            std::string row = id;
            row.resize(21, ' ');
            table += row + "error      " + e.what() + "\n";
        }
        summary.push_back(entry);
    }
    j["summary"] = summary;
    j["reports"] = reports;
    if (cfg.out.empty()) {
        out << table;
    } else {
        emit(cfg, dump(j), out);
        out << table;
    }
    return all_hold ? kExitHolds : kExitFailed;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Discrete curvature, heat semigroups and gradient estimates on weighted graphs", "cdgraph"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", cfg.out, "Write the report to this file");
    app.add_option("--seed", cfg.seed, "Seed for the curvature search and random data");
    app.add_option("--threads", cfg.threads, "Worker threads for per-vertex work")->check(CLI::PositiveNumber);

    auto graph_opts = [&](CLI::App* sub) {
        sub->add_option("--graph", cfg.graph, "Graph file");
        sub->add_option("--format", cfg.format, "edge-list or json");
    };

    auto* info = app.add_subcommand("info", "Graph metrics");
    graph_opts(info);

    auto* ops = app.add_subcommand("ops", "Evaluate a discrete operator");
    auto* eval = ops->add_subcommand("eval", "Evaluate one operator at one vertex");
    ops->require_subcommand(1);
    graph_opts(eval);
    eval->add_option("--op", cfg.op, "Operator name")->required();
    eval->add_option("--psi", cfg.psi, "sqrt, log, loglin, linear or poly:a0,a1,...");
    eval->add_option("--f", cfg.f, "Vertex function CSV");
    eval->add_option("--g", cfg.g, "Second vertex function CSV (gamma only)");
    eval->add_option("--at", cfg.at, "Vertex id");

    auto* curv = app.add_subcommand("curvature", "Optimal curvature constants");
    graph_opts(curv);
    curv->add_option("--psi", cfg.psi, "Use CDpsi with this psi instead of CDE");
    cfg.n.opts.push_back(curv->add_option("--n", cfg.n.value, "Dimension"));
    cfg.K.opts.push_back(curv->add_option("--K", cfg.K.value, "Verify the condition at this K"));
    curv->add_option("--starts", cfg.starts, "Multistart count")->check(CLI::PositiveNumber);

    auto* heat = app.add_subcommand("heat", "Heat kernel and solutions");
    heat->require_subcommand(1);
    auto* kernel = heat->add_subcommand("kernel", "Heat kernel matrix as CSV");
    graph_opts(kernel);
    cfg.t.opts.push_back(kernel->add_option("--t", cfg.t.value, "Time"));
    auto* solve = heat->add_subcommand("solve", "Solution trajectory as CSV");
    graph_opts(solve);
    solve->add_option("--u0", cfg.u0, "Initial datum CSV");
    cfg.t_max.opts.push_back(solve->add_option("--t-max", cfg.t_max.value, "Final time"));
    solve->add_option("--steps", cfg.steps, "Number of output steps");
    solve->add_option("--c", cfg.c, "Forcing c(t): a constant or poly:a0,a1,...");
    cfg.sigma.opts.push_back(solve->add_option("--sigma", cfg.sigma.value, "Exponent of the forcing term"));

    auto* check = app.add_subcommand("check", "Verify a theorem numerically");
    graph_opts(check);
    check->add_option("theorem", cfg.theorem, "Theorem id or 'all'")->required();
    check->add_option("--psi", cfg.psi, "psi for CDpsi theorems");
    cfg.n.opts.push_back(check->add_option("--n", cfg.n.value, "Dimension"));
    cfg.K.opts.push_back(check->add_option("--K", cfg.K.value, "Curvature bound (the condition is CD(n, -K))"));
    cfg.alpha.opts.push_back(check->add_option("--alpha", cfg.alpha.value, "alpha in (0, 1)"));
    check->add_option("--x0", cfg.x0, "Ball centre for local theorems");
    cfg.R.opts.push_back(check->add_option("--R", cfg.R.value, "Ball radius for local theorems"));
    cfg.a.opts.push_back(check->add_option("--a", cfg.a.value, "Time split of the kernel bounds"));
    check->add_option("--c", cfg.c, "Forcing c(t): a constant or poly:a0,a1,...");
    cfg.sigma.opts.push_back(check->add_option("--sigma", cfg.sigma.value, "Exponent of the forcing term"));
    check->add_option("--u0", cfg.u0, "Initial datum CSV (seeded random when absent)");
    check->add_option("--starts", cfg.starts, "Multistart count for certification")->check(CLI::PositiveNumber);
    check->add_flag("--force", cfg.force, "Run even if (n, K) is not certified");

    auto* hpsi = app.add_subcommand("hpsi", "Harnack constant of psi");
    hpsi->add_option("--psi", cfg.psi, "psi");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitHolds;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitHolds;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (info->parsed()) {
            cfg.command = "info";
            return run_info(cfg, out);
        }
        if (eval->parsed()) {
            cfg.command = "ops eval";
            return run_ops(cfg, out);
        }
        if (curv->parsed()) {
            cfg.command = "curvature";
            return run_curvature(cfg, out);
        }
        if (kernel->parsed()) {
            cfg.command = "heat kernel";
            return run_heat_kernel(cfg, out);
        }
        if (solve->parsed()) {
            cfg.command = "heat solve";
            return run_heat_solve(cfg, out, err);
        }
        if (check->parsed()) {
            cfg.command = "check";
            if (cfg.theorem != "all" && cfg.psi.empty()) {
                cfg.psi = default_psi(cfg.theorem);
            }
            return run_check(cfg, out);
        }
        cfg.command = "hpsi";
        return run_hpsi(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return dispatch(args, out, err);
}

}  // namespace cdgraph
