#include "cdgraph/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "cdgraph/optimize.hpp"

namespace cdgraph {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                fn(i);
            }
        });
    }
}

// Pushes log f on the 1-ball away from the constant direction.
void exclude_constant(std::span<double> z, std::size_t inner) {
    double m = 0.0;
    for (std::size_t i = 0; i < inner; ++i) {
        m = std::max(m, std::abs(z[i]));
    }
    if (m >= kConstantExclusion) {
        return;
    }
    if (m == 0.0) {
        z[0] = kConstantExclusion;
        return;
    }
    for (std::size_t i = 0; i < inner; ++i) {
        z[i] *= kConstantExclusion / m;
    }
}

template <typename Ratio>
LocalCurvature minimize_ratio(const WeightedGraph& g, Vertex x, const CurvatureOptions& opts, Ratio&& ratio) {
    if (g.neighbors(x).empty()) {
        throw OptimizerError("vertex '" + g.id(x) + "' has no neighbours");
    }
    const auto coords = local_coordinates(g, x);
    std::size_t inner = 0;
    while (inner < coords.size() && g.distance(x, coords[inner]) == 1) {
        ++inner;
    }
    const std::size_t dim = coords.size();

    VertexFunction f = VertexFunction::Ones(g.size());
    std::vector<double> z(dim);
    auto load = [&](std::span<const double> point) {
        std::copy(point.begin(), point.end(), z.begin());
        exclude_constant(z, inner);
        for (std::size_t i = 0; i < dim; ++i) {
            f[coords[i]] = std::exp(z[i]);
        }
    };
    optimize::Objective objective = [&](std::span<const double> point) {
        load(point);
        return ratio(f);
    };

    optimize::Box box{std::vector<double>(dim, -opts.log_bound), std::vector<double>(dim, opts.log_bound)};
    optimize::MultistartOptions ms;
    ms.starts = opts.starts;
    ms.seed = splitmix64(opts.seed ^ splitmix64(x + 1));
    ms.local.ftol = opts.ftol;

    std::mt19937_64 rng(ms.seed ^ 0x5bd1e995ULL);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<std::vector<double>> anchors{std::vector<double>(dim, 0.0)};
    for (int a = 0; a < 3; ++a) {
        std::vector<double> p(dim);
        for (auto& v : p) {
            v = jitter(rng);
        }
        anchors.push_back(std::move(p));
    }
    const auto best = optimize::multistart(objective, box, anchors, ms);
    if (!std::isfinite(best.value)) {
        throw OptimizerError("curvature search at '" + g.id(x) + "' produced no finite value");
    }
    load(best.x);
    return {x, best.value, f, best.evaluations};
}

}  // namespace

double cde_ratio(const WeightedGraph& g, const VertexFunction& f, Vertex x, double n) {
    const double lap = laplacian(g, f, x);
    const double num = gamma2(g, f, x, Gamma2Variant::Tilde) - lap * lap / n;
    return num / std::max(gamma(g, f, x), kGammaFloor);
}

double cdpsi_ratio(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x,
                   double n) {
    const double lap = psi_laplacian(g, psi, f, x);
    const double num = gamma2_psi(g, psi, f, x) - lap * lap / n;
    return num / std::max(gamma_psi(g, psi, f, x), kGammaFloor);
}

std::vector<Vertex> local_coordinates(const WeightedGraph& g, Vertex x) {
    std::vector<Vertex> inner;
    std::vector<Vertex> outer;
    for (Vertex v = 0; v < g.size(); ++v) {
        const int d = g.distance(x, v);
        if (d == 1) {
            inner.push_back(v);
        } else if (d == 2) {
            outer.push_back(v);
        }
    }
    inner.insert(inner.end(), outer.begin(), outer.end());
    return inner;
}

LocalCurvature cde_k_at(const WeightedGraph& g, Vertex x, double n, const CurvatureOptions& opts) {
    if (!(n > 0.0)) {
        throw OptimizerError("dimension n must be positive");
    }
    return minimize_ratio(g, x, opts, [&](const VertexFunction& f) { return cde_ratio(g, f, x, n); });
}

LocalCurvature cdpsi_k_at(const WeightedGraph& g, const PsiFunction& psi, Vertex x, double n,
                          const CurvatureOptions& opts) {
    if (!(n > 0.0)) {
        throw OptimizerError("dimension n must be positive");
    }
    if (!psi.concave()) {
        throw PsiError("psi '" + psi.name() + "' is not concave");
    }
    return minimize_ratio(g, x, opts, [&](const VertexFunction& f) { return cdpsi_ratio(g, psi, f, x, n); });
}

double CurvatureReport::min_k_star() const {
    return argmin().k_star;
}

const LocalCurvature& CurvatureReport::argmin() const {
    if (per_vertex.empty()) {
        throw OptimizerError("empty curvature report");
    }
    return *std::min_element(per_vertex.begin(), per_vertex.end(),
                             [](const auto& a, const auto& b) { return a.k_star < b.k_star; });
}

namespace {

template <typename PerVertex>
CurvatureReport collect(const WeightedGraph& g, const CurvatureOptions& opts, std::vector<Vertex> vertices,
                        PerVertex&& per_vertex) {
    if (vertices.empty()) {
        for (Vertex v = 0; v < g.size(); ++v) {
            vertices.push_back(v);
        }
    }
    CurvatureReport report;
    report.tolerance = opts.ftol;
    report.per_vertex.resize(vertices.size());
    parallel_for(vertices.size(), opts.threads,
                 [&](std::size_t i) { report.per_vertex[i] = per_vertex(vertices[i]); });
    return report;
}

}  // namespace

CurvatureReport cde_curvature(const WeightedGraph& g, double n, const CurvatureOptions& opts,
                              const std::vector<Vertex>& vertices) {
    auto report = collect(g, opts, vertices, [&](Vertex x) { return cde_k_at(g, x, n, opts); });
    report.kind = CurvatureKind::CDE;
    report.n = n;
    return report;
}

CurvatureReport cdpsi_curvature(const WeightedGraph& g, const PsiFunction& psi, double n,
                                const CurvatureOptions& opts, const std::vector<Vertex>& vertices) {
    auto report = collect(g, opts, vertices, [&](Vertex x) { return cdpsi_k_at(g, psi, x, n, opts); });
    report.kind = CurvatureKind::CDPsi;
    report.psi_name = psi.name();
    report.n = n;
    return report;
}

double cde_defect(const WeightedGraph& g, const VertexFunction& f, Vertex x, double n, double K) {
    const double lap = laplacian(g, f, x);
    return gamma2(g, f, x, Gamma2Variant::Tilde) - lap * lap / n - K * gamma(g, f, x);
}

double cdpsi_defect(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x,
                    double n, double K) {
    const double lap = psi_laplacian(g, psi, f, x);
    return gamma2_psi(g, psi, f, x) - lap * lap / n - K * gamma_psi(g, psi, f, x);
}

namespace {

template <typename Defect>
VerifyResult verdict(CurvatureReport report, double n, double K, double tol, Defect&& defect) {
    VerifyResult r;
    r.n = n;
    r.K = K;
    r.tolerance = tol;
    for (const auto& lc : report.per_vertex) {
        r.margin.push_back(lc.k_star - K);
    }
    const auto& worst = report.argmin();
    r.holds = worst.k_star >= K - tol;
    if (!r.holds) {
        r.violation_vertex = worst.vertex;
        r.witness = worst.witness;
        r.violation_confirmed = defect(worst.witness, worst.vertex) < 0.0;
    }
    r.report = std::move(report);
    return r;
}

}  // namespace

VerifyResult cde_verify(const WeightedGraph& g, double n, double K, const CurvatureOptions& opts, double tol,
                        const std::vector<Vertex>& vertices) {
    return verdict(cde_curvature(g, n, opts, vertices), n, K, tol,
                   [&](const VertexFunction& f, Vertex x) { return cde_defect(g, f, x, n, K); });
}

VerifyResult cdpsi_verify(const WeightedGraph& g, const PsiFunction& psi, double n, double K,
                          const CurvatureOptions& opts, double tol, const std::vector<Vertex>& vertices) {
    return verdict(cdpsi_curvature(g, psi, n, opts, vertices), n, K, tol,
                   [&](const VertexFunction& f, Vertex x) { return cdpsi_defect(g, psi, f, x, n, K); });
}

namespace {

// log^2(s)/psi_bar(s) at s = 1 + d, with s - 1 taken from the rounded s so
// numerator and denominator see the same point.
double harnack_ratio(const PsiFunction& psi, double d, double* bar_out = nullptr) {
    const double s = 1.0 + d;
    const double exact_d = s - 1.0;
    const double l = std::log1p(exact_d);
    const double bar = psi_bar_value(psi, s);
    if (bar_out) {
        *bar_out = bar;
    }
    return l * l / bar;
}

}  // namespace

double harnack_constant(const PsiFunction& psi) {
    // Grid in e = log10(s - 1).
    constexpr int kGrid = 2001;
    constexpr double kLo = -6.0;
    constexpr double kHi = 12.0;
    std::vector<double> ratio(kGrid);
    int nonpositive = 0;
    double bar_scale = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double e = kLo + (kHi - kLo) * i / (kGrid - 1);
        double bar = 0.0;
        ratio[i] = harnack_ratio(psi, std::pow(10.0, e), &bar);
        const double d = std::pow(10.0, e);
        bar_scale = std::max(bar_scale, std::abs(bar) / (d * d + d));
        if (!(bar > 0.0)) {
            ++nonpositive;
        }
    }
    if (nonpositive == kGrid || bar_scale < 1e-14) {
        throw PsiError("undefined Harnack constant");
    }
    if (nonpositive > 0) {
        return std::numeric_limits<double>::infinity();
    }
    // Ratio still growing at the far end: divergent supremum.
    const double r10 = harnack_ratio(psi, 1e10);
    const double r12 = harnack_ratio(psi, 1e12);
    if (r12 > 2.0 * r10 && r12 > ratio[kGrid / 2]) {
        return std::numeric_limits<double>::infinity();
    }

    const auto best = std::max_element(ratio.begin(), ratio.end()) - ratio.begin();
    double interior = ratio[best];
    if (best > 0 && best < kGrid - 1) {
        // golden-section refinement on the bracketing cells
        const double step = (kHi - kLo) / (kGrid - 1);
        double a = kLo + step * (best - 1);
        double b = kLo + step * (best + 1);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        auto eval = [&](double e) { return harnack_ratio(psi, std::pow(10.0, e)); };
        double fc = eval(c);
        double fd = eval(d);
        for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = eval(d);
            }
        }
        interior = std::max({interior, fc, fd});
    }

    // Limit at s -> 1+: psi_bar(1 + d) ~ -psi''(1) d^2 / 2, so the ratio tends
    // to 2 / (-psi''(1)). psi''(1) by central differences of psi' with
    // Richardson extrapolation in h^2; large steps keep rounding near 1e-13.
    constexpr int kLevels = 6;
    double table[kLevels];
    for (int i = 0; i < kLevels; ++i) {
        const double h = 0.1 / std::ldexp(1.0, i);
        table[i] = (psi.derivative(1.0 + h) - psi.derivative(1.0 - h)) / (2.0 * h);
    }
    for (int m = 1; m < kLevels; ++m) {
        const double f = std::ldexp(1.0, 2 * m);
        for (int i = kLevels - 1; i >= m; --i) {
            table[i] = (f * table[i] - table[i - 1]) / (f - 1.0);
        }
    }
    const double curvature = -table[kLevels - 1];
    const double boundary = curvature > 1e-12 ? 2.0 / curvature : std::numeric_limits<double>::infinity();
    return std::max(interior, boundary);
}

SqrtBoundCheck sqrt_bound_check(const WeightedGraph& g, const VertexFunction& f, Vertex x) {
    require_positive_near(g, f, x, 1);
    SqrtBoundCheck r;
    r.applicable = laplacian(g, f, x) < 0.0;
    if (!r.applicable) {
        return r;
    }
    const auto m = graph_metrics(g);
    const VertexFunction sq = f.array().square();
    r.lhs = tilde_sum(g, sq, x);
    r.rhs = m.d_mu * m.d_w * f[x] * f[x];
    r.holds = r.lhs < r.rhs;
    return r;
}

double psi_gradient_bound(const WeightedGraph& g, const PsiFunction& psi) {
    if (!psi.concave() || !psi.positive() || !psi.increasing()) {
        throw PsiError("inadmissible psi '" + psi.name() + "': needs concave psi with psi > 0 and psi' > 0");
    }
    const auto m = graph_metrics(g);
    const double target = psi.at_one() * m.d_w;
    const double inv = psi.inverse(target);
    return m.d_mu * (psi.derivative_at_one() * (inv - 1.0) + psi.at_one());
}

PsiGammaBoundCheck psi_gamma_bound_check(const WeightedGraph& g, const PsiFunction& psi,
                                         const VertexFunction& f, Vertex x) {
    PsiGammaBoundCheck r;
    r.bound = psi_gradient_bound(g, psi);
    r.applicable = psi_laplacian(g, psi, f, x) < 0.0;
    r.gamma_psi = gamma_psi(g, psi, f, x);
    if (r.applicable) {
        r.holds = r.gamma_psi <= r.bound + 1e-12;
    }
    return r;
}

}  // namespace cdgraph
