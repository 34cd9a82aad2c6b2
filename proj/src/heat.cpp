#include "cdgraph/heat.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cdgraph/gamma.hpp"
#include "cdgraph/io.hpp"

namespace cdgraph {

Eigen::MatrixXd generator_matrix(const WeightedGraph& g, const std::optional<Ball>& domain) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (Vertex x = 0; x < g.size(); ++x) {
        if (domain && !domain->contains(x)) {
            continue;
        }
        const double inv_mu = 1.0 / g.mu(x);
        for (const auto& nb : g.neighbors(x)) {
            L(x, nb.to) = nb.weight * inv_mu;
        }
        L(x, x) = -g.degree(x) * inv_mu;
    }
    return L;
}

HeatSemigroup::HeatSemigroup(const WeightedGraph& g, std::optional<Ball> domain)
    : graph_(&g), domain_(std::move(domain)), generator_(generator_matrix(g, domain_)) {
    spectral_ = !domain_ && g.symmetric_weights();
    if (!spectral_) {
        return;
    }
    const auto n = static_cast<Eigen::Index>(g.size());
    sqrt_mu_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sqrt_mu_[i] = std::sqrt(g.mu(i));
    }
    // D^{1/2} L D^{-1/2} is symmetric when w is
    Eigen::MatrixXd S = sqrt_mu_.asDiagonal() * generator_ * sqrt_mu_.cwiseInverse().asDiagonal();
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success) {
        throw HeatError("eigendecomposition of the generator failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Eigen::MatrixXd HeatSemigroup::propagator(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw HeatError("time must be nonnegative and finite");
    }
    if (t == 0.0) {
        return Eigen::MatrixXd::Identity(generator_.rows(), generator_.cols());
    }
    if (spectral_) {
        const Eigen::VectorXd decay = (t * eigenvalues_).array().exp();
        const Eigen::MatrixXd E = eigenvectors_ * decay.asDiagonal() * eigenvectors_.transpose();
        return sqrt_mu_.cwiseInverse().asDiagonal() * E * sqrt_mu_.asDiagonal();
    }
    const Eigen::MatrixXd scaled = t * generator_;
    return scaled.exp();
}

double HeatSemigroup::spectral_gap() const {
    if (domain_) {
        throw HeatError("spectral gap is defined for the whole graph only");
    }
    std::vector<double> rates;
    if (spectral_) {
        for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
            rates.push_back(-eigenvalues_[i]);
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(generator_, false);
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            rates.push_back(-solver.eigenvalues()[i].real());
        }
    }
    std::sort(rates.begin(), rates.end());
    const double scale = std::max(1.0, std::abs(rates.back()));
    for (double r : rates) {
        if (r > 1e-10 * scale) {
            return r;
        }
    }
    throw HeatError("generator has no nonzero eigenvalue");
}

HeatKernel heat_kernel(const WeightedGraph& g, const HeatSemigroup& semigroup, double t) {
    if (!(t > 0.0)) {
        throw HeatError("kernel time must be positive");
    }
    HeatKernel k{t, semigroup.propagator(t)};
    for (Vertex y = 0; y < g.size(); ++y) {
        k.p.col(y) /= g.mu(y);
    }
    return k;
}

HeatKernel heat_kernel(const WeightedGraph& g, double t) {
    return heat_kernel(g, HeatSemigroup(g), t);
}

Forcing Forcing::constant(double c) {
    Forcing f;
    f.coeffs_ = {c};
    f.text_ = format_number(c);
    return f;
}

Forcing Forcing::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) {
        throw HeatError("empty forcing polynomial");
    }
    Forcing f;
    f.text_ = "poly:";
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        f.text_ += (i ? "," : "") + format_number(coeffs[i]);
    }
    f.coeffs_ = std::move(coeffs);
    return f;
}

namespace {

double parse_real(std::string_view s, const char* what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
        throw HeatError(std::string("invalid ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

Forcing Forcing::parse(const std::string& text) {
    constexpr std::string_view prefix = "poly:";
    if (text.rfind(prefix, 0) == 0) {
        std::vector<double> coeffs;
        std::stringstream ss(text.substr(prefix.size()));
        std::string item;
        while (std::getline(ss, item, ',')) {
            coeffs.push_back(parse_real(item, "forcing coefficient"));
        }
        return polynomial(std::move(coeffs));
    }
    return constant(parse_real(text, "forcing"));
}

double Forcing::operator()(double t) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

bool Forcing::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double a) { return a == 0.0; });
}

bool forcing_admissible(const Forcing& c, double sigma, double t_max) {
    constexpr int kSamples = 257;
    bool nonneg = true;
    bool nonpos = true;
    for (int i = 0; i < kSamples; ++i) {
        const double v = c(t_max * i / (kSamples - 1));
        nonneg = nonneg && v >= 0.0;
        nonpos = nonpos && v <= 0.0;
    }
    return (nonneg && sigma <= 1.0) || (nonpos && sigma >= 1.0);
}

void require_time_grid(const std::vector<double>& times) {
    if (times.empty() || times.front() != 0.0) {
        throw HeatError("time grid must start at 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
            throw HeatError("time grid must be strictly increasing");
        }
    }
}

namespace {

void require_positive(const WeightedGraph& g, const VertexFunction& u0) {
    if (static_cast<std::size_t>(u0.size()) != g.size()) {
        throw HeatError("initial datum has the wrong size");
    }
    for (Vertex v = 0; v < g.size(); ++v) {
        if (!(u0[v] > 0.0)) {
            throw NonPositiveError("initial datum must be positive at vertex '" + g.id(v) + "'");
        }
    }
}

}  // namespace

Trajectory heat_solve(const WeightedGraph& g, const VertexFunction& u0, const std::vector<double>& times,
                      const std::optional<Ball>& domain) {
    require_positive(g, u0);
    require_time_grid(times);
    const HeatSemigroup semigroup(g, domain);
    Trajectory traj;
    traj.domain = domain;
    traj.times = times;
    for (double t : times) {
        VertexFunction u = t == 0.0 ? u0 : VertexFunction(semigroup.propagator(t) * u0);
        traj.rates.push_back(semigroup.generator() * u);
        traj.values.push_back(std::move(u));
    }
    return traj;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kB4[7] = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100,
                           1.0 / 40};

class HeatTypeRhs {
public:
    HeatTypeRhs(const Eigen::MatrixXd& L, const Forcing& c, double sigma) : L_(L), c_(c), sigma_(sigma) {}

    // Returns false when u leaves the positive cone.
    bool operator()(double t, const VertexFunction& u, VertexFunction& out) const {
        if (!((u.array() > 0.0).all() && u.allFinite())) {
            return false;
        }
        out.noalias() = L_ * u;
        const double ct = c_(t);
        if (ct != 0.0) {
            out.array() += ct * u.array().pow(sigma_);
        }
        return out.allFinite();
    }

private:
    const Eigen::MatrixXd& L_;
    const Forcing& c_;
    double sigma_;
};

}  // namespace

Trajectory nonlinear_solve(const WeightedGraph& g, const VertexFunction& u0, const Forcing& c, double sigma,
                           const std::vector<double>& times, const SolverOptions& opts) {
    require_positive(g, u0);
    require_time_grid(times);
    if (!(opts.tol > 0.0)) {
        throw HeatError("solver tolerance must be positive");
    }
    const Eigen::MatrixXd L = generator_matrix(g);
    const HeatTypeRhs rhs(L, c, sigma);

    Trajectory traj;
    traj.kind = FlowKind::HeatType;
    traj.forcing = c.text();
    traj.sigma = sigma;
    traj.times = times;
    if (!forcing_admissible(c, sigma, times.back())) {
        traj.warnings.push_back("forcing c(t) = " + c.text() + " with sigma = " + format_number(sigma) +
                                " violates the sign condition");
    }

    VertexFunction u = u0;
    VertexFunction rate(u.size());
    rhs(0.0, u, rate);
    traj.values.push_back(u);
    traj.rates.push_back(rate);

    std::array<VertexFunction, 7> k;
    for (auto& ki : k) {
        ki.resize(u.size());
    }
    VertexFunction stage(u.size());
    VertexFunction next(u.size());
    double t = 0.0;
    double h = std::min(1e-2, times.size() > 1 ? times[1] : 1.0);
    k[0] = rate;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double target = times[i];
        while (t < target) {
            const bool last = t + h >= target;
            const double step = last ? target - t : h;
            bool ok = true;
            for (int s = 1; s < 7 && ok; ++s) {
                stage = u;
                for (int j = 0; j < s; ++j) {
                    if (kA[s][j] != 0.0) {
                        stage.noalias() += step * kA[s][j] * k[j];
                    }
                }
                ok = rhs(t + kC[s] * step, stage, k[s]);
            }
            double err = std::numeric_limits<double>::infinity();
            if (ok) {
                next = stage;  // the 7th stage argument is the 5th-order solution
                VertexFunction e = VertexFunction::Zero(u.size());
                for (int j = 0; j < 7; ++j) {
                    const double b5 = j < 6 ? kA[6][j] : 0.0;
                    e.noalias() += step * (b5 - kB4[j]) * k[j];
                }
                err = 0.0;
                for (Eigen::Index v = 0; v < u.size(); ++v) {
                    const double scale = opts.tol * (1.0 + std::max(std::abs(u[v]), std::abs(next[v])));
                    err = std::max(err, std::abs(e[v]) / scale);
                }
            }
            if (!ok || !std::isfinite(err)) {
                h = 0.5 * step;
            } else if (err <= 1.0) {
                t = last ? target : t + step;
                u = next;
                k[0] = k[6];
                const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                // a step shortened to hit the grid does not shrink the next one
                h = last ? std::max(h, step * grow) : step * grow;
                continue;
            } else {
                h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
            }
            if (h < opts.min_step) {
                throw HeatError("step size underflow at t = " + format_number(t) +
                                " (stiff problem or blow-up)");
            }
        }
        rhs(t, u, rate);
        traj.values.push_back(u);
        traj.rates.push_back(rate);
    }
    return traj;
}

SpaceTimeField field_of(const WeightedGraph& g, const Trajectory& traj) {
    if (traj.kind != FlowKind::Heat || traj.times.empty()) {
        throw HeatError("continuous fields are available for heat trajectories only");
    }
    auto semigroup = std::make_shared<HeatSemigroup>(g, traj.domain);
    auto u0 = std::make_shared<VertexFunction>(traj.values.front());
    SpaceTimeField field;
    field.value = [semigroup, u0](double t) { return VertexFunction(semigroup->propagator(t) * *u0); };
    field.rate = [semigroup, u0](double t) {
        return VertexFunction(semigroup->generator() * (semigroup->propagator(t) * *u0));
    };
    return field;
}

namespace {

VertexFunction rate_at(const SpaceTimeField& f, double t) {
    if (f.rate) {
        return f.rate(t);
    }
    const double h = 1e-5 * std::max(1.0, t);
    const double lo = std::max(0.0, t - h);
    return (f.value(t + h) - f.value(lo)) / (t + h - lo);
}

}  // namespace

MaximumPrincipleResult maximum_principle_check(const WeightedGraph& g, const SpaceTimeField& gfield,
                                               const SpaceTimeField& F, const std::vector<double>& grid) {
    MaximumPrincipleResult r;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    double at_zero = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const VertexFunction values = F.value(grid[k]);
        for (Vertex v = 0; v < g.size(); ++v) {
            if (grid[k] == 0.0) {
                at_zero = std::max(at_zero, values[v]);
            } else if (values[v] > best) {
                // strict comparison keeps the smallest vertex, then the earliest time
                best = values[v];
                best_k = k;
                r.vertex = v;
            }
        }
    }
    if (!std::isfinite(best) || at_zero > best) {
        return r;
    }
    r.applicable = true;
    double t_star = grid[best_k];
    if (best_k + 1 < grid.size()) {
        // interior maximum in time: refine so that dF/dt vanishes
        const Vertex x = r.vertex;
        double a = best_k > 0 && grid[best_k - 1] > 0.0 ? grid[best_k - 1] : 0.5 * grid[best_k];
        double b = grid[best_k + 1];
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        double fc = F.value(c)[x];
        double fd = F.value(d)[x];
        for (int it = 0; it < 200 && b - a > 1e-12 * std::max(1.0, b); ++it) {
            if (fc >= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = F.value(c)[x];
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = F.value(d)[x];
            }
        }
        const double refined = 0.5 * (a + b);
        if (F.value(refined)[x] >= best) {
            t_star = refined;
        }
    }
    r.time = t_star;
    const VertexFunction gv = gfield.value(t_star);
    const VertexFunction fv = F.value(t_star);
    const VertexFunction gr = rate_at(gfield, t_star);
    const VertexFunction fr = rate_at(F, t_star);
    const Vertex x = r.vertex;
    const VertexFunction product = gv.cwiseProduct(fv);
    r.lhs = laplacian(g, product, x) - (gr[x] * fv[x] + gv[x] * fr[x]);
    r.rhs = (laplacian(g, gv, x) - gr[x]) * fv[x];
    r.holds = r.lhs <= r.rhs + 1e-6;
    return r;
}

double psi_heat_operator(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& u,
                         const VertexFunction& rate, Vertex x) {
    require_positive_near(g, u, x, 2);
    auto q = [&](Vertex v) { return -u[v] * psi_laplacian(g, psi, u, v); };
    // time derivative of Delta^psi u at v in the direction of the rate
    auto d_psi_lap = [&](Vertex v) {
        double acc = 0.0;
        const double uv = u[v];
        for (const auto& nb : g.neighbors(v)) {
            const double ratio = u[nb.to] / uv;
            acc += nb.weight * psi.derivative(ratio) * (rate[nb.to] * uv - u[nb.to] * rate[v]) / (uv * uv);
        }
        return acc / g.mu(v);
    };
    const double qx = q(x);
    double lap_q = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        lap_q += nb.weight * (q(nb.to) - qx);
    }
    lap_q /= g.mu(x);
    const double dq = -rate[x] * psi_laplacian(g, psi, u, x) - u[x] * d_psi_lap(x);
    return lap_q - dq;
}

KernelProperties kernel_properties(const WeightedGraph& g, const HeatSemigroup& semigroup, double t) {
    KernelProperties kp;
    kp.t = t;
    const auto n = static_cast<Eigen::Index>(g.size());
    const HeatKernel k = heat_kernel(g, semigroup, t);
    kp.min_entry = k.p.minCoeff();
    for (Eigen::Index y = 0; y < n; ++y) {
        double mass = 0.0;
        for (Eigen::Index x = 0; x < n; ++x) {
            mass += k.p(x, y) * g.mu(x);
        }
        kp.mass_error = std::max(kp.mass_error, std::abs(mass - 1.0));
    }
    if (g.symmetric_weights()) {
        double rev = 0.0;
        for (Eigen::Index x = 0; x < n; ++x) {
            for (Eigen::Index y = 0; y < n; ++y) {
                rev = std::max(rev, std::abs(k.p(x, y) * g.mu(x) - k.p(y, x) * g.mu(y)));
            }
        }
        kp.reversibility_error = rev;
    }
    const HeatKernel half = heat_kernel(g, semigroup, 0.5 * t);
    const HeatKernel sum = heat_kernel(g, semigroup, 1.5 * t);
    Eigen::VectorXd mu(n);
    for (Eigen::Index z = 0; z < n; ++z) {
        mu[z] = g.mu(z);
    }
    const Eigen::MatrixXd composed = half.p * mu.asDiagonal() * k.p;
    kp.semigroup_error = (composed - sum.p).cwiseAbs().maxCoeff();

    const double h = 1e-5;
    const Eigen::MatrixXd dt = (heat_kernel(g, semigroup, t + h).p - heat_kernel(g, semigroup, t - h).p) / (2 * h);
    const Eigen::MatrixXd spatial = semigroup.generator() * k.p;
    kp.derivative_error = (dt - spatial).cwiseAbs().maxCoeff();
    return kp;
}

}  // namespace cdgraph
