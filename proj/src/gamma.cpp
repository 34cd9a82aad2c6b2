#include "cdgraph/gamma.hpp"

#include <string>

namespace cdgraph {

namespace {

constexpr double kPositivityFloor = 1e-300;

void check_value(const WeightedGraph& g, const VertexFunction& f, Vertex v) {
    if (!(f[v] > kPositivityFloor)) {
        throw NonPositiveError("function must be positive at vertex '" + g.id(v) + "'");
    }
}

}  // namespace

void require_positive_near(const WeightedGraph& g, const VertexFunction& f, Vertex x, int radius) {
    check_value(g, f, x);
    if (radius <= 0) {
        return;
    }
    for (const auto& nb : g.neighbors(x)) {
        check_value(g, f, nb.to);
        if (radius > 1) {
            for (const auto& nb2 : g.neighbors(nb.to)) {
                check_value(g, f, nb2.to);
            }
        }
    }
}

double laplacian(const WeightedGraph& g, const VertexFunction& f, Vertex x) {
    double acc = 0.0;
    const double fx = f[x];
    for (const auto& nb : g.neighbors(x)) {
        acc += nb.weight * (f[nb.to] - fx);
    }
    return acc / g.mu(x);
}

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f) {
    VertexFunction out(g.size());
    for (Vertex x = 0; x < g.size(); ++x) {
        out[x] = laplacian(g, f, x);
    }
    return out;
}

double tilde_sum(const WeightedGraph& g, const VertexFunction& f, Vertex x) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        acc += nb.weight * f[nb.to];
    }
    return acc / g.mu(x);
}

double gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h, Vertex x) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        acc += nb.weight * (f[nb.to] - f[x]) * (h[nb.to] - h[x]);
    }
    return acc / (2.0 * g.mu(x));
}

double gamma(const WeightedGraph& g, const VertexFunction& f, Vertex x) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        const double d = f[nb.to] - f[x];
        acc += nb.weight * d * d;
    }
    return acc / (2.0 * g.mu(x));
}

double gamma2(const WeightedGraph& g, const VertexFunction& f, Vertex x, Gamma2Variant variant) {
    const bool tilde = variant == Gamma2Variant::Tilde;
    if (tilde) {
        require_positive_near(g, f, x, 2);
    }
    const double fx = f[x];
    const double gamma_x = gamma(g, f, x);
    const double lap_x = laplacian(g, f, x);
    double lap_gamma = 0.0;
    double gamma_f_lap = 0.0;
    double gamma_f_ratio = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        const double gamma_y = gamma(g, f, nb.to);
        const double df = f[nb.to] - fx;
        lap_gamma += nb.weight * (gamma_y - gamma_x);
        gamma_f_lap += nb.weight * df * (laplacian(g, f, nb.to) - lap_x);
        if (tilde) {
            gamma_f_ratio += nb.weight * df * (gamma_y / f[nb.to] - gamma_x / fx);
        }
    }
    const double inv_mu = 1.0 / g.mu(x);
    double value = 0.5 * lap_gamma * inv_mu - 0.5 * gamma_f_lap * inv_mu;
    if (tilde) {
        value -= 0.5 * gamma_f_ratio * inv_mu;
    }
    return value;
}

double psi_laplacian(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x) {
    require_positive_near(g, f, x, 1);
    const double fx = f[x];
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        acc += nb.weight * psi_increment(psi, f[nb.to], fx);
    }
    return acc / g.mu(x);
}

double gamma_psi(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x) {
    require_positive_near(g, f, x, 1);
    const double fx = f[x];
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        acc += nb.weight * psi_bar_value(psi, f[nb.to], fx);
    }
    return acc / g.mu(x);
}

double omega_psi(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x) {
    require_positive_near(g, f, x, 2);
    const double fx = f[x];
    const double base = laplacian(g, f, x) / fx;
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        const double ratio = f[nb.to] / fx;
        const double inner = psi.derivative(ratio) * ratio * (laplacian(g, f, nb.to) / f[nb.to] - base);
        acc += nb.weight * inner;  // the inner function vanishes at x itself
    }
    return acc / g.mu(x);
}

double gamma2_psi(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x) {
    require_positive_near(g, f, x, 2);
    const double fx = f[x];
    const double lap_psi_x = psi_laplacian(g, psi, f, x);
    const double product_x = fx * lap_psi_x;
    double lap_product = 0.0;
    for (const auto& nb : g.neighbors(x)) {
        lap_product += nb.weight * (f[nb.to] * psi_laplacian(g, psi, f, nb.to) - product_x);
    }
    lap_product /= g.mu(x);
    const double omega = omega_psi(g, psi, f, x);
    return 0.5 * (omega + laplacian(g, f, x) * lap_psi_x / fx - lap_product / fx);
}

}  // namespace cdgraph
