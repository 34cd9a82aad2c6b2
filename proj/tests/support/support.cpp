#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace testsupport {

using cdgraph::EdgeSpec;

namespace {

std::vector<std::string> numbered(int k) {
    std::vector<std::string> ids;
    for (int i = 0; i < k; ++i) ids.push_back("v" + std::to_string(i));
    return ids;
}

}  // namespace

WeightedGraph path_graph(int k, const std::vector<double>& mu) {
    std::vector<EdgeSpec> edges;
    for (int i = 0; i + 1 < k; ++i) edges.push_back({"v" + std::to_string(i), "v" + std::to_string(i + 1), 1.0, {}});
    return WeightedGraph::build(numbered(k), edges, mu);
}

WeightedGraph complete_graph(int k) {
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) edges.push_back({"v" + std::to_string(i), "v" + std::to_string(j), 1.0, {}});
    return WeightedGraph::build(numbered(k), edges);
}

WeightedGraph star_graph(int leaves) {
    std::vector<EdgeSpec> edges;
    for (int i = 1; i <= leaves; ++i) edges.push_back({"v0", "v" + std::to_string(i), 1.0, {}});
    return WeightedGraph::build(numbered(leaves + 1), edges);
}

WeightedGraph cycle_graph(int k) {
    std::vector<EdgeSpec> edges;
    for (int i = 0; i < k; ++i)
        edges.push_back({"v" + std::to_string(i), "v" + std::to_string((i + 1) % k), 1.0, {}});
    return WeightedGraph::build(numbered(k), edges);
}

WeightedGraph random_graph(int k, std::mt19937_64& rng, double p, bool symmetric, bool unit_measure) {
    std::uniform_real_distribution<double> w(0.5, 2.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::set<std::pair<int, int>> pairs;
    for (int i = 1; i < k; ++i) {
        int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
        pairs.insert({parent, i});
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (coin(rng) < p) pairs.insert({i, j});
    std::vector<EdgeSpec> edges;
    for (auto [i, j] : pairs) {
        EdgeSpec e{"v" + std::to_string(i), "v" + std::to_string(j), w(rng), {}};
        if (!symmetric) e.reverse_weight = w(rng);
        edges.push_back(e);
    }
    std::vector<double> mu;
    if (!unit_measure)
        for (int i = 0; i < k; ++i) mu.push_back(w(rng));
    return WeightedGraph::build(numbered(k), edges, mu);
}

VertexFunction random_positive(const WeightedGraph& g, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    VertexFunction f(g.size());
    for (Vertex v = 0; v < g.size(); ++v) f[v] = std::exp(d(rng));
    return f;
}

Eigen::MatrixXd dense_laplacian(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edge_specs()) {
        Vertex a = g.index(e.from), b = g.index(e.to);
        double wab = e.weight;
        double wba = e.reverse_weight.value_or(e.weight);
        L(a, b) += wab / g.mu(a);
        L(a, a) -= wab / g.mu(a);
        L(b, a) += wba / g.mu(b);
        L(b, b) -= wba / g.mu(b);
    }
    return L;
}

Oracle::Oracle(const WeightedGraph& graph) : g(graph), L(dense_laplacian(graph)) {}

VertexFunction Oracle::lap(const VertexFunction& f) const { return L * f; }

VertexFunction Oracle::gamma(const VertexFunction& f, const VertexFunction& h) const {
    VertexFunction fh = f.cwiseProduct(h);
    return 0.5 * (lap(fh) - f.cwiseProduct(lap(h)) - h.cwiseProduct(lap(f)));
}

VertexFunction Oracle::gamma2(const VertexFunction& f) const {
    return 0.5 * lap(gamma(f, f)) - gamma(f, lap(f));
}

VertexFunction Oracle::gamma2_tilde(const VertexFunction& f) const {
    VertexFunction q = gamma(f, f).cwiseQuotient(f);
    return gamma2(f) - gamma(f, q);
}

VertexFunction Oracle::psi_lap(const cdgraph::PsiFunction& psi, const VertexFunction& f) const {
    VertexFunction out = VertexFunction::Zero(f.size());
    for (Eigen::Index x = 0; x < f.size(); ++x)
        for (Eigen::Index y = 0; y < f.size(); ++y)
            if (y != x && L(x, y) != 0.0) out[x] += L(x, y) * (psi(f[y] / f[x]) - psi.at_one());
    return out;
}

VertexFunction Oracle::gamma_psi(const cdgraph::PsiFunction& psi, const VertexFunction& f) const {
    // psi_bar(s) = psi'(1)(s - 1) - (psi(s) - psi(1)) summed against L.
    return psi.derivative_at_one() * lap(f).cwiseQuotient(f) - psi_lap(psi, f);
}

VertexFunction Oracle::gamma2_psi(const cdgraph::PsiFunction& psi, const VertexFunction& f) const {
    const Eigen::Index n = f.size();
    VertexFunction ft = lap(f);
    VertexFunction lp = psi_lap(psi, f);
    VertexFunction q = -f.cwiseProduct(lp);
    // d/dt of q along du/dt = Lu.
    VertexFunction qt(n);
    for (Eigen::Index x = 0; x < n; ++x) {
        double dlp = 0.0;
        for (Eigen::Index y = 0; y < n; ++y) {
            if (y == x || L(x, y) == 0.0) continue;
            double r = f[y] / f[x];
            double dr = (ft[y] * f[x] - f[y] * ft[x]) / (f[x] * f[x]);
            dlp += L(x, y) * psi.derivative(r) * dr;
        }
        qt[x] = -(ft[x] * lp[x] + f[x] * dlp);
    }
    return (lap(q) - qt).cwiseQuotient(2.0 * f);
}

Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a) {
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
    LMat m = a.cast<long double>() / std::ldexp(1.0L, squarings);
    LMat term = LMat::Identity(a.rows(), a.cols());
    LMat sum = term;
    for (int k = 1; k <= 40; ++k) {
        term = term * m / static_cast<long double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum.cast<double>();
}

VertexFunction rk4(const WeightedGraph& g, VertexFunction u, const std::function<double(double)>& c,
                   double sigma, double t_end, int steps) {
    Eigen::MatrixXd L = dense_laplacian(g);
    auto rhs = [&](double t, const VertexFunction& v) {
        return VertexFunction(L * v + c(t) * v.array().pow(sigma).matrix());
    };
    double h = t_end / steps;
    double t = 0.0;
    for (int i = 0; i < steps; ++i) {
        VertexFunction k1 = rhs(t, u);
        VertexFunction k2 = rhs(t + h / 2, u + h / 2 * k1);
        VertexFunction k3 = rhs(t + h / 2, u + h / 2 * k2);
        VertexFunction k4 = rhs(t + h, u + h * k3);
        u += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return u;
}

std::vector<Vertex> two_ball_free(const WeightedGraph& g, Vertex x) {
    Eigen::MatrixXd L = dense_laplacian(g);
    std::vector<int> dist(g.size(), -1);
    std::queue<Vertex> q;
    dist[x] = 0;
    q.push(x);
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop();
        for (Vertex y = 0; y < g.size(); ++y)
            if (y != v && L(v, y) != 0.0 && dist[y] < 0) {
                dist[y] = dist[v] + 1;
                q.push(y);
            }
    }
    std::vector<Vertex> out;
    for (int d = 1; d <= 2; ++d)
        for (Vertex v = 0; v < g.size(); ++v)
            if (dist[v] == d) out.push_back(v);
    return out;
}

GridResult grid_oracle(const WeightedGraph& g, Vertex x, const RatioFn& ratio, double bound, int points,
                       int zooms, double exclusion) {
    std::vector<Vertex> free = two_ball_free(g, x);
    const int k = static_cast<int>(free.size());
    if (k < 1 || k > 3) throw std::invalid_argument("grid oracle needs 1 to 3 free coordinates");
    std::size_t near = 0;
    Eigen::MatrixXd L = dense_laplacian(g);
    for (Vertex v : free)
        if (L(x, v) != 0.0) ++near;

    std::vector<double> lo(k, -bound), hi(k, bound);
    GridResult best{std::numeric_limits<double>::infinity(), std::vector<double>(k, 0.0)};
    VertexFunction f = VertexFunction::Ones(g.size());
    std::vector<int> idx(k, 0);

    for (int level = 0; level <= zooms; ++level) {
        std::vector<double> step(k);
        for (int i = 0; i < k; ++i) step[i] = (hi[i] - lo[i]) / (points - 1);
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            std::vector<double> z(k);
            double dev = 0.0;
            for (int i = 0; i < k; ++i) {
                z[i] = lo[i] + idx[i] * step[i];
                if (static_cast<std::size_t>(i) < near) dev = std::max(dev, std::abs(z[i]));
            }
            if (dev >= exclusion) {
                for (int i = 0; i < k; ++i) f[free[i]] = std::exp(z[i]);
                double r = ratio(f);
                if (std::isfinite(r) && r < best.value) best = {r, z};
            }
            int i = 0;
            while (i < k && ++idx[i] == points) idx[i++] = 0;
            if (i == k) break;
        }
        // Zoom to a box of four cells around the incumbent, kept inside the bound.
        for (int i = 0; i < k; ++i) {
            double half = 2.0 * step[i];
            lo[i] = std::max(-bound, best.z[i] - half);
            hi[i] = std::min(bound, best.z[i] + half);
        }
    }
    return best;
}

double cde_ratio_ref(const Oracle& o, const VertexFunction& f, Vertex x, double n) {
    double lf = o.lap(f)[x];
    double gf = std::max(o.gamma(f, f)[x], 1e-14);
    return (o.gamma2_tilde(f)[x] - lf * lf / n) / gf;
}

double cdpsi_ratio_ref(const Oracle& o, const cdgraph::PsiFunction& psi, const VertexFunction& f, Vertex x,
                       double n) {
    double lp = o.psi_lap(psi, f)[x];
    double gp = std::max(o.gamma_psi(psi, f)[x], 1e-14);
    return (o.gamma2_psi(psi, f)[x] - lp * lp / n) / gp;
}

std::string data_path(const std::string& name) { return std::string(CDGRAPH_TEST_DATA) + "/" + name; }

}  // namespace testsupport
