#pragma once

// Graph generators and reference computations for the test suites. Nothing
// here calls into the operator, curvature or heat code of the library; the
// oracles work on dense matrices built straight from the edge list.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cdgraph/graph.hpp"
#include "cdgraph/psi.hpp"

namespace testsupport {

using cdgraph::Vertex;
using cdgraph::VertexFunction;
using cdgraph::WeightedGraph;

WeightedGraph path_graph(int k, const std::vector<double>& mu = {});
WeightedGraph complete_graph(int k);
WeightedGraph star_graph(int leaves);
WeightedGraph cycle_graph(int k);

/// Connected graph on `k` vertices: a random spanning tree plus extra edges
/// with probability `p`. Weights in [0.5, 2], mu in [0.5, 2]; with
/// `symmetric == false` every edge gets an independent reverse weight.
WeightedGraph random_graph(int k, std::mt19937_64& rng, double p = 0.3, bool symmetric = true,
                           bool unit_measure = false);

VertexFunction random_positive(const WeightedGraph& g, std::mt19937_64& rng, double lo = 0.2, double hi = 5.0);

/// Dense generator L with (Lf)(x) = (1/mu(x)) sum_y w_xy (f(y) - f(x)).
Eigen::MatrixXd dense_laplacian(const WeightedGraph& g);

/// Reference operators as whole-graph vectors.
struct Oracle {
    explicit Oracle(const WeightedGraph& g);

    const WeightedGraph& g;
    Eigen::MatrixXd L;

    VertexFunction lap(const VertexFunction& f) const;
    /// Carre du champ: 1/2 [L(fh) - f Lh - h Lf].
    VertexFunction gamma(const VertexFunction& f, const VertexFunction& h) const;
    VertexFunction gamma2(const VertexFunction& f) const;
    VertexFunction gamma2_tilde(const VertexFunction& f) const;
    /// Delta^psi f(x) = sum_y L_xy psi(f(y)/f(x)) with the diagonal giving -deg psi(1).
    VertexFunction psi_lap(const cdgraph::PsiFunction& psi, const VertexFunction& f) const;
    VertexFunction gamma_psi(const cdgraph::PsiFunction& psi, const VertexFunction& f) const;
    /// Gamma_2^psi through the heat-flow identity: L(-u Delta^psi u) / (2u) with
    /// d/dt u = Lu, differentiated analytically.
    VertexFunction gamma2_psi(const cdgraph::PsiFunction& psi, const VertexFunction& f) const;
};

/// exp(A) by scaling and squaring of a 40-term Taylor series in long double.
Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a);

/// Classical RK4 with a fixed step for du/dt = L u + c(t) u^sigma.
VertexFunction rk4(const WeightedGraph& g, VertexFunction u, const std::function<double(double)>& c,
                   double sigma, double t_end, int steps);

/// Exhaustive grid search of the curvature ratio over log f on the 2-ball of
/// x (f = 1 at x and off the ball), followed by repeated zooming around the
/// best cell. Requires at most 3 free coordinates. Points with
/// max |log f| < `exclusion` on the 1-ball are skipped; the reference
/// arithmetic loses its digits closer to the constant direction.
struct GridResult {
    double value;
    std::vector<double> z;
};

using RatioFn = std::function<double(const VertexFunction&)>;

GridResult grid_oracle(const WeightedGraph& g, Vertex x, const RatioFn& ratio, double bound = 6.907755278982137,
                       int points = 41, int zooms = 30, double exclusion = 1e-4);

/// Reference ratios built on Oracle.
double cde_ratio_ref(const Oracle& o, const VertexFunction& f, Vertex x, double n);
double cdpsi_ratio_ref(const Oracle& o, const cdgraph::PsiFunction& psi, const VertexFunction& f, Vertex x,
                       double n);

/// Vertices at hop distance 1 or 2 from x, by BFS on the edge list.
std::vector<Vertex> two_ball_free(const WeightedGraph& g, Vertex x);

std::string data_path(const std::string& name);

}  // namespace testsupport
