#pragma once

#include "cdgraph/graph.hpp"
#include "cdgraph/psi.hpp"

namespace cdgraph {

/// A vertex value at or below 1e-300 where a positive function is required.
class NonPositiveError : public Error {
public:
    using Error::Error;
};

// Point evaluations read only the neighbourhood they need: the 1-ball for
// first-order operators and the 2-ball for the iterated ones.

/// (1/mu(x)) sum_{y~x} w_xy (f(y) - f(x))
double laplacian(const WeightedGraph& g, const VertexFunction& f, Vertex x);
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& f);

/// (1/mu(x)) sum_{y~x} w_xy f(y)
double tilde_sum(const WeightedGraph& g, const VertexFunction& f, Vertex x);

/// Gradient form (1/(2 mu(x))) sum_{y~x} w_xy (f(y)-f(x)) (g(y)-g(x)).
double gamma(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h, Vertex x);
double gamma(const WeightedGraph& g, const VertexFunction& f, Vertex x);

enum class Gamma2Variant { Plain, Tilde };

/// Plain: 1/2 Delta Gamma(f) - Gamma(f, Delta f).
/// Tilde: Plain - Gamma(f, Gamma(f)/f); requires f > 0 on the 2-ball.
double gamma2(const WeightedGraph& g, const VertexFunction& f, Vertex x,
              Gamma2Variant variant = Gamma2Variant::Plain);

/// (1/mu(x)) sum_{y~x} w_xy [psi(f(y)/f(x)) - psi(1)]
double psi_laplacian(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x);

/// Delta^{psi_bar} f(x); nonnegative for concave psi.
double gamma_psi(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x);

/// Delta[ psi'(f/f(x)) * f/f(x) * (Delta f / f - Delta f(x)/f(x)) ](x)
double omega_psi(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x);

/// 1/2 [ Omega^psi f + Delta f * Delta^psi f / f - Delta(f Delta^psi f) / f ] at x.
double gamma2_psi(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x);

/// Throws NonPositiveError unless f > 1e-300 on the closed ball B(x, radius).
void require_positive_near(const WeightedGraph& g, const VertexFunction& f, Vertex x, int radius);

}  // namespace cdgraph
