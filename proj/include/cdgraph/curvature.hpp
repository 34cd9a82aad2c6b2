#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdgraph/gamma.hpp"
#include "cdgraph/graph.hpp"
#include "cdgraph/psi.hpp"

namespace cdgraph {

class OptimizerError : public Error {
public:
    using Error::Error;
};

enum class CurvatureKind { CDE, CDPsi };

struct CurvatureOptions {
    int starts = 32;
    std::uint64_t seed = 0;
    double ftol = 1e-8;
    /// Search box for log f on the 2-ball: |log f| <= log_bound.
    double log_bound = 6.907755278982137;  // log(1e3)
    int threads = 1;
};

/// Denominators are floored here; the constant direction is never evaluated.
inline constexpr double kGammaFloor = 1e-14;
/// Minimum deviation of log f from 0 on the 1-ball enforced by the search.
inline constexpr double kConstantExclusion = 1e-6;

/// [Gamma~_2(f) - (Delta f)^2/n] / Gamma(f) at x.
double cde_ratio(const WeightedGraph& g, const VertexFunction& f, Vertex x, double n);

/// [Gamma_2^psi(f) - (Delta^psi f)^2/n] / Gamma^psi(f) at x.
double cdpsi_ratio(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x,
                   double n);

/// Free coordinates of the local problem at x: vertices at distance 1 or 2,
/// ascending. Distance-1 vertices come first.
std::vector<Vertex> local_coordinates(const WeightedGraph& g, Vertex x);

struct LocalCurvature {
    Vertex vertex = 0;
    double k_star = 0.0;      ///< best ratio found (an upper bound on the infimum)
    VertexFunction witness;   ///< minimizing f, equal to 1 off the 2-ball and at x
    int evaluations = 0;
};

/// Optimal constant K*(x, n) for CDE, by multistart Nelder-Mead in log f
/// with f(x) = 1.
LocalCurvature cde_k_at(const WeightedGraph& g, Vertex x, double n, const CurvatureOptions& opts = {});

/// Same for CDpsi.
LocalCurvature cdpsi_k_at(const WeightedGraph& g, const PsiFunction& psi, Vertex x, double n,
                          const CurvatureOptions& opts = {});

struct CurvatureReport {
    CurvatureKind kind = CurvatureKind::CDE;
    std::string psi_name;  ///< empty for CDE
    double n = 0.0;
    std::string method = "multistart";
    double tolerance = 0.0;
    std::vector<LocalCurvature> per_vertex;

    double min_k_star() const;
    const LocalCurvature& argmin() const;
};

/// K* at every vertex of `vertices` (all vertices when empty).
CurvatureReport cde_curvature(const WeightedGraph& g, double n, const CurvatureOptions& opts = {},
                              const std::vector<Vertex>& vertices = {});
CurvatureReport cdpsi_curvature(const WeightedGraph& g, const PsiFunction& psi, double n,
                                const CurvatureOptions& opts = {}, const std::vector<Vertex>& vertices = {});

struct VerifyResult {
    bool holds = false;
    double n = 0.0;
    double K = 0.0;
    double tolerance = 1e-6;
    std::vector<double> margin;               ///< K*(x) - K, aligned with report.per_vertex
    std::optional<Vertex> violation_vertex;
    std::optional<VertexFunction> witness;    ///< set when the condition fails
    bool violation_confirmed = false;         ///< inequality evaluated negative at the witness
    CurvatureReport report;
};

/// Claims the condition at (n, K) iff min K* >= K - tol.
VerifyResult cde_verify(const WeightedGraph& g, double n, double K, const CurvatureOptions& opts = {},
                        double tol = 1e-6, const std::vector<Vertex>& vertices = {});
VerifyResult cdpsi_verify(const WeightedGraph& g, const PsiFunction& psi, double n, double K,
                          const CurvatureOptions& opts = {}, double tol = 1e-6,
                          const std::vector<Vertex>& vertices = {});

/// Gamma~_2 - (Delta f)^2/n - K Gamma(f) at x (and the psi analogue).
double cde_defect(const WeightedGraph& g, const VertexFunction& f, Vertex x, double n, double K);
double cdpsi_defect(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f, Vertex x,
                    double n, double K);

/// sup_{x>1} log^2(x) / psi_bar(x); +inf when the ratio diverges.
/// Throws PsiError("undefined Harnack constant") when psi_bar vanishes on (1, inf).
double harnack_constant(const PsiFunction& psi);

struct SqrtBoundCheck {
    bool applicable = false;  ///< Delta f(x) < 0
    double lhs = 0.0;         ///< tilde-sum of f^2 over neighbours
    double rhs = 0.0;         ///< D_mu D_w f(x)^2
    bool holds = true;
};

SqrtBoundCheck sqrt_bound_check(const WeightedGraph& g, const VertexFunction& f, Vertex x);

/// D_mu [psi'(1) (psi^{-1}(psi(1) D_w) - 1) + psi(1)]; requires concave psi
/// with psi > 0 and psi' > 0 ("inadmissible psi" otherwise).
double psi_gradient_bound(const WeightedGraph& g, const PsiFunction& psi);

struct PsiGammaBoundCheck {
    bool applicable = false;  ///< Delta^psi f(x) < 0
    double gamma_psi = 0.0;
    double bound = 0.0;
    bool holds = true;
};

PsiGammaBoundCheck psi_gamma_bound_check(const WeightedGraph& g, const PsiFunction& psi,
                                         const VertexFunction& f, Vertex x);

}  // namespace cdgraph
