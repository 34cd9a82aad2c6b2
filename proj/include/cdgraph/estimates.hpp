#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdgraph/curvature.hpp"
#include "cdgraph/graph.hpp"
#include "cdgraph/heat.hpp"
#include "cdgraph/psi.hpp"

namespace cdgraph {

class EstimateError : public Error {
public:
    using Error::Error;
};

/// Raised when a checker is asked to run on an unverified curvature hypothesis.
class CertificationError : public EstimateError {
public:
    using EstimateError::EstimateError;
};

inline constexpr double kSlackTolerance = 1e-8;

/// 64 log-spaced times in [0.05, 5].
std::vector<double> default_time_grid();
std::vector<double> log_grid(double lo, double hi, int count);

/// The curvature hypothesis CDE(n, -K) or CDpsi(n, -K) of a theorem.
struct Hypothesis {
    CurvatureKind kind = CurvatureKind::CDE;
    std::string psi;       ///< empty for CDE
    double n = 0.0;
    double K = 0.0;        ///< the condition is checked at -K
    bool certified = false;
    bool forced = false;   ///< run anyway, marked unverified
    double min_k_star = 0.0;
    std::vector<Vertex> vertices;  ///< where it was checked; empty = everywhere
};

Hypothesis certify_cde(const WeightedGraph& g, double n, double K, const CurvatureOptions& opts = {},
                       const std::vector<Vertex>& vertices = {});
Hypothesis certify_cdpsi(const WeightedGraph& g, const PsiFunction& psi, double n, double K,
                         const CurvatureOptions& opts = {}, const std::vector<Vertex>& vertices = {});

struct EstimatePoint {
    std::string assertion;
    Vertex x = 0;
    std::optional<Vertex> y;
    double t = 0.0;
    std::optional<double> t2;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool counts = true;  ///< enters min_slack and holds
};

struct EstimateReport {
    std::string theorem_id;
    std::vector<EstimatePoint> points;
    double min_slack = 0.0;
    std::optional<EstimatePoint> witness;           ///< the point attaining min_slack
    std::map<std::string, double> min_slack_by_assertion;
    bool holds = false;
    bool hypothesis_verified = true;
    std::optional<Hypothesis> hypothesis;
    std::vector<std::pair<std::string, double>> constants;
    std::vector<std::string> notes;

    void add(EstimatePoint p);
    /// Computes min_slack and holds (min_slack >= -kSlackTolerance).
    void finalize();
};

struct LocalScope {
    Vertex x0 = 0;
    int R = 1;
};

/// Gamma(sqrt u)/u - d/dt(sqrt u)/sqrt u <= n/(2t) + sqrt(nK D_mu (D_w + 1)/2) [+ n D_mu (1 + D_w)/R]
/// along the heat flow from u0; local scope solves on B(x0, 2R) and evaluates on B(x0, R).
EstimateReport check_cde_estimate(const WeightedGraph& g, const VertexFunction& u0, const Hypothesis& h,
                                  const std::optional<LocalScope>& scope = std::nullopt,
                                  const std::vector<double>& grid = default_time_grid());

enum class CdpsiForm { Alpha, Sharp, AlphaLocal, SharpLocal };

struct CdpsiOptions {
    CdpsiForm form = CdpsiForm::Sharp;
    double alpha = 0.5;
    std::optional<LocalScope> scope;
};

EstimateReport check_cdpsi_estimate(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& u0,
                                    const Hypothesis& h, const CdpsiOptions& opts,
                                    const std::vector<double>& grid = default_time_grid());

struct ConstantsBundle {
    double a = 0.0, n = 0.0, K = 0.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0, C5 = 0.0;
    std::optional<double> Cbar1, Cbar2, Cbar3, Cbar4, Cbar5;
    double diam = 0.0, D_mu = 0.0, D_w = 0.0, mu_max = 0.0, w_min = 0.0, vol = 0.0;
    std::optional<double> H_psi, dpsi_at_1, psi_inv_at, C_psi;

    std::vector<std::pair<std::string, double>> entries() const;
};

/// Unbarred constants always; barred ones when psi is given (psi, psi' > 0 required).
ConstantsBundle kernel_constants(const WeightedGraph& g, double a, double n, double K,
                                 const PsiFunction* psi = nullptr);

/// Default kernel grid: the default time grid plus {a, 1.5a, 2a, 5a, 20a}.
std::vector<double> kernel_time_grid(double a);

/// The three heat-kernel assertions against the exact kernel; barred
/// constants and exponent n/(2 psi'(1)) when psi is given.
EstimateReport check_kernel_bounds(const WeightedGraph& g, double a, const Hypothesis& h,
                                   const PsiFunction* psi = nullptr,
                                   const std::vector<double>& t_grid = {});

struct HarnackPair {
    Vertex x = 0;
    double T1 = 0.0;
    Vertex y = 0;
    double T2 = 0.0;
};

struct CdeHarnackParams {
    double c1 = 0.0, c2 = 0.0, alpha = 0.5;
};

struct PsiHarnackParams {
    double D1 = 0.0, D2 = 0.0, D3 = 0.0;
};

/// All ordered vertex pairs for each (T1, T2).
std::vector<HarnackPair> all_pairs(const WeightedGraph& g, const std::vector<std::pair<double, double>>& times);

/// Premise (1-a) Gamma(f)/f^2 - f_t/f <= c1/t + c2 on the premise grid, then
/// f(x,T1) <= f(y,T2) (T2/T1)^c1 exp{c2 (T2-T1) + 2 mu_max d^2 / (w_min (1-a)(T2-T1))}.
EstimateReport check_harnack_cde(const WeightedGraph& g, const SpaceTimeField& f, const CdeHarnackParams& p,
                                 const std::vector<HarnackPair>& pairs, std::vector<double> premise_grid = {});

/// Premise D1 Gamma^psi(f) - f_t/f <= D2/t + D3, then
/// f(x,T1) <= f(y,T2) (T2/T1)^D2 exp{D3 (T2-T1) + H_psi d^2 / (D1 (T2-T1))}.
EstimateReport check_harnack_cdpsi(const WeightedGraph& g, const PsiFunction& psi, const SpaceTimeField& f,
                                   const PsiHarnackParams& p, const std::vector<HarnackPair>& pairs,
                                   std::vector<double> premise_grid = {});

struct HeatTypeOptions {
    bool sharp = true;
    double alpha = 0.5;
    SolverOptions solver;
};

/// Gamma^psi(u) <= n/(2t) + Kn (sharp) or (1-a) Gamma^psi(u) <= n/((1-a)2t) + Kn/(2a)
/// and the weaker Kn/a variant (alpha) along du/dt = Delta u + c u^sigma.
EstimateReport check_heat_type(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& u0,
                               const Forcing& c, double sigma, const Hypothesis& h, const HeatTypeOptions& opts,
                               const std::vector<double>& grid = default_time_grid());

/// Premise Gamma^psi(f) <= D1/t + D2 at every vertex, the per-edge bound
/// log(f(y)/f(x)) <= sqrt(H mu_max / w_min) sqrt(Gamma^psi f (x)), and
/// f(x) <= f(y) exp{d(x,y) sqrt(H mu_max / w_min) sqrt(D1/t + D2)} for each pair.
EstimateReport check_log_harnack(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& f,
                                 double D1, double D2, double t,
                                 const std::vector<std::pair<Vertex, Vertex>>& pairs);

}  // namespace cdgraph
