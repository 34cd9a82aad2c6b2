#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cdgraph/graph.hpp"
#include "cdgraph/psi.hpp"

namespace cdgraph {

class HeatError : public Error {
public:
    using Error::Error;
};

/// Matrix of Delta in the vertex basis: L_xy = w_xy/mu(x), L_xx = -deg(x)/mu(x).
/// Rows of vertices outside `domain` are zero (those values stay frozen).
Eigen::MatrixXd generator_matrix(const WeightedGraph& g, const std::optional<Ball>& domain = std::nullopt);

/// exp(tL) on a fixed graph.
///
/// Symmetric weights without a domain restriction use the symmetrized
/// generator w_xy / sqrt(mu_x mu_y) and one eigendecomposition; everything
/// else goes through scaling-and-squaring Pade.
class HeatSemigroup {
public:
    explicit HeatSemigroup(const WeightedGraph& g, std::optional<Ball> domain = std::nullopt);

    const Eigen::MatrixXd& generator() const { return generator_; }
    bool spectral() const { return spectral_; }
    const std::optional<Ball>& domain() const { return domain_; }

    /// exp(tA) for t >= 0.
    Eigen::MatrixXd propagator(double t) const;
    /// Smallest nonzero -lambda of the generator (whole graph only).
    double spectral_gap() const;

private:
    const WeightedGraph* graph_;
    std::optional<Ball> domain_;
    Eigen::MatrixXd generator_;
    bool spectral_ = false;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::VectorXd sqrt_mu_;
};

struct HeatKernel {
    double t = 0.0;
    Eigen::MatrixXd p;  ///< p(x, y) = exp(tL)_xy / mu(y)
};

HeatKernel heat_kernel(const WeightedGraph& g, double t);
HeatKernel heat_kernel(const WeightedGraph& g, const HeatSemigroup& semigroup, double t);

/// c(t) for the heat-type equation: a constant or a polynomial in t.
class Forcing {
public:
    static Forcing constant(double c);
    static Forcing polynomial(std::vector<double> coeffs);
    /// "2", "-1.5", or "poly:a0,a1,..." (c(t) = a0 + a1 t + ...).
    static Forcing parse(const std::string& text);

    double operator()(double t) const;
    const std::string& text() const { return text_; }
    bool is_zero() const;

private:
    std::vector<double> coeffs_;
    std::string text_;
};

/// c >= 0 with sigma <= 1, or c <= 0 with sigma >= 1, sampled over [0, t_max].
bool forcing_admissible(const Forcing& c, double sigma, double t_max);

enum class FlowKind { Heat, HeatType };

struct Trajectory {
    FlowKind kind = FlowKind::Heat;
    std::string forcing;  ///< text of c(t); empty for heat
    double sigma = 0.0;
    std::vector<double> times;
    std::vector<VertexFunction> values;
    std::vector<VertexFunction> rates;  ///< exact du/dt from the right-hand side
    std::optional<Ball> domain;         ///< where the equation holds; whole graph if empty
    std::vector<std::string> warnings;
};

/// Validates a time grid: starts at 0, strictly increasing, finite.
void require_time_grid(const std::vector<double>& times);

/// u(t) = exp(tL) u0 on the grid. With a domain, the equation is solved on
/// the ball and values outside it stay at u0.
Trajectory heat_solve(const WeightedGraph& g, const VertexFunction& u0, const std::vector<double>& times,
                      const std::optional<Ball>& domain = std::nullopt);

struct SolverOptions {
    double tol = 1e-9;
    double min_step = 1e-14;
};

/// du/dt = Delta u + c(t) u^sigma by Dormand-Prince 5(4). Steps land on
/// every grid time; steps producing a nonpositive component are rejected
/// and halved. Throws HeatError on step-size underflow.
Trajectory nonlinear_solve(const WeightedGraph& g, const VertexFunction& u0, const Forcing& c, double sigma,
                           const std::vector<double>& times, const SolverOptions& opts = {});

/// A function of (vertex, t) given by its value and, optionally, its exact
/// time derivative; central differences are used when the rate is absent.
struct SpaceTimeField {
    std::function<VertexFunction(double)> value;
    std::function<VertexFunction(double)> rate;
};

SpaceTimeField field_of(const WeightedGraph& g, const Trajectory& traj);

struct MaximumPrincipleResult {
    bool applicable = false;
    Vertex vertex = 0;
    double time = 0.0;
    double lhs = 0.0;  ///< L(gF)(x*, t*)
    double rhs = 0.0;  ///< (Lg) F (x*, t*)
    bool holds = false;
};

/// Locates the maximum of F over V x grid (t > 0), refines t* and compares
/// L(gF) with (Lg)F there, where L = Delta - d/dt.
MaximumPrincipleResult maximum_principle_check(const WeightedGraph& g, const SpaceTimeField& gfield,
                                               const SpaceTimeField& F, const std::vector<double>& grid);

/// L(-u Delta^psi u)(x) for a state u with rate du/dt.
double psi_heat_operator(const WeightedGraph& g, const PsiFunction& psi, const VertexFunction& u,
                         const VertexFunction& rate, Vertex x);

struct KernelProperties {
    double t = 0.0;
    double min_entry = 0.0;
    double mass_error = 0.0;                   ///< max_y |sum_x P(x,y) mu(x) - 1|
    std::optional<double> reversibility_error; ///< max |P(x,y) mu(x) - P(y,x) mu(y)|, symmetric weights only
    double semigroup_error = 0.0;              ///< P_{3t/2} against P_{t/2} composed with P_t
    double derivative_error = 0.0;             ///< central difference in t against Delta_x P
};

KernelProperties kernel_properties(const WeightedGraph& g, const HeatSemigroup& semigroup, double t);

}  // namespace cdgraph
