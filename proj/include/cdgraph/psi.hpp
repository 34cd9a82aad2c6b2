#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdgraph/graph.hpp"

namespace cdgraph {

class PsiError : public Error {
public:
    using Error::Error;
};

/// A C^1 function psi on (0, inf) given as a value/derivative pair.
///
/// Construction samples the pair on a log-spaced grid over [1e-3, 1e3] and
/// rejects it if the derivative disagrees with a central difference, if a
/// claimed concavity fails the midpoint test, or if a supplied inverse does
/// not invert. Positivity of psi and psi' is recorded from the same samples
/// (extended to [1e-6, 1e6]) unless stated by the caller.
class PsiFunction {
public:
    using Fn = std::function<double(double)>;

    struct Spec {
        std::string name;
        Fn value;
        Fn derivative;
        std::optional<Fn> inverse;
        /// nullopt: decide concavity by sampling.
        std::optional<bool> concave;
        std::optional<bool> positive;             ///< psi > 0 on (0, inf)
        std::optional<bool> increasing;           ///< psi' > 0 on (0, inf)
    };

    explicit PsiFunction(Spec spec);

    /// Built-ins: "sqrt", "log", "loglin" (log s - (s - 1)), "linear" (s).
    static PsiFunction builtin(const std::string& name);

    /// psi(s) = sum_k coeffs[k] * (log s)^k, with its analytic derivative.
    static PsiFunction log_polynomial(std::vector<double> coeffs);

    /// Built-in name, or "poly:a0,a1,..." for a log-polynomial.
    static PsiFunction parse(const std::string& text);

    const std::string& name() const { return name_; }
    double operator()(double s) const { return value_(s); }
    double derivative(double s) const { return derivative_(s); }
    double at_one() const { return at_one_; }
    double derivative_at_one() const { return derivative_at_one_; }
    bool concave() const { return concave_; }
    bool positive() const { return positive_; }
    bool increasing() const { return increasing_; }
    bool has_inverse() const { return inverse_.has_value(); }

    /// psi^{-1}(y): the supplied inverse, else bisection in log s over
    /// [1e-12, 1e12] for increasing psi (200 iterations).
    /// Throws PsiError if psi is not increasing or y is out of range.
    double inverse(double y) const;

private:
    std::string name_;
    Fn value_;
    Fn derivative_;
    std::optional<Fn> inverse_;
    double at_one_ = 0.0;
    double derivative_at_one_ = 0.0;
    bool concave_ = false;
    bool positive_ = false;
    bool increasing_ = false;
};

/// psi_bar(s) = psi'(1)(s - 1) - [psi(s) - psi(1)]; nonnegative for concave psi.
PsiFunction psi_bar(const PsiFunction& psi);

/// psi(y/x) - psi(1). Near y = x the relative difference (y - x)/x is fed to a
/// quadrature of psi', so the result keeps relative accuracy as y/x -> 1.
double psi_increment(const PsiFunction& psi, double y, double x);

/// psi_bar evaluated with the integral form int_1^s (psi'(1) - psi'(r)) dr
/// near s = 1, where the closed form cancels catastrophically.
double psi_bar_value(const PsiFunction& psi, double s);
/// psi_bar(y/x) from the relative difference, as psi_increment.
double psi_bar_value(const PsiFunction& psi, double y, double x);

}  // namespace cdgraph
