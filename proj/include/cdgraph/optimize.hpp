#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace cdgraph::optimize {

using Objective = std::function<double(std::span<const double>)>;

/// Axis-aligned box; trial points are clamped into it.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    void clamp(std::span<double> x) const;
};

struct NelderMeadOptions {
    double ftol = 1e-8;          ///< spread of simplex values at convergence
    double xtol = 1e-12;         ///< simplex diameter at convergence
    double initial_step = 0.5;
    int max_evaluations = 50000;
    int max_restarts = 8;        ///< fresh simplices around the incumbent
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Nelder-Mead with dimension-adaptive coefficients, restarted from the
/// incumbent until a restart improves the value by less than ftol.
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const Box& box,
                           const NelderMeadOptions& opts = {});

struct MultistartOptions {
    int starts = 32;
    std::uint64_t seed = 0;
    NelderMeadOptions local;
};

/// Runs nelder_mead from each of `anchors` and then from uniform random
/// points in the box until `starts` runs are done; returns the best result.
/// Deterministic for a given seed.
MinimizeResult multistart(const Objective& f, const Box& box,
                          const std::vector<std::vector<double>>& anchors,
                          const MultistartOptions& opts = {});

}  // namespace cdgraph::optimize
