#include "cdgraph/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cdgraph::optimize {

void Box::clamp(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], lower[i], upper[i]);
    }
}

namespace {

struct Simplex {
    std::vector<std::vector<double>> points;
    std::vector<double> values;

    void sort() {
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> p;
        std::vector<double> v;
        for (auto i : order) {
            p.push_back(std::move(points[i]));
            v.push_back(values[i]);
        }
        points = std::move(p);
        values = std::move(v);
    }

    double diameter() const {
        double d = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            for (std::size_t k = 0; k < points[i].size(); ++k) {
                d = std::max(d, std::abs(points[i][k] - points[0][k]));
            }
        }
        return d;
    }
};

// NaN objective values are treated as +inf so they never become the incumbent.
double safe(const Objective& f, std::span<const double> x, int& evals) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
}

MinimizeResult run_simplex(const Objective& f, const std::vector<double>& x0, const Box& box,
                           double step, const NelderMeadOptions& opts, int budget) {
    const std::size_t n = x0.size();
    const double dn = static_cast<double>(std::max<std::size_t>(n, 1));
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dn;
    const double gamma = 0.75 - 1.0 / (2.0 * dn);
    const double delta = 1.0 - 1.0 / dn;

    int evals = 0;
    Simplex s;
    s.points.push_back(x0);
    box.clamp(s.points.back());
    for (std::size_t i = 0; i < n; ++i) {
        auto p = s.points.front();
        // step away from the nearer bound so the vertex stays distinct
        const double room_up = box.upper[i] - p[i];
        p[i] += room_up >= step ? step : -step;
        box.clamp(p);
        s.points.push_back(std::move(p));
    }
    for (const auto& p : s.points) {
        s.values.push_back(safe(f, p, evals));
    }

    bool converged = false;
    std::vector<double> centroid(n), trial(n), trial2(n);
    while (evals < budget) {
        s.sort();
        if (std::abs(s.values.back() - s.values.front()) <= opts.ftol || s.diameter() <= opts.xtol) {
            converged = true;
            break;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                centroid[k] += s.points[i][k] / dn;
            }
        }
        const auto& worst = s.points.back();
        for (std::size_t k = 0; k < n; ++k) {
            trial[k] = centroid[k] + alpha * (centroid[k] - worst[k]);
        }
        box.clamp(trial);
        const double fr = safe(f, trial, evals);
        if (fr < s.values.front()) {
            for (std::size_t k = 0; k < n; ++k) {
                trial2[k] = centroid[k] + beta * (trial[k] - centroid[k]);
            }
            box.clamp(trial2);
            const double fe = safe(f, trial2, evals);
            if (fe < fr) {
                s.points.back() = trial2;
                s.values.back() = fe;
            } else {
                s.points.back() = trial;
                s.values.back() = fr;
            }
            continue;
        }
        if (fr < s.values[n - 1]) {
            s.points.back() = trial;
            s.values.back() = fr;
            continue;
        }
        const bool outside = fr < s.values.back();
        for (std::size_t k = 0; k < n; ++k) {
            trial2[k] = outside ? centroid[k] + gamma * (trial[k] - centroid[k])
                                : centroid[k] - gamma * (centroid[k] - worst[k]);
        }
        box.clamp(trial2);
        const double fc = safe(f, trial2, evals);
        if (fc < std::min(fr, s.values.back())) {
            s.points.back() = trial2;
            s.values.back() = fc;
            continue;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                s.points[i][k] = s.points[0][k] + delta * (s.points[i][k] - s.points[0][k]);
            }
            s.values[i] = safe(f, s.points[i], evals);
        }
    }
    s.sort();
    return {s.points.front(), s.values.front(), evals, converged};
}

}  // namespace

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const Box& box,
                           const NelderMeadOptions& opts) {
    if (x0.empty()) {
        int evals = 0;
        const double v = safe(f, x0, evals);
        return {x0, v, evals, true};
    }
    MinimizeResult best = run_simplex(f, x0, box, opts.initial_step, opts, opts.max_evaluations);
    double step = opts.initial_step;
    for (int r = 0; r < opts.max_restarts && best.evaluations < opts.max_evaluations; ++r) {
        step *= 0.5;
        auto next = run_simplex(f, best.x, box, step, opts, opts.max_evaluations - best.evaluations);
        next.evaluations += best.evaluations;
        const double gain = best.value - next.value;
        if (next.value <= best.value) {
            next.converged = next.converged || best.converged;
            best = std::move(next);
        } else {
            best.evaluations = next.evaluations;
        }
        if (gain <= opts.ftol) {
            break;
        }
    }
    return best;
}

MinimizeResult multistart(const Objective& f, const Box& box,
                          const std::vector<std::vector<double>>& anchors,
                          const MultistartOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    const std::size_t dim = box.lower.size();
    MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    int total = 0;
    const int runs = std::max<int>(opts.starts, static_cast<int>(anchors.size()));
    for (int r = 0; r < runs; ++r) {
        std::vector<double> x0(dim);
        if (r < static_cast<int>(anchors.size())) {
            x0 = anchors[r];
        } else {
            for (std::size_t k = 0; k < dim; ++k) {
                std::uniform_real_distribution<double> u(box.lower[k], box.upper[k]);
                x0[k] = u(rng);
            }
        }
        auto result = nelder_mead(f, std::move(x0), box, opts.local);
        total += result.evaluations;
        if (result.value < best.value || best.x.empty()) {
            best = std::move(result);
        }
    }
    best.evaluations = total;
    return best;
}

}  // namespace cdgraph::optimize
