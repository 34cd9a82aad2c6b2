#include "cdgraph/psi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

namespace cdgraph {

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> out(count);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < count; ++i) {
        out[i] = std::exp(a + (b - a) * i / (count - 1));
    }
    return out;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
constexpr std::array<double, 8> kGlNodes = {
    0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr std::array<double, 8> kGlWeights = {
    0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

}  // namespace

PsiFunction::PsiFunction(Spec spec)
    : name_(std::move(spec.name)),
      value_(std::move(spec.value)),
      derivative_(std::move(spec.derivative)),
      inverse_(std::move(spec.inverse)) {
    if (!value_ || !derivative_) {
        throw PsiError("psi '" + name_ + "' needs both a value and a derivative");
    }
    at_one_ = value_(1.0);
    derivative_at_one_ = derivative_(1.0);

    const auto grid = log_grid(1e-3, 1e3, 61);
    for (double s : grid) {
        const double d = derivative_(s);
        const double h = 1e-5 * s;
        const double fd = (value_(s + h) - value_(s - h)) / (2.0 * h);
        const double scale = std::max(std::abs(d), std::abs(value_(s)) / s);
        if (!std::isfinite(d) || std::abs(d - fd) > 1e-6 * scale + 1e-9) {
            std::ostringstream msg;
            msg << "psi '" << name_ << "': derivative mismatch at s=" << s << " (given " << d
                << ", finite difference " << fd << ")";
            throw PsiError(msg.str());
        }
    }

    bool midpoint_ok = true;
    for (std::size_t i = 0; i < grid.size() && midpoint_ok; ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double a = value_(grid[i]);
            const double b = value_(grid[j]);
            const double mid = value_(0.5 * (grid[i] + grid[j]));
            const double slack = 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
            if (mid < 0.5 * (a + b) - slack) {
                midpoint_ok = false;
                break;
            }
        }
    }
    if (spec.concave.value_or(midpoint_ok) && !midpoint_ok) {
        throw PsiError("psi '" + name_ + "' is declared concave but fails the midpoint test");
    }
    concave_ = spec.concave.value_or(midpoint_ok);

    const auto wide = log_grid(1e-6, 1e6, 121);
    positive_ = spec.positive.value_or(
        std::all_of(wide.begin(), wide.end(), [&](double s) { return value_(s) > 0.0; }));
    increasing_ = spec.increasing.value_or(
        std::all_of(wide.begin(), wide.end(), [&](double s) { return derivative_(s) > 0.0; }));

    if (inverse_) {
        for (double s : grid) {
            const double y = value_(s);
            const double back = value_((*inverse_)(y));
            if (std::abs(back - y) > 1e-10 * std::max(1.0, std::abs(y))) {
                throw PsiError("psi '" + name_ + "': supplied inverse does not invert");
            }
        }
    }
}

PsiFunction PsiFunction::builtin(const std::string& name) {
    if (name == "sqrt") {
        return PsiFunction(Spec{
            "sqrt",
            [](double s) { return std::sqrt(s); },
            [](double s) { return 0.5 / std::sqrt(s); },
            [](double y) {
                if (!(y > 0.0)) {
                    throw PsiError("inverse out of range");
                }
                return y * y;
            },
            true, true, true});
    }
    if (name == "log") {
        return PsiFunction(Spec{
            "log",
            [](double s) { return std::log(s); },
            [](double s) { return 1.0 / s; },
            [](double y) { return std::exp(y); },
            true, false, true});
    }
    if (name == "loglin") {
        return PsiFunction(Spec{
            "loglin",
            [](double s) { return std::log(s) - (s - 1.0); },
            [](double s) { return 1.0 / s - 1.0; },
            std::nullopt,
            true, false, false});
    }
    if (name == "linear") {
        return PsiFunction(Spec{
            "linear",
            [](double s) { return s; },
            [](double) { return 1.0; },
            [](double y) {
                if (!(y > 0.0)) {
                    throw PsiError("inverse out of range");
                }
                return y;
            },
            true, true, true});
    }
    throw PsiError("unknown psi '" + name + "'");
}

PsiFunction PsiFunction::log_polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) {
        throw PsiError("log-polynomial psi needs at least one coefficient");
    }
    std::ostringstream name;
    name << "poly:";
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        name << (k ? "," : "") << coeffs[k];
    }
    auto value = [coeffs](double s) {
        const double l = std::log(s);
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 0;) {
            acc = acc * l + coeffs[k];
        }
        return acc;
    };
    auto deriv = [coeffs](double s) {
        const double l = std::log(s);
        double acc = 0.0;
        for (std::size_t k = coeffs.size(); k-- > 1;) {
            acc = acc * l + static_cast<double>(k) * coeffs[k];
        }
        return acc / s;
    };
    return PsiFunction(Spec{name.str(), value, deriv, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
}

PsiFunction PsiFunction::parse(const std::string& text) {
    constexpr std::string_view prefix = "poly:";
    if (text.rfind(prefix, 0) != 0) {
        return builtin(text);
    }
    std::vector<double> coeffs;
    std::istringstream ss(text.substr(prefix.size()));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            coeffs.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw PsiError("bad log-polynomial coefficient '" + tok + "'");
        }
    }
    return log_polynomial(std::move(coeffs));
}

double PsiFunction::inverse(double y) const {
    if (inverse_) {
        return (*inverse_)(y);
    }
    if (!increasing_) {
        throw PsiError("psi '" + name_ + "' is not increasing; no inverse");
    }
    double lo = std::log(1e-12);
    double hi = std::log(1e12);
    if (y < value_(std::exp(lo)) || y > value_(std::exp(hi))) {
        throw PsiError("inverse out of range");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (value_(std::exp(mid)) < y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

namespace {

// int_1^{1+d} h(r) dr by 16-point Gauss-Legendre.
template <typename H>
double integrate_from_one(double d, H&& h) {
    const double half = 0.5 * d;
    const double mid = 1.0 + half;
    double acc = 0.0;
    for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
        const double dx = half * kGlNodes[i];
        acc += kGlWeights[i] * (h(mid + dx) + h(mid - dx));
    }
    return acc * half;
}

}  // namespace

double psi_increment(const PsiFunction& psi, double y, double x) {
    const double d = (y - x) / x;
    if (std::abs(d) > 0.25) {
        return psi(y / x) - psi.at_one();
    }
    return integrate_from_one(d, [&](double r) { return psi.derivative(r); });
}

double psi_bar_value(const PsiFunction& psi, double y, double x) {
    const double d = (y - x) / x;
    const double d1 = psi.derivative_at_one();
    if (std::abs(d) > 0.25) {
        return d1 * d - (psi(y / x) - psi.at_one());
    }
    return integrate_from_one(d, [&](double r) { return d1 - psi.derivative(r); });
}

double psi_bar_value(const PsiFunction& psi, double s) {
    return psi_bar_value(psi, s, 1.0);
}

PsiFunction psi_bar(const PsiFunction& psi) {
    const double d1 = psi.derivative_at_one();
    return PsiFunction(PsiFunction::Spec{
        "bar(" + psi.name() + ")",
        [psi](double s) { return psi_bar_value(psi, s); },
        [psi, d1](double s) { return d1 - psi.derivative(s); },
        std::nullopt,
        std::nullopt, false, std::nullopt});
}

}  // namespace cdgraph
