#pragma once

#include <algorithm>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace aoisim::quadrature {

// Exponential-tail integrands are truncated this far past their last
// breakpoint: exp(-40) ~ 4e-18, far below the 1e-8 accuracy target.
inline constexpr double kTailCutoff = 40.0;

template <typename F>
double integrate(F&& f, double lo, double hi, double tol = 1e-11) {
    if (!(hi > lo)) {
        return 0.0;
    }
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 15>::integrate(std::forward<F>(f), lo, hi, 15, tol);
}

// Integrates over [lo, hi] split at the given interior breakpoints, so that
// kinks of piecewise integrands land on panel boundaries.
template <typename F>
double integrate_split(F&& f, double lo, double hi, std::vector<double> breaks,
                       double tol = 1e-11) {
    breaks.push_back(lo);
    breaks.push_back(hi);
    std::sort(breaks.begin(), breaks.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = std::clamp(breaks[i], lo, hi);
        const double b = std::clamp(breaks[i + 1], lo, hi);
        if (b > a) {
            total += integrate(f, a, b, tol);
        }
    }
    return total;
}

}  // namespace aoisim::quadrature
