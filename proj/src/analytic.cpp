#include "aoisim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aoisim/quadrature.hpp"

namespace aoisim {

namespace {

constexpr double kBracketLow = 0.5;      // infinite-battery lower bound
constexpr double kBracketHigh = 0.9012;  // B=1 optimum, upper bound
constexpr double kBracketGuard = 1e-6;   // keeps the log argument positive

double log_argument(double lambda) {
    return std::exp(-lambda) - 0.5 * lambda * lambda;
}

void check_domain(double lambda) {
    if (lambda < 0.0) {
        throw std::domain_error("lambda must be nonnegative");
    }
    if (!(log_argument(lambda) > 0.0)) {
        throw std::domain_error("lambda outside the domain of x1(lambda)");
    }
}

}  // namespace

double x1_of_lambda(double lambda) {
    check_domain(lambda);
    return -std::log(log_argument(lambda));
}

double p2_closed(double lambda) {
    check_domain(lambda);
    const double d = log_argument(lambda);
    const double e = std::exp(-lambda);
    return 0.5 * lambda * lambda + (lambda + 1.0) * e + lambda - (d + 1.0) * (-std::log(d));
}

ThresholdSolution solve_lambda_star(double tolerance) {
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("solver tolerance must be positive");
    }
    double lo = kBracketLow;
    double hi = kBracketHigh - kBracketGuard;
    const double f_lo = p2_closed(lo);
    const double f_hi = p2_closed(hi);
    if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
        throw std::runtime_error("bisection bracket lost its sign condition");
    }
    // p2 is strictly decreasing, so plain bisection converges monotonically.
    for (int iter = 0; iter < 200 && (hi - lo) > tolerance; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (p2_closed(mid) > 0.0 ? lo : hi) = mid;
    }
    const double root = 0.5 * (lo + hi);
    return ThresholdSolution{root, x1_of_lambda(root), root, tolerance};
}

EpochExpectations expected_epoch(double lambda, double x1) {
    if (!(lambda > 0.0) || !(x1 > 0.0)) {
        throw std::invalid_argument("expected_epoch requires positive thresholds");
    }
    namespace quad = aoisim::quadrature;
    const double far = x1 + quad::kTailCutoff;
    const auto y1 = [&](double t) { return std::max(t, x1); };
    const auto y2 = [&](double t) { return std::max(t, lambda); };

    // P(second arrival preempts the x1-schedule) = 1 - int e^{-y1}.
    const double q = 1.0 - quad::integrate_split(
        [&](double t) { return std::exp(-y1(t)); }, 0.0, far, {x1});

    // Conditional full-battery interludes accumulated between the first
    // update and the epoch-closing one.
    const double mid_area = quad::integrate_split(
        [&](double t) { return 0.5 * y2(t) * y2(t) * std::exp(-t); }, 0.0, x1,
        {std::min(lambda, x1)});
    const double mid_len = quad::integrate_split(
        [&](double t) { return y2(t) * std::exp(-t); }, 0.0, x1, {std::min(lambda, x1)});

    // Single-arrival return path.
    const double one_area = quad::integrate_split(
        [&](double t) { return 0.5 * y1(t) * y1(t) * std::exp(-y1(t)); }, 0.0, far, {x1});
    const double one_len = quad::integrate_split(
        [&](double t) { return y1(t) * std::exp(-y1(t)); }, 0.0, far, {x1});

    // Double-arrival first update: tau2 runs up to y1(tau1) - tau1, which is
    // zero past x1, so the outer integral lives on [0, x1].
    const auto inner = [&](double t1, bool squared) {
        const double hi = y1(t1) - t1;
        if (hi <= 0.0) {
            return 0.0;
        }
        const double kink = lambda - t1;
        std::vector<double> breaks;
        if (kink > 0.0 && kink < hi) {
            breaks.push_back(kink);
        }
        return quad::integrate_split(
            [&](double t2) {
                const double v = std::max(t1 + t2, lambda);
                return (squared ? 0.5 * v * v : v) * std::exp(-t1 - t2);
            },
            0.0, hi, breaks, 1e-12);
    };
    const double two_area = quad::integrate_split(
        [&](double t1) { return inner(t1, true); }, 0.0, x1, {std::min(lambda, x1)}, 1e-10);
    const double two_len = quad::integrate_split(
        [&](double t1) { return inner(t1, false); }, 0.0, x1, {std::min(lambda, x1)}, 1e-10);

    EpochExpectations out;
    out.expected_area =
        (0.5 * x1 * x1 + std::exp(x1) * mid_area) * q + one_area + two_area;
    out.expected_length = (x1 + std::exp(x1) * mid_len) * q + one_len + two_len;
    out.ratio = out.expected_area / out.expected_length;
    return out;
}

PatternSumResult pattern_sum_oracle(double lambda, double x1, int m_max) {
    if (m_max < 2) {
        throw std::invalid_argument("pattern_sum_oracle requires m_max >= 2");
    }
    if (!(lambda > 0.0) || !(x1 > 0.0)) {
        throw std::invalid_argument("pattern_sum_oracle requires positive thresholds");
    }

    // Elementary antiderivatives: int t e^-t = -(t+1)e^-t,
    // int t^2 e^-t = -(t^2+2t+2)e^-t, int t^3 e^-t = -(t^3+3t^2+6t+6)e^-t.
    const double c = std::min(lambda, x1);  // kink of max(t, lambda) inside [0, x1]
    const double ec = std::exp(-c);
    const double ex = std::exp(-x1);
    const double s = 1.0 - ex;  // P(gap <= x1)
    const double u = ex;        // P(gap > x1)
    const double q = 1.0 - (1.0 + x1) * ex;

    // E[1/2 y2(t)^2 ; t <= x1] and E[y2(t) ; t <= x1].
    const double b_area = 0.5 * lambda * lambda * (1.0 - ec) +
                          0.5 * ((c * c + 2.0 * c + 2.0) * ec - (x1 * x1 + 2.0 * x1 + 2.0) * ex);
    const double b_len =
        lambda * (1.0 - ec) + ((c + 1.0) * ec - (x1 + 1.0) * ex);

    // Pattern 1: single arrival, update at y1(tau1).
    const double one_area = 0.5 * x1 * x1 * x1 * ex + 0.5 * (x1 * x1 + 2.0 * x1 + 2.0) * ex;
    const double one_len = x1 * x1 * ex + (x1 + 1.0) * ex;

    // First update of every pattern m >= 2: E[1/2 ybar2^2 ; tau2 <= y1-tau1]
    // collapses to int_0^x1 w * f(max(w,lambda)) e^-w dw after substituting
    // the total age w = tau1 + tau2.
    const double a_area =
        0.5 * lambda * lambda * (1.0 - (c + 1.0) * ec) +
        0.5 * ((c * c * c + 3.0 * c * c + 6.0 * c + 6.0) * ec -
               (x1 * x1 * x1 + 3.0 * x1 * x1 + 6.0 * x1 + 6.0) * ex);
    const double a_len = lambda * (1.0 - (c + 1.0) * ec) +
                         ((c * c + 2.0 * c + 2.0) * ec - (x1 * x1 + 2.0 * x1 + 2.0) * ex);

    double sum_area = one_area;
    double sum_len = one_len;
    double geom = 1.0;  // s^(m-2)
    for (int m = 2; m <= m_max; ++m) {
        const double middles = static_cast<double>(m - 2);
        const double geom_mid = (m >= 3) ? geom / s : 0.0;  // s^(m-3)
        sum_area += u * (a_area * geom + q * middles * b_area * geom_mid +
                         q * 0.5 * x1 * x1 * geom);
        sum_len += u * (a_len * geom + q * middles * b_len * geom_mid + q * x1 * geom);
        geom *= s;
    }

    // Exact remainders of the geometric and arithmetico-geometric series.
    const double m_big = static_cast<double>(m_max);
    const double t1 = std::pow(s, m_big - 1.0) / (1.0 - s);
    const double t2 = ((m_big - 1.0) * std::pow(s, m_big - 2.0) * (1.0 - s) +
                       std::pow(s, m_big - 1.0)) /
                      ((1.0 - s) * (1.0 - s));

    PatternSumResult out;
    out.values.expected_area = sum_area;
    out.values.expected_length = sum_len;
    out.values.ratio = sum_area / sum_len;
    out.tail_bound_area = u * (a_area * t1 + q * b_area * t2 + q * 0.5 * x1 * x1 * t1);
    out.tail_bound_length = u * (a_len * t1 + q * b_len * t2 + q * x1 * t1);
    out.m_max = m_max;
    return out;
}

double pattern1_probability(double x1) {
    return (1.0 + x1) * std::exp(-x1);
}

const std::vector<std::pair<std::string, double>>& reference_constants() {
    static const std::vector<std::pair<std::string, double>> table = {
        {"b1_optimal", 0.9012},
        {"infinite_battery", 0.5},
        {"full_recharge_rate1", 0.59},
        {"full_recharge_rate_half", 1.18},
    };
    return table;
}

double reference_constant(const std::string& name) {
    for (const auto& [key, value] : reference_constants()) {
        if (key == name) {
            return value;
        }
    }
    throw std::invalid_argument("unknown reference constant: " + name);
}

}  // namespace aoisim
