#pragma once

#include <string>
#include <utility>
#include <vector>

namespace aoisim {

// Optimal B=2 thresholds: lambda_star applies with a full battery, x1_star
// with one unit; by construction the achieved long-run average age equals
// lambda_star.
struct ThresholdSolution {
    double lambda_star = 0.0;
    double x1_star = 0.0;
    double objective = 0.0;
    double solver_tolerance = 0.0;
};

// Expected area under the age curve and expected duration of one renewal
// epoch started from the just-updated, empty-battery state.
struct EpochExpectations {
    double expected_area = 0.0;
    double expected_length = 0.0;
    double ratio = 0.0;
};

// Truncated pattern-enumeration evaluation of the same expectations, with
// the exact geometric remainder of the discarded tail.
struct PatternSumResult {
    EpochExpectations values;
    double tail_bound_area = 0.0;
    double tail_bound_length = 0.0;
    int m_max = 0;
};

// x1(lambda) = log(1 / (e^-lambda - lambda^2/2)). Throws std::domain_error
// once the argument of the log is nonpositive (boundary near 0.9012).
double x1_of_lambda(double lambda);

// Parameterized objective whose unique root is the optimal average age.
double p2_closed(double lambda);

// Bisects p2_closed on [0.5, 0.9012 - eps] down to the given bracket width.
ThresholdSolution solve_lambda_star(double tolerance);

// E[R] and E[L] for the energy-dependent threshold pair, evaluated by
// adaptive quadrature with panel breaks at the threshold kinks.
EpochExpectations expected_epoch(double lambda, double x1);

// Same expectations via the per-pattern series truncated at m_max updates;
// per-pattern moments use elementary antiderivatives, so this path shares
// nothing with the quadrature route.
PatternSumResult pattern_sum_oracle(double lambda, double x1, int m_max);

// Probability that an epoch closes with a single update.
double pattern1_probability(double x1);

// Documented comparison constants (reference values only, not computed).
const std::vector<std::pair<std::string, double>>& reference_constants();
double reference_constant(const std::string& name);

}  // namespace aoisim
