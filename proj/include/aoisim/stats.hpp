#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aoisim {

struct EpochRecord;

enum class CiMethod {
    kBatchMeans,   // nonoverlapping batches of consecutive epochs (default)
    kDeltaMethod,  // linearized variance of the ratio estimator
};

struct RatioEstimate {
    double ratio = 0.0;
    double ci_halfwidth = 0.0;
    std::string method;
    int batches = 0;
};

// Long-run average age from complete epochs: (sum area)/(sum length) with a
// 95% confidence halfwidth. Requires at least 30 epochs.
RatioEstimate long_run_estimate(const std::vector<EpochRecord>& epochs,
                                CiMethod method = CiMethod::kBatchMeans, int batches = 100);

struct RenewalDiagnostics {
    double lag1_autocorr_length = 0.0;
    double lag1_autocorr_area = 0.0;
    double split_half_ks_statistic = 0.0;
    std::size_t n_epochs = 0;
};

// Advisory independence/stationarity checks on the epoch series. Requires
// at least 1000 epochs.
RenewalDiagnostics renewal_diagnostics(const std::vector<EpochRecord>& epochs);

double lag1_autocorrelation(const std::vector<double>& series);

// Two-sample Kolmogorov-Smirnov statistic and its asymptotic critical value
// c(alpha) * sqrt((n+m)/(n*m)); alpha in {0.10, 0.05, 0.02, 0.01}.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

// 97.5% Student-t quantile (95% two-sided intervals).
double student_t_975(int degrees_of_freedom);

}  // namespace aoisim
