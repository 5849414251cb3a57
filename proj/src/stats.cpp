#include "aoisim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "aoisim/engine.hpp"

namespace aoisim {

namespace {

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        m += x;
    }
    return m / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) {
        s += (x - mean) * (x - mean);
    }
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

double student_t_975(int degrees_of_freedom) {
    if (degrees_of_freedom < 1) {
        throw std::invalid_argument("student_t_975 needs at least one degree of freedom");
    }
    boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
    return boost::math::quantile(dist, 0.975);
}

RatioEstimate long_run_estimate(const std::vector<EpochRecord>& epochs, CiMethod method,
                                int batches) {
    const std::size_t n = epochs.size();
    if (n < 30) {
        throw std::invalid_argument("long_run_estimate requires at least 30 epochs");
    }
    double total_area = 0.0;
    double total_length = 0.0;
    for (const EpochRecord& e : epochs) {
        total_area += e.area;
        total_length += e.length;
    }
    RatioEstimate out;
    out.ratio = total_area / total_length;

    if (method == CiMethod::kDeltaMethod) {
        // Var of the ratio via the linearization d_i = A_i - ratio * L_i.
        const double mean_length = total_length / static_cast<double>(n);
        double var_d = 0.0;
        for (const EpochRecord& e : epochs) {
            const double d = e.area - out.ratio * e.length;
            var_d += d * d;
        }
        var_d /= static_cast<double>(n - 1);
        out.ci_halfwidth = 1.959963984540054 * std::sqrt(var_d / static_cast<double>(n)) /
                           mean_length;
        out.method = "delta_method";
        out.batches = 0;
        return out;
    }

    const int k = std::min<int>(batches, static_cast<int>(n));
    std::vector<double> batch_ratios;
    batch_ratios.reserve(static_cast<std::size_t>(k));
    std::size_t begin = 0;
    for (int j = 0; j < k; ++j) {
        const std::size_t end = n * static_cast<std::size_t>(j + 1) / static_cast<std::size_t>(k);
        double a = 0.0;
        double l = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            a += epochs[i].area;
            l += epochs[i].length;
        }
        batch_ratios.push_back(a / l);
        begin = end;
    }
    const double m = mean_of(batch_ratios);
    const double var = sample_variance(batch_ratios, m);
    out.ci_halfwidth = student_t_975(k - 1) * std::sqrt(var / static_cast<double>(k));
    out.method = "batch_means";
    out.batches = k;
    return out;
}

double lag1_autocorrelation(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 2) {
        throw std::invalid_argument("lag1_autocorrelation requires at least two values");
    }
    const double m = mean_of(series);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = series[i] - m;
        den += d * d;
        if (i + 1 < n) {
            num += d * (series[i + 1] - m);
        }
    }
    if (den == 0.0) {
        return 0.0;  // constant series
    }
    return num / den;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_two_sample requires nonempty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t ia = 0;
    std::size_t ib = 0;
    double d_max = 0.0;
    // Both CDFs jump together at tied values (the length distribution has
    // atoms at the thresholds), so consume whole tie groups per step.
    while (ia < a.size() && ib < b.size()) {
        const double v = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] == v) {
            ++ia;
        }
        while (ib < b.size() && b[ib] == v) {
            ++ib;
        }
        d_max = std::max(d_max, std::abs(static_cast<double>(ia) / na -
                                         static_cast<double>(ib) / nb));
    }
    return d_max;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
    struct Entry {
        double alpha;
        double c;
    };
    static constexpr Entry table[] = {{0.10, 1.224}, {0.05, 1.358}, {0.02, 1.517}, {0.01, 1.628}};
    for (const Entry& e : table) {
        if (std::abs(e.alpha - alpha) < 1e-12) {
            const double nn = static_cast<double>(n);
            const double mm = static_cast<double>(m);
            return e.c * std::sqrt((nn + mm) / (nn * mm));
        }
    }
    throw std::invalid_argument("ks_critical_value: unsupported alpha");
}

RenewalDiagnostics renewal_diagnostics(const std::vector<EpochRecord>& epochs) {
    if (epochs.size() < 1000) {
        throw std::invalid_argument("renewal_diagnostics requires at least 1000 epochs");
    }
    std::vector<double> lengths;
    std::vector<double> areas;
    lengths.reserve(epochs.size());
    areas.reserve(epochs.size());
    for (const EpochRecord& e : epochs) {
        lengths.push_back(e.length);
        areas.push_back(e.area);
    }
    RenewalDiagnostics out;
    out.n_epochs = epochs.size();
    out.lag1_autocorr_length = lag1_autocorrelation(lengths);
    out.lag1_autocorr_area = lag1_autocorrelation(areas);
    const std::size_t half = lengths.size() / 2;
    out.split_half_ks_statistic =
        ks_two_sample(std::vector<double>(lengths.begin(), lengths.begin() + half),
                      std::vector<double>(lengths.begin() + half, lengths.end()));
    return out;
}

}  // namespace aoisim
