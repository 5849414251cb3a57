#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aoisim/policies.hpp"

namespace aoisim {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kDomain = 3;        // log-domain violations, lost brackets
inline constexpr int kIncompatible = 4;  // policy cannot drive the configured system
}  // namespace exit_code

struct CompareConfig {
    int seeds = 50;
    double horizon = 1e5;
    std::uint64_t base_seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    bool include_restart_variants = true;
};

struct CompareRow {
    std::string policy;
    std::string source;  // "simulation" or "paper"
    std::optional<int> battery;
    std::optional<int> seeds;
    std::optional<double> horizon;
    double average_age = 0.0;
    std::optional<double> ci_halfwidth;
};

// Runs the B=2 baseline comparison over common-random-number seeds and
// appends the documented reference constants as paper-sourced rows.
std::vector<CompareRow> run_comparison(const CompareConfig& config);

enum class SweepMode { kLambda, kGrid, kBattery, kZ };

struct SweepConfig {
    SweepMode mode = SweepMode::kLambda;
    double lambda_min = 0.55;
    double lambda_max = 0.85;
    int points = 31;
    double delta = 0.1;
    std::vector<int> values;  // battery sizes or z values
    int battery = 2;          // for the z sweep
    double period = 1.0;      // for the battery sweep
    bool simulate = false;
    double horizon = 1e5;
    std::uint64_t seed = 1;
};

struct SweepRow {
    std::string mode;
    std::optional<double> lambda;
    std::optional<double> x1;
    std::optional<int> battery;
    std::optional<int> z;
    std::optional<double> analytic_ratio;
    std::optional<double> sim_average_age;
    std::optional<double> sim_ci_halfwidth;
};

std::vector<SweepRow> run_sweep(const SweepConfig& config);

// Full command-line entry point; returns the process exit code. The vector
// overload omits the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aoisim
