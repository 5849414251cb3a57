#include "aoisim/cli.hpp"

#include <atomic>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "aoisim/analytic.hpp"
#include "aoisim/engine.hpp"
#include "aoisim/format.hpp"
#include "aoisim/json_io.hpp"
#include "aoisim/rng.hpp"
#include "aoisim/stats.hpp"
#include "aoisim/version.hpp"

namespace aoisim {

namespace {

json make_meta() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return json{{"schema_version", kSchemaVersion}, {"generated_at", stamp}};
}

PolicySpec resolve_policy(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        const json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded()) {
            throw std::invalid_argument("policy is not valid JSON: " + text);
        }
        return policy_from_json(parsed);
    }
    if (text == "optimal-b2") {
        const ThresholdSolution sol = solve_lambda_star(1e-10);
        return ThresholdB2Params{sol.lambda_star, sol.x1_star};
    }
    throw std::invalid_argument("unknown policy preset: " + text);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw std::ios_base::failure("cannot open output file: " + path);
    }
    out << content;
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::string csv_cell(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

// ---- compare ----------------------------------------------------------

struct SeedStats {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
};

SeedStats across_seed_stats(const std::vector<double>& values) {
    const auto n = static_cast<double>(values.size());
    SeedStats out;
    for (double v : values) {
        out.mean += v;
    }
    out.mean /= n;
    if (values.size() < 2) {
        return out;
    }
    double var = 0.0;
    for (double v : values) {
        var += (v - out.mean) * (v - out.mean);
    }
    var /= (n - 1.0);
    out.ci_halfwidth =
        student_t_975(static_cast<int>(values.size()) - 1) * std::sqrt(var / n);
    return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << "policy,source,battery,seeds,horizon,average_age,ci_halfwidth\n";
    for (const CompareRow& row : rows) {
        out << row.policy << ',' << row.source << ',' << csv_cell(row.battery) << ','
            << csv_cell(row.seeds) << ',' << csv_cell(row.horizon) << ','
            << format_double(row.average_age) << ',' << csv_cell(row.ci_halfwidth) << '\n';
    }
    return out.str();
}

json compare_json_rows(const std::vector<CompareRow>& rows) {
    json arr = json::array();
    for (const CompareRow& row : rows) {
        json item{{"policy", row.policy},
                  {"source", row.source},
                  {"average_age", row.average_age}};
        item["battery"] = row.battery ? json(*row.battery) : json();
        item["seeds"] = row.seeds ? json(*row.seeds) : json();
        item["horizon"] = row.horizon ? json(*row.horizon) : json();
        item["ci_halfwidth"] = row.ci_halfwidth ? json(*row.ci_halfwidth) : json();
        arr.push_back(std::move(item));
    }
    return arr;
}

// ---- sweep ------------------------------------------------------------

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "mode,lambda,x1,battery,z,analytic_ratio,sim_average_age,sim_ci_halfwidth\n";
    for (const SweepRow& row : rows) {
        out << row.mode << ',' << csv_cell(row.lambda) << ',' << csv_cell(row.x1) << ','
            << csv_cell(row.battery) << ',' << csv_cell(row.z) << ','
            << csv_cell(row.analytic_ratio) << ',' << csv_cell(row.sim_average_age) << ','
            << csv_cell(row.sim_ci_halfwidth) << '\n';
    }
    return out.str();
}

}  // namespace

std::vector<CompareRow> run_comparison(const CompareConfig& config) {
    if (config.seeds < 1) {
        throw std::invalid_argument("compare needs at least one seed");
    }
    if (!(config.horizon > 0.0)) {
        throw IncompatibleError("horizon must be positive");
    }
    const ThresholdSolution sol = solve_lambda_star(1e-10);

    std::vector<std::pair<std::string, PolicySpec>> policies = {
        {"optimal-b2", ThresholdB2Params{sol.lambda_star, sol.x1_star}},
        {"uniform-z0", UniformParams{1.0}},
        {"energy-aware-z1", EnergyAwareParams{1, 0, false}},
        {"energy-aware-z2", EnergyAwareParams{2, 0, false}},
    };
    if (config.include_restart_variants) {
        policies.emplace_back("energy-aware-z1-restart", EnergyAwareParams{1, 0, true});
        policies.emplace_back("energy-aware-z2-restart", EnergyAwareParams{2, 0, true});
    }

    // Common random numbers: seed i is shared by every policy.
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(config.seeds));
    for (int i = 0; i < config.seeds; ++i) {
        seeds[static_cast<std::size_t>(i)] =
            derive_stream_seed(config.base_seed, static_cast<std::uint64_t>(i));
    }

    const std::size_t jobs = policies.size() * seeds.size();
    std::vector<double> ages(jobs, 0.0);
    unsigned workers = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs));

    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t j = cursor.fetch_add(1); j < jobs; j = cursor.fetch_add(1)) {
            const std::size_t p = j / seeds.size();
            const std::size_t s = j % seeds.size();
            SystemParams params;
            params.battery_capacity = 2;
            params.arrival_rate = 1.0;
            params.horizon = config.horizon;
            params.seed = seeds[s];
            ages[j] = simulate(params, policies[p].second).average_age;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }

    std::vector<CompareRow> rows;
    for (std::size_t p = 0; p < policies.size(); ++p) {
        std::vector<double> per_seed(ages.begin() + static_cast<std::ptrdiff_t>(p * seeds.size()),
                                     ages.begin() +
                                         static_cast<std::ptrdiff_t>((p + 1) * seeds.size()));
        const SeedStats stats = across_seed_stats(per_seed);
        CompareRow row;
        row.policy = policies[p].first;
        row.source = "simulation";
        row.battery = 2;
        row.seeds = config.seeds;
        row.horizon = config.horizon;
        row.average_age = stats.mean;
        row.ci_halfwidth = stats.ci_halfwidth;
        rows.push_back(std::move(row));
    }
    for (const auto& [name, value] : reference_constants()) {
        CompareRow row;
        row.policy = name;
        row.source = "paper";
        row.average_age = value;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    std::vector<SweepRow> rows;

    auto simulate_cell = [&](const PolicySpec& spec, int battery) {
        SystemParams params;
        params.battery_capacity = battery;
        params.horizon = config.horizon;
        params.seed = config.seed;  // shared seed: cells differ only by policy
        return simulate(params, spec);
    };
    auto threshold_cell = [&](double lambda, double x1) {
        SweepRow row;
        row.lambda = lambda;
        row.x1 = x1;
        row.battery = 2;
        row.analytic_ratio = expected_epoch(lambda, x1).ratio;
        if (config.simulate) {
            const SimResult sim =
                simulate_cell(GeneralThresholdParams{{x1, lambda}}, 2);
            row.sim_average_age = sim.average_age;
            row.sim_ci_halfwidth = sim.ci_halfwidth;
        }
        return row;
    };

    switch (config.mode) {
        case SweepMode::kLambda: {
            if (config.points < 2 || !(config.lambda_max > config.lambda_min)) {
                throw std::invalid_argument("lambda sweep needs points >= 2 and max > min");
            }
            for (int i = 0; i < config.points; ++i) {
                const double lambda =
                    config.lambda_min + (config.lambda_max - config.lambda_min) *
                                            static_cast<double>(i) /
                                            static_cast<double>(config.points - 1);
                SweepRow row = threshold_cell(lambda, x1_of_lambda(lambda));
                row.mode = "lambda";
                rows.push_back(std::move(row));
            }
            break;
        }
        case SweepMode::kGrid: {
            if (!(config.delta > 0.0)) {
                throw std::invalid_argument("grid sweep needs a positive delta");
            }
            const ThresholdSolution sol = solve_lambda_star(1e-10);
            for (int i = -1; i <= 1; ++i) {
                for (int j = -1; j <= 1; ++j) {
                    const double lambda = sol.lambda_star + config.delta * i;
                    const double x1 = sol.x1_star + config.delta * j;
                    SweepRow row = threshold_cell(lambda, x1);
                    row.mode = "grid";
                    rows.push_back(std::move(row));
                }
            }
            break;
        }
        case SweepMode::kBattery: {
            if (config.values.empty()) {
                throw std::invalid_argument("battery sweep needs --values");
            }
            for (int b : config.values) {
                const SimResult sim = simulate_cell(UniformParams{config.period}, b);
                SweepRow row;
                row.mode = "battery";
                row.battery = b;
                row.sim_average_age = sim.average_age;
                row.sim_ci_halfwidth = sim.ci_halfwidth;
                rows.push_back(std::move(row));
            }
            break;
        }
        case SweepMode::kZ: {
            if (config.values.empty()) {
                throw std::invalid_argument("z sweep needs --values");
            }
            for (int z : config.values) {
                const SimResult sim =
                    simulate_cell(EnergyAwareParams{z, 0, false}, config.battery);
                SweepRow row;
                row.mode = "z";
                row.battery = config.battery;
                row.z = z;
                row.sim_average_age = sim.average_age;
                row.sim_ci_halfwidth = sim.ci_halfwidth;
                rows.push_back(std::move(row));
            }
            break;
        }
    }
    return rows;
}

namespace {

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Age-of-information simulator and threshold-policy solver"};
    app.set_version_flag("--version", std::string("aoisim ") + kVersion + " (schema " +
                                          kSchemaVersion + ")");
    app.require_subcommand(0, 1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve for the optimal B=2 thresholds");
    double tol = 1e-10;
    solve_cmd->add_option("--tol", tol, "Bisection tolerance on lambda");
    std::string solve_out_path;
    solve_cmd->add_option("--out", solve_out_path, "Write JSON here instead of stdout");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Run one simulation");
    int battery = 2;
    double horizon = 1e6;
    double rate = 1.0;
    std::uint64_t seed = 1;
    std::string policy_text;
    std::string epochs_csv;
    std::string sim_out_path;
    sim_cmd->add_option("--battery", battery, "Battery capacity B");
    sim_cmd->add_option("--policy", policy_text, "Policy JSON or preset (optimal-b2)")
        ->required();
    sim_cmd->add_option("--horizon", horizon, "Simulated time T");
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_option("--rate", rate, "Energy arrival rate");
    sim_cmd->add_option("--epochs-csv", epochs_csv, "Stream epoch records to this CSV file");
    sim_cmd->add_option("--out", sim_out_path, "Write JSON here instead of stdout");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Baseline comparison at B=2");
    CompareConfig cmp;
    std::string cmp_csv_path;
    std::string cmp_json_path;
    cmp_cmd->add_option("--seeds", cmp.seeds, "Number of common-random-number seeds");
    cmp_cmd->add_option("--horizon", cmp.horizon, "Simulated time per run");
    cmp_cmd->add_option("--base-seed", cmp.base_seed, "Base seed for the seed sequence");
    cmp_cmd->add_option("--threads", cmp.threads, "Worker threads (0 = auto)");
    bool no_restart_variants = false;
    cmp_cmd->add_flag("--no-restart-variants", no_restart_variants,
                      "Skip the restart-on-delivery energy-aware rows");
    cmp_cmd->add_option("--csv", cmp_csv_path, "Also write the CSV table here");
    cmp_cmd->add_option("--json", cmp_json_path, "Also write the JSON report here");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid evaluation of policies");
    SweepConfig sweep;
    std::string sweep_mode;
    std::string sweep_csv_path;
    std::vector<int> sweep_values;
    sweep_cmd->add_option("--mode", sweep_mode, "lambda | grid | battery | z");
    sweep_cmd->add_option("--min", sweep.lambda_min, "Lambda grid start");
    sweep_cmd->add_option("--max", sweep.lambda_max, "Lambda grid end");
    sweep_cmd->add_option("--points", sweep.points, "Lambda grid size");
    sweep_cmd->add_option("--delta", sweep.delta, "Perturbation for the 3x3 grid");
    sweep_cmd->add_option("--values", sweep_values, "Battery sizes or z values")
        ->delimiter(',');
    sweep_cmd->add_option("--battery", sweep.battery, "Battery capacity for the z sweep");
    sweep_cmd->add_option("--period", sweep.period, "Uniform period for the battery sweep");
    sweep_cmd->add_flag("--simulate", sweep.simulate, "Also simulate each cell");
    sweep_cmd->add_option("--horizon", sweep.horizon, "Simulated time per cell");
    sweep_cmd->add_option("--seed", sweep.seed, "RNG seed shared by all cells");
    sweep_cmd->add_option("--csv", sweep_csv_path, "Write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code::kUsage;
    }

    if (app.get_subcommands().empty()) {
        err << app.help();
        return exit_code::kUsage;
    }

    if (solve_cmd->parsed()) {
        if (!(tol > 0.0)) {
            err << "solve: --tol must be positive\n";
            return exit_code::kUsage;
        }
        const ThresholdSolution sol = solve_lambda_star(tol);
        json output{{"meta", make_meta()}, {"solution", to_json(sol)}};
        const std::string text = output.dump(2) + "\n";
        if (solve_out_path.empty()) {
            out << text;
        } else {
            write_file(solve_out_path, text);
        }
        return exit_code::kOk;
    }

    if (sim_cmd->parsed()) {
        const PolicySpec spec = resolve_policy(policy_text);
        SystemParams params;
        params.battery_capacity = battery;
        params.arrival_rate = rate;
        params.horizon = horizon;
        params.seed = seed;
        std::string warnings;
        SimulateOptions options;
        options.warnings = &warnings;
        const SimResult result = simulate(params, spec, options);
        if (!warnings.empty()) {
            err << "warning: " << warnings;
        }
        if (!epochs_csv.empty()) {
            std::ofstream csv(epochs_csv);
            if (!csv) {
                throw std::ios_base::failure("cannot open output file: " + epochs_csv);
            }
            write_epoch_csv(csv, result.epochs);
        }
        json output{{"meta", make_meta()},
                    {"params",
                     {{"battery_capacity", params.battery_capacity},
                      {"arrival_rate", params.arrival_rate},
                      {"horizon", params.horizon},
                      {"seed", params.seed}}},
                    {"policy", policy_to_json(spec)},
                    {"result", to_json(result)}};
        const std::string text = output.dump(2) + "\n";
        if (sim_out_path.empty()) {
            out << text;
        } else {
            write_file(sim_out_path, text);
        }
        return exit_code::kOk;
    }

    if (cmp_cmd->parsed()) {
        cmp.include_restart_variants = !no_restart_variants;
        const std::vector<CompareRow> rows = run_comparison(cmp);
        const std::string csv = compare_csv(rows);
        out << csv;
        if (!cmp_csv_path.empty()) {
            write_file(cmp_csv_path, csv);
        }
        if (!cmp_json_path.empty()) {
            json output{{"meta", make_meta()},
                        {"config",
                         {{"seeds", cmp.seeds},
                          {"horizon", cmp.horizon},
                          {"base_seed", cmp.base_seed},
                          {"battery_capacity", 2}}},
                        {"rows", compare_json_rows(rows)}};
            write_file(cmp_json_path, output.dump(2) + "\n");
        }
        return exit_code::kOk;
    }

    if (sweep_cmd->parsed()) {
        if (sweep_mode == "lambda") {
            sweep.mode = SweepMode::kLambda;
        } else if (sweep_mode == "grid") {
            sweep.mode = SweepMode::kGrid;
        } else if (sweep_mode == "battery") {
            sweep.mode = SweepMode::kBattery;
        } else if (sweep_mode == "z") {
            sweep.mode = SweepMode::kZ;
        } else {
            err << "sweep: --mode must be one of lambda, grid, battery, z\n";
            return exit_code::kUsage;
        }
        sweep.values = sweep_values;
        const std::vector<SweepRow> rows = run_sweep(sweep);
        const std::string csv = sweep_csv(rows);
        if (sweep_csv_path.empty()) {
            out << csv;
        } else {
            write_file(sweep_csv_path, csv);
        }
        return exit_code::kOk;
    }

    err << app.help();
    return exit_code::kUsage;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(argc, argv, out, err);
    } catch (const IncompatibleError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kIncompatible;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kUsage;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::kDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.emplace_back("aoisim");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& s : full) {
        argv.push_back(s.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace aoisim
