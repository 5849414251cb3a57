#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "aoisim/cli.hpp"
#include "aoisim/json_io.hpp"
#include "reference_values.hpp"

using namespace aoisim;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return CliResult{code, out.str(), err.str()};
}

json parse_without_meta(const std::string& text) {
    json j = json::parse(text);
    j.erase("meta");
    return j;
}

}  // namespace

TEST_CASE("solve prints the optimum as JSON") {
    const CliResult r = run({"solve", "--tol", "1e-8"});
    REQUIRE(r.code == exit_code::kOk);
    const json j = json::parse(r.out);
    CHECK(j.at("meta").at("schema_version") == "1");
    const double lambda_star = j.at("solution").at("lambda_star").get<double>();
    const double x1_star = j.at("solution").at("x1_star").get<double>();
    CHECK(std::abs(lambda_star - 0.72) < 0.005);
    CHECK(std::abs(x1_star - 1.48) < 0.01);
}

TEST_CASE("solve is deterministic across invocations") {
    const CliResult a = run({"solve"});
    const CliResult b = run({"solve"});
    REQUIRE(a.code == exit_code::kOk);
    CHECK(parse_without_meta(a.out) == parse_without_meta(b.out));
}

TEST_CASE("solve rejects a nonpositive tolerance") {
    const CliResult r = run({"solve", "--tol", "0"});
    CHECK(r.code == exit_code::kUsage);
}

TEST_CASE("simulate runs presets and JSON policies") {
    const CliResult preset =
        run({"simulate", "--battery", "2", "--policy", "optimal-b2", "--horizon", "2e4",
             "--seed", "7"});
    REQUIRE(preset.code == exit_code::kOk);
    const json pj = json::parse(preset.out);
    CHECK(std::abs(pj.at("result").at("average_age").get<double>() - 0.72) < 0.05);
    CHECK(pj.at("policy").at("type") == "threshold_b2");

    const CliResult b1 =
        run({"simulate", "--battery", "1", "--policy",
             R"({"type":"single_threshold","threshold":0.9012})", "--horizon", "2e4"});
    REQUIRE(b1.code == exit_code::kOk);
    const json bj = json::parse(b1.out);
    CHECK(std::abs(bj.at("result").at("average_age").get<double>() - 0.9012) < 0.05);
}

TEST_CASE("simulate exit codes separate usage, domain, and incompatibility") {
    CHECK(run({"simulate", "--policy", "no-such-preset"}).code == exit_code::kUsage);
    CHECK(run({"simulate", "--policy", "{not json"}).code == exit_code::kUsage);
    CHECK(run({"simulate", "--policy", R"({"type":"uniform","speed":2})"}).code ==
          exit_code::kUsage);
    CHECK(run({"simulate", "--battery", "2", "--policy",
               R"({"type":"energy_aware","z":3})"})
              .code == exit_code::kDomain);
    CHECK(run({"simulate", "--battery", "3", "--policy", "optimal-b2"}).code ==
          exit_code::kIncompatible);
    CHECK(run({"simulate", "--battery", "2", "--policy", "optimal-b2", "--horizon", "-5"})
              .code == exit_code::kIncompatible);
    CHECK(run({"simulate"}).code == exit_code::kUsage);  // --policy is required
}

TEST_CASE("simulate is deterministic and can stream epochs to CSV") {
    const std::string csv_path = "cli_epochs_test.csv";
    const std::vector<std::string> args = {"simulate", "--battery",    "2",
                                           "--policy", "optimal-b2",   "--horizon",
                                           "5e3",      "--seed",       "42",
                                           "--epochs-csv", csv_path};
    const CliResult a = run(args);
    const CliResult b = run(args);
    REQUIRE(a.code == exit_code::kOk);
    CHECK(parse_without_meta(a.out) == parse_without_meta(b.out));

    std::ifstream csv(csv_path);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "epoch_index,length,area,update_count,pattern_index");
    std::string first_row;
    std::getline(csv, first_row);
    CHECK_FALSE(first_row.empty());
    std::remove(csv_path.c_str());
}

TEST_CASE("compare emits a stable schema with paper reference rows") {
    const CliResult r =
        run({"compare", "--seeds", "2", "--horizon", "2e3", "--threads", "2"});
    REQUIRE(r.code == exit_code::kOk);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "policy,source,battery,seeds,horizon,average_age,ci_halfwidth");
    int simulation_rows = 0;
    int paper_rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find(",simulation,") != std::string::npos) {
            ++simulation_rows;
        }
        if (line.find(",paper,") != std::string::npos) {
            ++paper_rows;
        }
    }
    CHECK(simulation_rows == 6);  // four baselines + two restart variants
    CHECK(paper_rows == 4);
    CHECK(r.out.find("b1_optimal,paper") != std::string::npos);
    CHECK(r.out.find("0.9012") != std::string::npos);
    CHECK(r.out.find("0.59") != std::string::npos);
    CHECK(r.out.find("1.18") != std::string::npos);

    const CliResult single = run({"compare", "--seeds", "1", "--horizon", "2e3",
                                  "--no-restart-variants"});
    REQUIRE(single.code == exit_code::kOk);
    std::istringstream single_lines(single.out);
    std::getline(single_lines, header);
    CHECK(header == "policy,source,battery,seeds,horizon,average_age,ci_halfwidth");
}

TEST_CASE("compare writes CSV and JSON files on request") {
    const std::string csv_path = "cli_compare_test.csv";
    const std::string json_path = "cli_compare_test.json";
    const CliResult r = run({"compare", "--seeds", "1", "--horizon", "1e3", "--csv", csv_path,
                             "--json", json_path});
    REQUIRE(r.code == exit_code::kOk);

    std::ifstream csv(csv_path);
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "policy,source,battery,seeds,horizon,average_age,ci_halfwidth");

    std::ifstream jf(json_path);
    REQUIRE(jf.good());
    const json report = json::parse(jf);
    CHECK(report.at("rows").size() == 10);
    CHECK(report.at("config").at("battery_capacity") == 2);
    std::remove(csv_path.c_str());
    std::remove(json_path.c_str());
}

TEST_CASE("simulate warns about non-monotone thresholds but proceeds") {
    const CliResult r = run({"simulate", "--battery", "3", "--policy",
                             R"({"type":"general_threshold","thresholds":[0.5,0.9,0.7]})",
                             "--horizon", "1e3"});
    CHECK(r.code == exit_code::kOk);
    CHECK(r.err.find("nonincreasing") != std::string::npos);
}

TEST_CASE("simulate writes its JSON to a file on request") {
    const std::string out_path = "cli_sim_test.json";
    const CliResult r = run({"simulate", "--battery", "2", "--policy", "optimal-b2",
                             "--horizon", "1e3", "--out", out_path});
    REQUIRE(r.code == exit_code::kOk);
    CHECK(r.out.empty());
    std::ifstream jf(out_path);
    REQUIRE(jf.good());
    const json report = json::parse(jf);
    CHECK(report.at("result").contains("average_age"));
    std::remove(out_path.c_str());
}

TEST_CASE("lambda sweep locates the optimum on the grid") {
    const CliResult r = run({"sweep", "--mode", "lambda", "--min", "0.55", "--max", "0.85",
                             "--points", "31"});
    REQUIRE(r.code == exit_code::kOk);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "mode,lambda,x1,battery,z,analytic_ratio,sim_average_age,sim_ci_halfwidth");
    std::string line;
    double best_lambda = 0.0;
    double best_ratio = 1e9;
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string mode, lambda, x1, battery, z, ratio;
        std::getline(cells, mode, ',');
        std::getline(cells, lambda, ',');
        std::getline(cells, x1, ',');
        std::getline(cells, battery, ',');
        std::getline(cells, z, ',');
        std::getline(cells, ratio, ',');
        const double ratio_value = std::stod(ratio);
        if (ratio_value < best_ratio) {
            best_ratio = ratio_value;
            best_lambda = std::stod(lambda);
        }
    }
    CHECK(rows == 31);
    CHECK(std::abs(best_lambda - 0.72) < 0.02);
}

TEST_CASE("3x3 grid sweep is minimal at the center") {
    const CliResult r = run({"sweep", "--mode", "grid", "--delta", "0.1"});
    REQUIRE(r.code == exit_code::kOk);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);  // header
    std::vector<double> ratios;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::string cell;
        for (int i = 0; i < 6; ++i) {
            std::getline(cells, cell, ',');
        }
        ratios.push_back(std::stod(cell));
    }
    REQUIRE(ratios.size() == 9);
    const double center = ratios[4];  // row-major 3x3
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (i != 4) {
            CHECK(center <= ratios[i]);
        }
    }
}

TEST_CASE("sweep usage errors") {
    CHECK(run({"sweep"}).code == exit_code::kUsage);
    CHECK(run({"sweep", "--mode", "spiral"}).code == exit_code::kUsage);
    CHECK(run({"sweep", "--mode", "battery"}).code == exit_code::kUsage);  // missing values
    CHECK(run({"sweep", "--mode", "lambda", "--points", "1"}).code == exit_code::kUsage);
}

TEST_CASE("z and battery sweeps simulate each cell") {
    const CliResult z = run({"sweep", "--mode", "z", "--values", "0,1,2", "--horizon", "2e3"});
    REQUIRE(z.code == exit_code::kOk);
    CHECK(std::count(z.out.begin(), z.out.end(), '\n') == 4);  // header + 3 rows

    const CliResult battery =
        run({"sweep", "--mode", "battery", "--values", "1,2,50", "--horizon", "2e3"});
    REQUIRE(battery.code == exit_code::kOk);
    CHECK(std::count(battery.out.begin(), battery.out.end(), '\n') == 4);
}

TEST_CASE("version and missing subcommand") {
    const CliResult v = run({"--version"});
    CHECK(v.code == exit_code::kOk);
    CHECK(v.out.find("aoisim") != std::string::npos);
    CHECK(run({}).code == exit_code::kUsage);
}
