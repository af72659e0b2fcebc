#pragma once

#include "mrtp/io.hpp"

namespace mrtp {

struct BenchConfig {
    std::vector<int> robot_counts{2, 4, 8, 16};
    int trials = 10;
    std::vector<PlanMode> modes{PlanMode::Prioritized, PlanMode::Coupled};
    uint64_t seed0 = 1;
    ScenarioParams params;
    std::string out_dir = "bench_out";
};
BenchConfig bench_config_from_json(const nlohmann::json& j);

struct TrialRecord {
    int n = 0;
    PlanMode mode = PlanMode::Prioritized;
    int trial = 0;
    uint64_t seed = 0;
    RunMetrics metrics;
};

struct BenchAggregate {
    int n = 0;
    PlanMode mode = PlanMode::Prioritized;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_mapf_s = 0.0;
    double mean_corridor_s = 0.0;
    double mean_opt_s = 0.0;
    double mean_total_s = 0.0;
    double median_opt_s = 0.0;
    double mean_cost = 0.0;  // over successful trials
};

struct CostGapRow {
    int n = 0;
    int paired = 0;  // trials where both modes succeeded
    double mean_prioritized = 0.0;
    double mean_coupled = 0.0;
    double gap_percent = 0.0;
};

struct BenchReport {
    BenchConfig config;
    std::vector<TrialRecord> records;
    std::vector<BenchAggregate> aggregates;
    std::vector<CostGapRow> cost_gaps;
};

// Runs every (N, trial) scenario under every configured mode; trial seeds
// are seed0 + trial so modes and robot counts see the same instances.
BenchReport run_bench(const BenchConfig& config);

std::string bench_csv(const BenchReport& report);
nlohmann::json bench_to_json(const BenchReport& report);
std::string bench_svg(const BenchReport& report);

// Writes bench.csv, bench.json and bench.svg under dir (created if needed).
void write_bench_outputs(const BenchReport& report, const std::string& dir);

}  // namespace mrtp
