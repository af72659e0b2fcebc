#pragma once

#include "mrtp/prioritizer.hpp"
#include "mrtp/scenario.hpp"
#include "mrtp/verifier.hpp"

namespace mrtp {

enum class PlanMode { Coupled, Prioritized, PrioritizedRandom };
const char* plan_mode_name(PlanMode m);
PlanMode plan_mode_from_string(const std::string& s);

struct StageTimes {
    double mapf_s = 0.0;
    double corridor_s = 0.0;
    double opt_s = 0.0;
    double verify_s = 0.0;
    double total_s = 0.0;  // mapf + corridor + opt
};

struct RunMetrics {
    bool success = false;
    std::string failure_stage;  // gates | mapf | corridor | opt | verify
    std::string message;
    PlanMode mode = PlanMode::Prioritized;
    uint64_t seed = 0;
    int n_robots = 0;
    StageTimes times;
    double total_cost = 0.0;  // optimization objective summed over robots
    int sum_of_costs = 0;
    int lower_bound = 0;
    int M = 0;
    int H = 0;
    std::vector<RobotGroup> groups;
    std::vector<GroupOutcome> outcomes;
    int quad_events = 0;
    VerificationReport discrete_report;
    VerificationReport traj_report;
};

struct PipelineOutput {
    RunMetrics metrics;
    DiscretePlan plan;
    std::vector<SampledPath> refs;
    std::vector<SafeCorridor> corridors;
    std::vector<OptimizedTrajectory> trajectories;
    double delta_t = 0.0;
};

// MAPF -> corridors -> trajectory optimization in the chosen mode, then the
// independent verifier; a verifier failure fails the run regardless of the
// solver outcome. PrioritizedRandom replaces the triple analysis with a
// seeded random partition into groups of at most three.
PipelineOutput run_pipeline(const Scenario& scenario, PlanMode mode);

// The random grouping used by the PrioritizedRandom baseline, exposed for
// tests: shuffle then chunk by three.
std::vector<RobotGroup> random_groups(int robot_count, uint64_t seed);

}  // namespace mrtp
