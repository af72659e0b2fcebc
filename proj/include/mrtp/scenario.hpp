#pragma once

#include <cstdint>
#include <random>

#include "mrtp/nlp.hpp"

namespace mrtp {

struct ScenarioParams {
    double D = 1.0;
    double delta_T = 1.6;
    int h = 5;
    double w = 1.5;  // ECBS suboptimality factor
    double resolution = 0.1;
    double corridor_step = 0.1;
    bool backward_arcs = true;
    double ecbs_timeout_s = 60.0;
    double solver_budget_s = 30.0;
    int solver_max_outer = 50;
    TrajOptWeights weights;
    TrajOptTolerances tolerances;
    uint64_t seed = 0;

    LatticeConfig lattice(const Vec2& origin = {0.0, 0.0}) const {
        return {D, delta_T, origin, backward_arcs};
    }
    SolverOptions solver_options() const {
        SolverOptions s;
        s.time_budget_s = solver_budget_s;
        s.max_outer = solver_max_outer;
        return s;
    }
};

struct Scenario {
    OccupancyGrid map;
    std::vector<RobotModel> robots;
    std::vector<Task> tasks;
    ScenarioParams params;
};

// All configuration gates: one-step transition feasibility, subdivision
// bound, task disjointness and clearance, lattice alignment of every task.
std::string validate_scenario(const Scenario& s);

// Unbiased uniform draw in [0, n); deterministic across platforms.
uint64_t rng_below(std::mt19937_64& rng, uint64_t n);

// The 10m x 12m warehouse with six 3m x 0.6m shelves. Starts and goals are
// drawn without replacement from the boundary cells and the per-shelf
// pick-up cells; identical seeds reproduce the scenario bit-exactly.
Scenario gen_warehouse(uint64_t seed, int n_robots, ScenarioParams params = {});

// Number of distinct start/goal slots gen_warehouse can hand out.
int warehouse_slot_count();

}  // namespace mrtp
