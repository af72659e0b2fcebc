#pragma once

#include <array>

#include "mrtp/nlp.hpp"

namespace mrtp {

// Ordered multiset of robot-index triples, one entry per (triple, timestep)
// detection; entries sorted ascending internally, appended in (timestep,
// lexicographic) order.
struct TripleList {
    std::vector<std::array<int, 3>> entries;
};

using RobotGroup = std::vector<int>;

// Highest priority first; groups partition the robot indices.
struct PriorityGroups {
    std::vector<RobotGroup> groups;
};

// Scans every timestep 1..H of the reference trajectories for robot triples
// whose three pairwise distances all fall within sqrt(2)*D.
TripleList find_triples(const std::vector<SampledPath>& refs, double D);

// Greedy grouping by triple frequency: repeatedly take the most common
// element (ties: lexicographically smallest), remove its members from the
// remaining elements, then append never-listed robots as singletons.
PriorityGroups assign_priorities(const TripleList& triples, int robot_count);

// Timesteps at which some four robots are pairwise within sqrt(2)*D; logged
// by the harness, never fatal.
int count_quadruple_events(const std::vector<SampledPath>& refs, double D);

struct GroupOutcome {
    RobotGroup robots;
    bool feasible = false;
    double cost = 0.0;
    SolveDiagnostics diag;
};

struct MultiSolveResult {
    bool success = false;
    std::vector<OptimizedTrajectory> trajectories;  // robot-index order when successful
    double total_cost = 0.0;
    std::vector<RobotGroup> groups;
    std::vector<GroupOutcome> outcomes;
    int failed_group = -1;  // index into groups when !success
};

// Sequential group-by-group solves, earlier groups becoming hard separation
// constraints for later ones. Aborts at the first infeasible group.
MultiSolveResult grouped_solve(const std::vector<RobotModel>& robots,
                               const std::vector<SafeCorridor>& corridors,
                               const std::vector<SampledPath>& refs,
                               const std::vector<RobotGroup>& groups,
                               const TrajOptWeights& weights, const SolverOptions& sopts,
                               const TrajOptTolerances& tol = {});

// Grouping from triple analysis of the references, then sequential solves.
MultiSolveResult prioritized_solve(const std::vector<RobotModel>& robots,
                                   const std::vector<SafeCorridor>& corridors,
                                   const std::vector<SampledPath>& refs, double D,
                                   const TrajOptWeights& weights, const SolverOptions& sopts,
                                   const TrajOptTolerances& tol = {});

// One joint problem over all robots; the baseline the prioritized mode is
// compared against.
MultiSolveResult coupled_solve(const std::vector<RobotModel>& robots,
                               const std::vector<SafeCorridor>& corridors,
                               const std::vector<SampledPath>& refs,
                               const TrajOptWeights& weights, const SolverOptions& sopts,
                               const TrajOptTolerances& tol = {});

}  // namespace mrtp
