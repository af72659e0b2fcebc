#pragma once

#include <string>
#include <vector>

#include "mrtp/lattice.hpp"

namespace mrtp {

// Forbids occupying `state` at timestep `t`.
struct VertexConstraint {
    LatticeState state;
    int t = 0;
};

// Forbids applying `kind` from `from` during timestep t -> t+1.
struct EdgeConstraint {
    LatticeState from;
    PrimitiveKind kind = PrimitiveKind::Wait;
    int t = 0;
};

struct RobotConstraintSet {
    std::vector<VertexConstraint> vertices;
    std::vector<EdgeConstraint> edges;
};

struct Conflict {
    int i = 0;  // robot indices into the plan, i < j
    int j = 0;
    int t = 0;  // timestep (vertex) or start of the traversal (edge)
    bool is_edge = false;
};

struct DiscretePlan {
    std::vector<std::vector<LatticeState>> paths;  // per robot, all length M+1
    int M = 0;
    std::vector<int> costs;  // per-robot arrival step (terminal waits are free)
    int sum_of_costs = 0;
    int lower_bound = 0;  // root-level LB backing the suboptimality certificate
};

// Interior-sampled trace proximity test for one simultaneous step of two
// robots; `sep` is the sum of the two radii. Endpoint instants are the
// business of vertex checks and are excluded here.
bool edge_step_conflict(const LatticeState& a_from, PrimitiveKind a_kind,
                        const LatticeState& b_from, PrimitiveKind b_kind, double sep,
                        const LatticeConfig& cfg, double resolution, int h_align = 1);

// Every vertex and edge conflict of an equal-length padded plan, sorted
// chronologically (t, vertex-before-edge, then (i, j)). Throws on length
// mismatch.
std::vector<Conflict> detect_conflicts(const DiscretePlan& plan,
                                       const std::vector<RobotModel>& robots,
                                       const LatticeConfig& cfg, double resolution,
                                       int h_align = 1);

struct OtherPath {
    const std::vector<LatticeState>* path = nullptr;
    double separation = 0.0;  // R_self + R_other
};

struct LowLevelResult {
    bool found = false;
    std::vector<LatticeState> path;  // start .. goal, one state per timestep
    int cost = 0;                    // arrival timestep
    int f_min = 0;                   // admissible lower bound on the constrained cost
    long expanded = 0;
};

// Time-expanded focal A* over (state, timestep). Returns a constraint-
// consistent path with cost <= w * optimal constrained cost, preferring
// fewer conflicts against `others` inside the focal band.
LowLevelResult low_level_search(const LatticeMap& lat, const LatticeState& start,
                                const LatticeState& goal, const RobotConstraintSet& constraints,
                                const std::vector<OtherPath>& others, double w,
                                int h_align = 1);

enum class MapfStatus { Success, Timeout, Infeasible };
const char* mapf_status_name(MapfStatus s);

struct EcbsOptions {
    double w = 1.5;
    double timeout_s = 60.0;
    long max_ct_expansions = 100000;
    int h_align = 1;  // conflict samples include the j/h_align fractions
};

struct EcbsResult {
    MapfStatus status = MapfStatus::Infeasible;
    DiscretePlan plan;
    long ct_expanded = 0;
    long ct_generated = 0;
    std::string message;
};

// Bounded-suboptimal MAPF on the oriented lattice. Paths come back padded
// with waits at the goal to the common length M. Deterministic: all queue
// orderings are total.
EcbsResult ecbs_plan(const OccupancyGrid& grid, const std::vector<RobotModel>& robots,
                     const std::vector<Task>& tasks, const LatticeConfig& cfg,
                     const EcbsOptions& opt = {});

}  // namespace mrtp
