#pragma once

#include "mrtp/mapf.hpp"
#include "mrtp/nlp.hpp"

namespace mrtp {

struct Violation {
    enum class Kind { Obstacle, Separation, Dynamics, InputBound, Endpoint };
    Kind kind = Kind::Obstacle;
    int robot_i = -1;  // robot index
    int robot_j = -1;  // second robot for separation violations
    int t = -1;        // timestep (or step start)
    int sample = -1;   // intra-step sample, -1 at the timestep itself
    double value = 0.0;
    std::string detail;
};
const char* violation_kind_name(Violation::Kind k);

struct RobotCheckStats {
    int robot_id = 0;
    double max_dynamics_residual = 0.0;
    double max_input_violation = 0.0;
    double min_clearance = std::numeric_limits<double>::infinity();
};

struct PairCheckStats {
    int i = 0;
    int j = 0;
    double min_separation = std::numeric_limits<double>::infinity();
};

struct VerificationReport {
    bool pass = true;
    std::vector<RobotCheckStats> robots;
    std::vector<PairCheckStats> pairs;
    std::vector<Violation> violations;
};

struct VerifyTolerances {
    double dyn_tol = 1e-5;    // infinity-norm Euler residual per step
    double input_tol = 1e-6;  // |v| <= v_max + input_tol
    double sep_tol = 1e-4;    // separation >= R_i + R_j - sep_tol
    double clearance_margin = 0.0;
    int intra_samples = 5;    // interior points checked between timesteps
};

// Re-checks a discrete plan against the problem definitions with no shared
// code path beyond the workspace queries: per-step inputs are re-derived
// from consecutive poses and the unicycle ODE is integrated numerically
// (RK4), sampled densely for clearance and pairwise distance.
VerificationReport verify_discrete(const DiscretePlan& plan, const OccupancyGrid& grid,
                                   const std::vector<RobotModel>& robots,
                                   const LatticeConfig& cfg, int samples_per_step = 32);

// Checks optimized trajectories: per-step Euler residual, input bounds,
// obstacle clearance and pairwise separation at each timestep and at
// `intra_samples` uniformly spaced points of the linear interpolation.
VerificationReport verify_trajectories(const std::vector<OptimizedTrajectory>& trajs,
                                       const OccupancyGrid& grid,
                                       const std::vector<RobotModel>& robots, double dt,
                                       const VerifyTolerances& tol = {});

// Exact distance from a point to the nearest obstacle (cell squares and map
// boundary) minus the robot radius.
double obstacle_clearance(const OccupancyGrid& grid,
                          const std::vector<std::pair<int, int>>& occupied, const Vec2& p,
                          double radius);

}  // namespace mrtp
