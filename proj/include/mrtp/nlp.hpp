#pragma once

#include <memory>

#include "mrtp/corridor.hpp"
#include "mrtp/solver.hpp"

namespace mrtp {

struct State {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

struct Input {
    double v = 0.0;
    double omega = 0.0;
};

// Forward-Euler step of the unicycle model; theta stays unwrapped.
State discrete_dynamics(const State& z, const Input& u, double dt);

// Inter-robot separation in smoothed squared form:
//   (R1+R2)^2 - |p1-p2|^2 <= 0.
double separation_constraint(const Vec2& p1, const Vec2& p2, double r1, double r2);

struct TrajOptWeights {
    Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
    Eigen::Matrix3d Q = Eigen::Vector3d(1.0, 1.0, 0.1).asDiagonal();
};

struct TrajOptTolerances {
    double eq_tol = 1e-5;    // dynamics / endpoint residual accepted as feasible
    double ineq_tol = 1e-4;  // corridor, input, separation slack
};

// Higher-priority robot kept as a hard obstacle: its optimized positions
// per timestep.
struct FixedTrajectory {
    int robot_id = 0;
    double radius = 0.0;
    std::vector<Vec2> positions;  // H + 1
};

struct OptimizedTrajectory {
    int robot_id = 0;
    std::vector<State> states;  // H + 1
    std::vector<Input> inputs;  // H
};

// Direct transcription of the trajectory optimization over one robot group.
// Decision variables per robot: z^1..z^H and u^0..u^{H-1}; z^0 is pinned to
// the start pose by construction. Objective: input smoothness plus
// reference deviation. Equalities: dynamics chain and terminal state.
// Inequalities: corridor boxes, input bounds, pairwise and vs-fixed
// separation at every timestep 1..H.
class TrajOptProblem : public ConstrainedProblem {
  public:
    TrajOptProblem(std::vector<RobotModel> robots, std::vector<SafeCorridor> corridors,
                   std::vector<SampledPath> refs, std::vector<FixedTrajectory> fixed,
                   TrajOptWeights weights);

    int dim() const override;
    int eq_count() const override;
    int ineq_count() const override;
    double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const override;
    void eq_constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c) const override;
    void ineq_constraints(const Eigen::VectorXd& x, Eigen::VectorXd& g) const override;
    void eq_jacobian_tv(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                        Eigen::VectorXd& grad) const override;
    void ineq_jacobian_tv(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          Eigen::VectorXd& grad) const override;

    int group_size() const { return int(robots_.size()); }
    int H() const { return H_; }
    double dt() const { return dt_; }
    const std::vector<RobotModel>& robots() const { return robots_; }

    Eigen::VectorXd pack_reference() const;
    std::vector<OptimizedTrajectory> unpack(const Eigen::VectorXd& x) const;
    void residuals(const Eigen::VectorXd& x, double& max_eq, double& max_ineq) const;

  private:
    int zoff(int r, int j) const { return r * 5 * H_ + 3 * (j - 1); }
    int uoff(int r, int j) const { return r * 5 * H_ + 3 * H_ + 2 * j; }
    State state_at(const Eigen::VectorXd& x, int r, int j) const;
    Vec2 position_at(const Eigen::VectorXd& x, int r, int j) const;

    std::vector<RobotModel> robots_;
    std::vector<SafeCorridor> corridors_;
    std::vector<SampledPath> refs_;
    std::vector<FixedTrajectory> fixed_;
    TrajOptWeights weights_;
    int H_ = 0;
    double dt_ = 0.0;
    std::vector<std::pair<int, int>> pairs_;  // in-group (a, b), a < b
};

struct SolveDiagnostics {
    SolveStatus status = SolveStatus::Stagnated;
    int outer_iterations = 0;
    long inner_iterations = 0;
    double max_eq_residual = 0.0;
    double max_ineq_violation = 0.0;
    double wall_time_s = 0.0;
    bool used_init = false;  // warm start kept because it was feasible and cheaper
};

struct TrajOptResult {
    bool feasible = false;
    std::vector<OptimizedTrajectory> trajectories;
    double cost = 0.0;
    SolveDiagnostics diag;
};

// Minimizes the problem from the reference warm start. When the warm start
// itself satisfies every constraint, the result never costs more. An
// infeasible outcome is a value, not an error; diagnostics carry the
// residual profile and distinguish budget exhaustion from stagnation.
TrajOptResult solve_trajopt(const TrajOptProblem& problem, const ConstrainedSolver& solver,
                            const TrajOptTolerances& tol = {});
TrajOptResult solve_trajopt(const TrajOptProblem& problem, const SolverOptions& opts = {},
                            const TrajOptTolerances& tol = {});

}  // namespace mrtp
