#include "mrtp/verifier.hpp"

#include <cmath>
#include <sstream>

namespace mrtp {

const char* violation_kind_name(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::Obstacle: return "obstacle";
        case Violation::Kind::Separation: return "separation";
        case Violation::Kind::Dynamics: return "dynamics";
        case Violation::Kind::InputBound: return "input_bound";
        case Violation::Kind::Endpoint: return "endpoint";
    }
    return "?";
}

double obstacle_clearance(const OccupancyGrid& grid,
                          const std::vector<std::pair<int, int>>& occupied, const Vec2& p,
                          double radius) {
    const Vec2 o = grid.origin();
    double d = std::min({p.x - o.x, o.x + grid.width_m() - p.x, p.y - o.y,
                         o.y + grid.height_m() - p.y});
    const double res = grid.resolution();
    for (const auto& [ix, iy] : occupied) {
        const Vec2 c = grid.cell_center(ix, iy);
        const Rect cell{c.x - 0.5 * res, c.y - 0.5 * res, c.x + 0.5 * res, c.y + 0.5 * res};
        d = std::min(d, cell.distance_to(p));
        if (d <= -radius) break;
    }
    return d - radius;
}

namespace {

struct UnicycleStep {
    double v = 0.0;
    double omega = 0.0;
    double fit_residual = 0.0;  // how well the pose pair matches a constant twist
};

// Recovers the constant (v, omega) connecting two poses over dT. The
// displacement of a constant-twist motion is r * k with
// k = (sin th1 - sin th0, cos th0 - cos th1); a least-squares r gives an
// exact fit for genuine unicycle steps and a residual otherwise.
UnicycleStep fit_step(const Pose& a, const Pose& b, double dT) {
    UnicycleStep s;
    const double dth = wrap_angle(b.theta - a.theta);
    const Vec2 disp{b.x - a.x, b.y - a.y};
    if (std::abs(dth) < 1e-9) {
        const Vec2 dir{std::cos(a.theta), std::sin(a.theta)};
        const double along = disp.x * dir.x + disp.y * dir.y;
        s.v = along / dT;
        s.omega = 0.0;
        s.fit_residual = std::abs(-disp.x * dir.y + disp.y * dir.x);
        return s;
    }
    s.omega = dth / dT;
    const Vec2 k{std::sin(b.theta) - std::sin(a.theta), std::cos(a.theta) - std::cos(b.theta)};
    const double r = (disp.x * k.x + disp.y * k.y) / k.squared_norm();
    s.v = r * s.omega;
    s.fit_residual = std::hypot(disp.x - r * k.x, disp.y - r * k.y);
    return s;
}

// Classic RK4 on the unicycle ODE with constant inputs.
Pose integrate_step(const Pose& z0, double v, double omega, double t) {
    auto deriv = [&](const Pose& z) {
        return Pose{v * std::cos(z.theta), v * std::sin(z.theta), omega};
    };
    const int steps = 8;
    const double h = t / steps;
    Pose z = z0;
    for (int i = 0; i < steps; ++i) {
        const Pose k1 = deriv(z);
        const Pose k2 = deriv({z.x + 0.5 * h * k1.x, z.y + 0.5 * h * k1.y,
                               z.theta + 0.5 * h * k1.theta});
        const Pose k3 = deriv({z.x + 0.5 * h * k2.x, z.y + 0.5 * h * k2.y,
                               z.theta + 0.5 * h * k2.theta});
        const Pose k4 = deriv({z.x + h * k3.x, z.y + h * k3.y, z.theta + h * k3.theta});
        z = {z.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
             z.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
             z.theta + h / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta)};
    }
    return z;
}

}  // namespace

VerificationReport verify_discrete(const DiscretePlan& plan, const OccupancyGrid& grid,
                                   const std::vector<RobotModel>& robots,
                                   const LatticeConfig& cfg, int samples_per_step) {
    const int n = int(plan.paths.size());
    VerificationReport report;
    report.robots.resize(n);
    const auto occupied = grid.occupied_cells();
    const int S = std::max(samples_per_step, 20);

    // sampled continuous pose of robot i over step t at fraction s/S
    std::vector<std::vector<std::vector<Vec2>>> samples(n);
    for (int i = 0; i < n; ++i) {
        report.robots[i].robot_id = robots[i].id;
        samples[i].resize(plan.M);
        for (int t = 0; t < plan.M; ++t) {
            const Pose a = cfg.state_pose(plan.paths[i][t]);
            const Pose b = cfg.state_pose(plan.paths[i][t + 1]);
            const UnicycleStep step = fit_step(a, b, cfg.delta_T);
            if (step.fit_residual > 1e-6) {
                report.violations.push_back({Violation::Kind::Endpoint, i, -1, t, -1,
                                             step.fit_residual,
                                             "step is not a constant-twist unicycle motion"});
            }
            if (std::abs(step.v) > robots[i].v_max + 1e-9 ||
                std::abs(step.omega) > robots[i].omega_max + 1e-9) {
                const double excess = std::max(std::abs(step.v) - robots[i].v_max,
                                               std::abs(step.omega) - robots[i].omega_max);
                report.robots[i].max_input_violation =
                    std::max(report.robots[i].max_input_violation, excess);
                report.violations.push_back({Violation::Kind::InputBound, i, -1, t, -1, excess,
                                             "derived step inputs exceed the robot limits"});
            }
            auto& row = samples[i][t];
            row.resize(S + 1);
            for (int s = 0; s <= S; ++s) {
                const Pose z = integrate_step(a, step.v, step.omega,
                                              cfg.delta_T * double(s) / S);
                row[s] = z.position();
            }
            const Pose zend = integrate_step(a, step.v, step.omega, cfg.delta_T);
            const double end_err = std::hypot(zend.x - b.x, zend.y - b.y);
            if (end_err > 1e-6)
                report.violations.push_back({Violation::Kind::Endpoint, i, -1, t, -1, end_err,
                                             "integrated step does not reach the next state"});
        }
    }

    for (int i = 0; i < n; ++i) {
        auto& stats = report.robots[i];
        for (int t = 0; t < std::max(plan.M, 1); ++t) {
            if (plan.M == 0) {
                const Vec2 p = cfg.state_position(plan.paths[i][0]);
                stats.min_clearance = obstacle_clearance(grid, occupied, p, robots[i].radius);
                if (!disc_free(grid, p, robots[i].radius))
                    report.violations.push_back({Violation::Kind::Obstacle, i, -1, 0, -1,
                                                 stats.min_clearance, "start disc not free"});
                break;
            }
            for (int s = 0; s <= S; ++s) {
                const Vec2 p = samples[i][t][s];
                const double clear = obstacle_clearance(grid, occupied, p, robots[i].radius);
                stats.min_clearance = std::min(stats.min_clearance, clear);
                if (!disc_free(grid, p, robots[i].radius + 0.0)) {
                    report.violations.push_back({Violation::Kind::Obstacle, i, -1, t, s, clear,
                                                 "swept disc hits an obstacle"});
                }
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            PairCheckStats ps{robots[i].id, robots[j].id,
                              std::numeric_limits<double>::infinity()};
            const double rr = robots[i].radius + robots[j].radius;
            for (int t = 0; t < plan.M; ++t) {
                for (int s = 0; s <= S; ++s) {
                    const double d = distance(samples[i][t][s], samples[j][t][s]);
                    ps.min_separation = std::min(ps.min_separation, d);
                    if (d < rr)
                        report.violations.push_back(
                            {Violation::Kind::Separation, i, j, t, s, d,
                             "robot discs intersect along the traversal"});
                }
            }
            if (plan.M == 0) {
                const double d = distance(cfg.state_position(plan.paths[i][0]),
                                          cfg.state_position(plan.paths[j][0]));
                ps.min_separation = d;
                if (d < rr)
                    report.violations.push_back({Violation::Kind::Separation, i, j, 0, -1, d,
                                                 "robot discs intersect at the start"});
            }
            report.pairs.push_back(ps);
        }
    }

    report.pass = report.violations.empty();
    return report;
}

VerificationReport verify_trajectories(const std::vector<OptimizedTrajectory>& trajs,
                                       const OccupancyGrid& grid,
                                       const std::vector<RobotModel>& robots, double dt,
                                       const VerifyTolerances& tol) {
    const int n = int(trajs.size());
    VerificationReport report;
    report.robots.resize(n);
    if (n == 0) return report;
    const int H = int(trajs.front().states.size()) - 1;
    for (const auto& t : trajs)
        if (int(t.states.size()) != H + 1 || int(t.inputs.size()) != H)
            throw std::invalid_argument("verify_trajectories: trajectory length mismatch");
    const auto occupied = grid.occupied_cells();
    const int S = tol.intra_samples;

    auto interp = [&](const OptimizedTrajectory& tr, int j, int s) -> Vec2 {
        // s in 0..S+1: 0 is state j, S+1 is state j+1, interior points linear
        const double a = double(s) / (S + 1);
        return {tr.states[j].x * (1 - a) + tr.states[j + 1].x * a,
                tr.states[j].y * (1 - a) + tr.states[j + 1].y * a};
    };

    for (int i = 0; i < n; ++i) {
        auto& stats = report.robots[i];
        stats.robot_id = trajs[i].robot_id;
        const auto& tr = trajs[i];

        for (int j = 0; j < H; ++j) {
            const State pred = discrete_dynamics(tr.states[j], tr.inputs[j], dt);
            const double resid = std::max({std::abs(tr.states[j + 1].x - pred.x),
                                           std::abs(tr.states[j + 1].y - pred.y),
                                           std::abs(tr.states[j + 1].theta - pred.theta)});
            stats.max_dynamics_residual = std::max(stats.max_dynamics_residual, resid);
            if (resid > tol.dyn_tol)
                report.violations.push_back({Violation::Kind::Dynamics, i, -1, j, -1, resid,
                                             "Euler residual above tolerance"});
            const double vex = std::abs(tr.inputs[j].v) - robots[i].v_max;
            const double wex = std::abs(tr.inputs[j].omega) - robots[i].omega_max;
            const double excess = std::max(vex, wex);
            if (excess > 0) stats.max_input_violation = std::max(stats.max_input_violation, excess);
            if (excess > tol.input_tol) {
                std::ostringstream msg;
                msg << "input limit exceeded: |v|=" << std::abs(tr.inputs[j].v)
                    << " |omega|=" << std::abs(tr.inputs[j].omega);
                report.violations.push_back(
                    {Violation::Kind::InputBound, i, -1, j, -1, excess, msg.str()});
            }
        }

        for (int j = 0; j <= H; ++j) {
            const Vec2 p{tr.states[j].x, tr.states[j].y};
            const double clear = obstacle_clearance(grid, occupied, p, robots[i].radius);
            stats.min_clearance = std::min(stats.min_clearance, clear);
            if (!disc_free(grid, p, robots[i].radius + tol.clearance_margin))
                report.violations.push_back({Violation::Kind::Obstacle, i, -1, j, -1, clear,
                                             "robot disc not free at a timestep"});
            if (j == H) break;
            for (int s = 1; s <= S; ++s) {
                const Vec2 q = interp(tr, j, s);
                const double c2 = obstacle_clearance(grid, occupied, q, robots[i].radius);
                stats.min_clearance = std::min(stats.min_clearance, c2);
                if (!disc_free(grid, q, robots[i].radius + tol.clearance_margin))
                    report.violations.push_back({Violation::Kind::Obstacle, i, -1, j, s, c2,
                                                 "robot disc not free between timesteps"});
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            PairCheckStats ps{trajs[i].robot_id, trajs[j].robot_id,
                              std::numeric_limits<double>::infinity()};
            const double rr = robots[i].radius + robots[j].radius;
            for (int k = 0; k <= H; ++k) {
                const Vec2 a{trajs[i].states[k].x, trajs[i].states[k].y};
                const Vec2 b{trajs[j].states[k].x, trajs[j].states[k].y};
                double d = distance(a, b);
                ps.min_separation = std::min(ps.min_separation, d);
                if (d < rr - tol.sep_tol)
                    report.violations.push_back({Violation::Kind::Separation, i, j, k, -1, d,
                                                 "robots too close at a timestep"});
                if (k == H) break;
                for (int s = 1; s <= S; ++s) {
                    d = distance(interp(trajs[i], k, s), interp(trajs[j], k, s));
                    ps.min_separation = std::min(ps.min_separation, d);
                    if (d < rr - tol.sep_tol)
                        report.violations.push_back({Violation::Kind::Separation, i, j, k, s, d,
                                                     "robots too close between timesteps"});
                }
            }
            report.pairs.push_back(ps);
        }
    }

    report.pass = report.violations.empty();
    return report;
}

}  // namespace mrtp
