#include "mrtp/nlp.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace mrtp {

State discrete_dynamics(const State& z, const Input& u, double dt) {
    if (dt <= 0) throw std::invalid_argument("discrete_dynamics: dt must be positive");
    return {z.x + dt * u.v * std::cos(z.theta), z.y + dt * u.v * std::sin(z.theta),
            z.theta + dt * u.omega};
}

double separation_constraint(const Vec2& p1, const Vec2& p2, double r1, double r2) {
    const double rr = r1 + r2;
    return rr * rr - (p1 - p2).squared_norm();
}

namespace {

void require_spd(const Eigen::MatrixXd& m, const char* name) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument(std::string(name) + " must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument(std::string(name) + " must be positive definite");
}

}  // namespace

TrajOptProblem::TrajOptProblem(std::vector<RobotModel> robots,
                               std::vector<SafeCorridor> corridors,
                               std::vector<SampledPath> refs,
                               std::vector<FixedTrajectory> fixed, TrajOptWeights weights)
    : robots_(std::move(robots)), corridors_(std::move(corridors)), refs_(std::move(refs)),
      fixed_(std::move(fixed)), weights_(weights) {
    if (robots_.empty()) throw std::invalid_argument("TrajOptProblem: empty group");
    if (corridors_.size() != robots_.size() || refs_.size() != robots_.size())
        throw std::invalid_argument("TrajOptProblem: robots/corridors/refs size mismatch");
    require_spd(weights_.P, "P");
    require_spd(weights_.Q, "Q");

    H_ = refs_.front().H();
    dt_ = refs_.front().delta_t;
    for (const auto& r : refs_)
        if (r.H() != H_ || r.delta_t != dt_)
            throw std::invalid_argument("TrajOptProblem: references must share H and delta_t");
    for (const auto& c : corridors_)
        if (c.H() != H_)
            throw std::invalid_argument("TrajOptProblem: corridor length != reference H");
    for (const auto& f : fixed_)
        if (int(f.positions.size()) != H_ + 1)
            throw std::invalid_argument("TrajOptProblem: fixed trajectory length != H+1");

    for (int a = 0; a < group_size(); ++a)
        for (int b = a + 1; b < group_size(); ++b) pairs_.emplace_back(a, b);
}

int TrajOptProblem::dim() const { return group_size() * 5 * H_; }

int TrajOptProblem::eq_count() const { return group_size() * (3 * H_ + 3); }

int TrajOptProblem::ineq_count() const {
    return group_size() * 8 * H_ + int(pairs_.size()) * H_ +
           group_size() * int(fixed_.size()) * H_;
}

State TrajOptProblem::state_at(const Eigen::VectorXd& x, int r, int j) const {
    if (j == 0) {
        const Pose& p = refs_[r].waypoints[0];
        return {p.x, p.y, p.theta};
    }
    const int o = zoff(r, j);
    return {x[o], x[o + 1], x[o + 2]};
}

Vec2 TrajOptProblem::position_at(const Eigen::VectorXd& x, int r, int j) const {
    const State z = state_at(x, r, j);
    return {z.x, z.y};
}

double TrajOptProblem::objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
    double f = 0.0;
    for (int r = 0; r < group_size(); ++r) {
        for (int j = 1; j <= H_ - 1; ++j) {
            const int ou = uoff(r, j), op = uoff(r, j - 1);
            const Eigen::Vector2d du(x[ou] - x[op], x[ou + 1] - x[op + 1]);
            const Eigen::Vector2d pdu = weights_.P * du;
            f += du.dot(pdu);
            if (grad) {
                (*grad)[ou] += 2.0 * pdu[0];
                (*grad)[ou + 1] += 2.0 * pdu[1];
                (*grad)[op] -= 2.0 * pdu[0];
                (*grad)[op + 1] -= 2.0 * pdu[1];
            }
        }
        for (int j = 1; j <= H_; ++j) {
            const int oz = zoff(r, j);
            const Pose& ref = refs_[r].waypoints[j];
            const Eigen::Vector3d dz(x[oz] - ref.x, x[oz + 1] - ref.y, x[oz + 2] - ref.theta);
            const Eigen::Vector3d qdz = weights_.Q * dz;
            f += dz.dot(qdz);
            if (grad)
                for (int k = 0; k < 3; ++k) (*grad)[oz + k] += 2.0 * qdz[k];
        }
    }
    return f;
}

void TrajOptProblem::eq_constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c) const {
    c.resize(eq_count());
    for (int r = 0; r < group_size(); ++r) {
        const int base = r * (3 * H_ + 3);
        for (int j = 0; j < H_; ++j) {
            const State zj = state_at(x, r, j);
            const State zn = state_at(x, r, j + 1);
            const int ou = uoff(r, j);
            const State pred = discrete_dynamics(zj, {x[ou], x[ou + 1]}, dt_);
            c[base + 3 * j] = zn.x - pred.x;
            c[base + 3 * j + 1] = zn.y - pred.y;
            c[base + 3 * j + 2] = zn.theta - pred.theta;
        }
        const State zH = state_at(x, r, H_);
        const Pose& goal = refs_[r].waypoints[H_];
        c[base + 3 * H_] = zH.x - goal.x;
        c[base + 3 * H_ + 1] = zH.y - goal.y;
        c[base + 3 * H_ + 2] = zH.theta - goal.theta;
    }
}

void TrajOptProblem::eq_jacobian_tv(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                    Eigen::VectorXd& grad) const {
    for (int r = 0; r < group_size(); ++r) {
        const int base = r * (3 * H_ + 3);
        for (int j = 0; j < H_; ++j) {
            const State zj = state_at(x, r, j);
            const int ou = uoff(r, j);
            const double v = x[ou];
            const double st = std::sin(zj.theta), ct = std::cos(zj.theta);
            const double y0 = y[base + 3 * j], y1 = y[base + 3 * j + 1],
                         y2 = y[base + 3 * j + 2];
            // d c_j / d z_{j+1} = I
            const int on = zoff(r, j + 1);
            grad[on] += y0;
            grad[on + 1] += y1;
            grad[on + 2] += y2;
            // d c_j / d z_j = -A  (z_0 is constant)
            if (j >= 1) {
                const int oz = zoff(r, j);
                grad[oz] -= y0;
                grad[oz + 1] -= y1;
                grad[oz + 2] -= dt_ * v * (-st * y0 + ct * y1) + y2;
            }
            // d c_j / d u_j = -B
            grad[ou] -= dt_ * (ct * y0 + st * y1);
            grad[ou + 1] -= dt_ * y2;
        }
        const int oH = zoff(r, H_);
        grad[oH] += y[base + 3 * H_];
        grad[oH + 1] += y[base + 3 * H_ + 1];
        grad[oH + 2] += y[base + 3 * H_ + 2];
    }
}

void TrajOptProblem::ineq_constraints(const Eigen::VectorXd& x, Eigen::VectorXd& g) const {
    g.resize(ineq_count());
    int row = 0;
    for (int r = 0; r < group_size(); ++r) {
        for (int j = 1; j <= H_; ++j) {
            const Vec2 p = position_at(x, r, j);
            const Rect& rect = corridors_[r].rect(j);
            g[row++] = rect.xmin - p.x;
            g[row++] = p.x - rect.xmax;
            g[row++] = rect.ymin - p.y;
            g[row++] = p.y - rect.ymax;
        }
        const double vmax = robots_[r].v_max, wmax = robots_[r].omega_max;
        for (int j = 0; j < H_; ++j) {
            const int ou = uoff(r, j);
            g[row++] = x[ou] - vmax;
            g[row++] = -x[ou] - vmax;
            g[row++] = x[ou + 1] - wmax;
            g[row++] = -x[ou + 1] - wmax;
        }
    }
    for (const auto& [a, b] : pairs_) {
        for (int j = 1; j <= H_; ++j)
            g[row++] = separation_constraint(position_at(x, a, j), position_at(x, b, j),
                                             robots_[a].radius, robots_[b].radius);
    }
    for (int r = 0; r < group_size(); ++r) {
        for (const auto& f : fixed_) {
            for (int j = 1; j <= H_; ++j)
                g[row++] = separation_constraint(position_at(x, r, j), f.positions[j],
                                                 robots_[r].radius, f.radius);
        }
    }
}

void TrajOptProblem::ineq_jacobian_tv(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                      Eigen::VectorXd& grad) const {
    int row = 0;
    for (int r = 0; r < group_size(); ++r) {
        for (int j = 1; j <= H_; ++j) {
            const int oz = zoff(r, j);
            grad[oz] += -y[row] + y[row + 1];
            grad[oz + 1] += -y[row + 2] + y[row + 3];
            row += 4;
        }
        for (int j = 0; j < H_; ++j) {
            const int ou = uoff(r, j);
            grad[ou] += y[row] - y[row + 1];
            grad[ou + 1] += y[row + 2] - y[row + 3];
            row += 4;
        }
    }
    for (const auto& [a, b] : pairs_) {
        for (int j = 1; j <= H_; ++j, ++row) {
            const Vec2 pa = position_at(x, a, j), pb = position_at(x, b, j);
            const double gx = 2.0 * (pa.x - pb.x), gy = 2.0 * (pa.y - pb.y);
            const int oa = zoff(a, j), ob = zoff(b, j);
            grad[oa] -= gx * y[row];
            grad[oa + 1] -= gy * y[row];
            grad[ob] += gx * y[row];
            grad[ob + 1] += gy * y[row];
        }
    }
    for (int r = 0; r < group_size(); ++r) {
        for (const auto& f : fixed_) {
            for (int j = 1; j <= H_; ++j, ++row) {
                const Vec2 p = position_at(x, r, j);
                const int o = zoff(r, j);
                grad[o] -= 2.0 * (p.x - f.positions[j].x) * y[row];
                grad[o + 1] -= 2.0 * (p.y - f.positions[j].y) * y[row];
            }
        }
    }
}

Eigen::VectorXd TrajOptProblem::pack_reference() const {
    Eigen::VectorXd x(dim());
    for (int r = 0; r < group_size(); ++r) {
        for (int j = 1; j <= H_; ++j) {
            const Pose& p = refs_[r].waypoints[j];
            const int o = zoff(r, j);
            x[o] = p.x;
            x[o + 1] = p.y;
            x[o + 2] = p.theta;
        }
        for (int j = 0; j < H_; ++j) {
            const int o = uoff(r, j);
            x[o] = refs_[r].inputs[j].first;
            x[o + 1] = refs_[r].inputs[j].second;
        }
    }
    return x;
}

std::vector<OptimizedTrajectory> TrajOptProblem::unpack(const Eigen::VectorXd& x) const {
    std::vector<OptimizedTrajectory> out(group_size());
    for (int r = 0; r < group_size(); ++r) {
        OptimizedTrajectory& t = out[r];
        t.robot_id = robots_[r].id;
        t.states.resize(H_ + 1);
        t.inputs.resize(H_);
        for (int j = 0; j <= H_; ++j) t.states[j] = state_at(x, r, j);
        for (int j = 0; j < H_; ++j) {
            const int o = uoff(r, j);
            t.inputs[j] = {x[o], x[o + 1]};
        }
    }
    return out;
}

void TrajOptProblem::residuals(const Eigen::VectorXd& x, double& max_eq,
                               double& max_ineq) const {
    max_eq = 0.0;
    max_ineq = 0.0;
    if (eq_count() > 0) {
        Eigen::VectorXd c;
        eq_constraints(x, c);
        max_eq = c.cwiseAbs().maxCoeff();
    }
    if (ineq_count() > 0) {
        Eigen::VectorXd g;
        ineq_constraints(x, g);
        max_ineq = std::max(0.0, g.maxCoeff());
    }
}

TrajOptResult solve_trajopt(const TrajOptProblem& problem, const ConstrainedSolver& solver,
                            const TrajOptTolerances& tol) {
    TrajOptResult result;
    const Eigen::VectorXd x0 = problem.pack_reference();

    if (problem.dim() == 0) {
        // a group already at its goals: the (empty) reference is the optimum
        result.feasible = true;
        result.trajectories = problem.unpack(x0);
        result.cost = 0.0;
        result.diag.status = SolveStatus::Converged;
        return result;
    }

    double eq0 = 0.0, ineq0 = 0.0;
    problem.residuals(x0, eq0, ineq0);
    const bool init_ok = eq0 <= tol.eq_tol && ineq0 <= tol.ineq_tol;
    const double cost0 = problem.objective(x0, nullptr);

    Eigen::VectorXd x = x0;
    const SolverReport rep = solver.minimize(problem, x);
    double eq1 = 0.0, ineq1 = 0.0;
    problem.residuals(x, eq1, ineq1);
    const bool final_ok = eq1 <= tol.eq_tol && ineq1 <= tol.ineq_tol;
    const double cost1 = problem.objective(x, nullptr);

    result.diag.status = rep.status;
    result.diag.outer_iterations = rep.outer_iterations;
    result.diag.inner_iterations = rep.inner_iterations;
    result.diag.wall_time_s = rep.wall_time_s;

    if (final_ok && (!init_ok || cost1 <= cost0)) {
        result.feasible = true;
        result.trajectories = problem.unpack(x);
        result.cost = cost1;
        result.diag.max_eq_residual = eq1;
        result.diag.max_ineq_violation = ineq1;
    } else if (init_ok) {
        result.feasible = true;
        result.trajectories = problem.unpack(x0);
        result.cost = cost0;
        result.diag.max_eq_residual = eq0;
        result.diag.max_ineq_violation = ineq0;
        result.diag.used_init = true;
    } else {
        result.feasible = false;
        result.cost = cost1;
        result.diag.max_eq_residual = eq1;
        result.diag.max_ineq_violation = ineq1;
    }
    return result;
}

TrajOptResult solve_trajopt(const TrajOptProblem& problem, const SolverOptions& opts,
                            const TrajOptTolerances& tol) {
    return solve_trajopt(problem, AugmentedLagrangianSolver(opts), tol);
}

}  // namespace mrtp
