#include "mrtp/solver.hpp"

#include <chrono>
#include <cmath>
#include <deque>

namespace mrtp {

const char* solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::BudgetExhausted: return "budget_exhausted";
        case SolveStatus::Stagnated: return "stagnated";
    }
    return "?";
}

namespace {

// Value and gradient of the augmented Lagrangian at x.
//   L = f + lambda^T c + (rho/2)|c|^2 + (1/2rho) sum(max(0, mu + rho g)^2 - mu^2)
struct AlEval {
    double value = 0.0;
    Eigen::VectorXd grad;
};

AlEval eval_al(const ConstrainedProblem& p, const Eigen::VectorXd& x,
               const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu, double rho,
               Eigen::VectorXd& c_buf, Eigen::VectorXd& g_buf, bool want_grad) {
    AlEval out;
    if (want_grad) {
        out.grad.setZero(x.size());
        out.value = p.objective(x, &out.grad);
    } else {
        out.value = p.objective(x, nullptr);
    }
    if (p.eq_count() > 0) {
        p.eq_constraints(x, c_buf);
        out.value += lambda.dot(c_buf) + 0.5 * rho * c_buf.squaredNorm();
        if (want_grad) {
            const Eigen::VectorXd y = lambda + rho * c_buf;
            p.eq_jacobian_tv(x, y, out.grad);
        }
    }
    if (p.ineq_count() > 0) {
        p.ineq_constraints(x, g_buf);
        const Eigen::ArrayXd t = (mu.array() + rho * g_buf.array()).max(0.0);
        out.value += (t.square() - mu.array().square()).sum() / (2.0 * rho);
        if (want_grad) {
            const Eigen::VectorXd y = t.matrix();
            p.ineq_jacobian_tv(x, y, out.grad);
        }
    }
    return out;
}

}  // namespace

SolverReport AugmentedLagrangianSolver::minimize(const ConstrainedProblem& problem,
                                                 Eigen::VectorXd& x) const {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    SolverReport rep;
    const int ne = problem.eq_count();
    const int ni = problem.ineq_count();
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(ne);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(ni);
    Eigen::VectorXd c_buf(ne), g_buf(ni);
    double rho = opts_.rho0;

    auto violation = [&](const Eigen::VectorXd& c, const Eigen::VectorXd& g) {
        double v = 0.0;
        if (ne > 0) v = c.cwiseAbs().maxCoeff();
        if (ni > 0) v = std::max(v, g.maxCoeff());
        return v;
    };
    auto fill_report = [&](SolveStatus status) {
        rep.status = status;
        rep.objective = problem.objective(x, nullptr);
        if (ne > 0) {
            problem.eq_constraints(x, c_buf);
            rep.max_eq_violation = c_buf.cwiseAbs().maxCoeff();
        }
        if (ni > 0) {
            problem.ineq_constraints(x, g_buf);
            rep.max_ineq_violation = std::max(0.0, g_buf.maxCoeff());
        }
        rep.wall_time_s = elapsed();
        return rep;
    };

    double prev_viol = std::numeric_limits<double>::infinity();
    double prev_value = std::numeric_limits<double>::infinity();
    bool out_of_time = false;

    // gradient scale fixed by the first evaluation, so tolerances are
    // relative to the problem, not absolute
    AlEval first = eval_al(problem, x, lambda, mu, rho, c_buf, g_buf, true);
    const double grad_scale = std::max(1.0, first.grad.lpNorm<Eigen::Infinity>());
    const double grad_target = opts_.grad_tol * grad_scale;
    double inner_tol = std::max(1e-3 * grad_scale, grad_target);

    for (int outer = 0; outer < opts_.max_outer; ++outer) {
        rep.outer_iterations = outer + 1;

        // ---- inner minimization of the AL by L-BFGS with backtracking ----
        AlEval cur = eval_al(problem, x, lambda, mu, rho, c_buf, g_buf, true);
        std::deque<Eigen::VectorXd> s_hist, y_hist;
        std::deque<double> rho_hist;
        double gnorm = cur.grad.lpNorm<Eigen::Infinity>();
        bool ls_exhausted = false;

        for (int inner = 0; inner < opts_.max_inner && gnorm > inner_tol; ++inner) {
            ++rep.inner_iterations;
            if (elapsed() > opts_.time_budget_s) {
                out_of_time = true;
                break;
            }

            // two-loop recursion
            Eigen::VectorXd d = -cur.grad;
            std::vector<double> alpha(s_hist.size());
            for (int i = int(s_hist.size()) - 1; i >= 0; --i) {
                alpha[i] = rho_hist[i] * s_hist[i].dot(d);
                d -= alpha[i] * y_hist[i];
            }
            if (!s_hist.empty()) {
                const double gamma =
                    s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
                d *= gamma;
            }
            for (size_t i = 0; i < s_hist.size(); ++i) {
                const double beta = rho_hist[i] * y_hist[i].dot(d);
                d += (alpha[i] - beta) * s_hist[i];
            }
            double slope = cur.grad.dot(d);
            if (slope > -1e-14 * std::max(1.0, std::abs(cur.value))) {
                d = -cur.grad;  // fall back to steepest descent
                slope = -cur.grad.squaredNorm();
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
            }

            // backtracking Armijo; gradients only at accepted points
            double step = 1.0;
            bool accepted = false;
            Eigen::VectorXd x_new;
            AlEval next;
            for (int ls = 0; ls < 50; ++ls) {
                x_new = x + step * d;
                next = eval_al(problem, x_new, lambda, mu, rho, c_buf, g_buf, false);
                if (next.value <= cur.value + 1e-4 * step * slope) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                ls_exhausted = true;
                break;
            }
            next = eval_al(problem, x_new, lambda, mu, rho, c_buf, g_buf, true);

            const Eigen::VectorXd s = x_new - x;
            const Eigen::VectorXd yv = next.grad - cur.grad;
            const double sy = s.dot(yv);
            if (sy > 1e-12 * s.norm() * yv.norm()) {
                s_hist.push_back(s);
                y_hist.push_back(yv);
                rho_hist.push_back(1.0 / sy);
                if (int(s_hist.size()) > opts_.lbfgs_memory) {
                    s_hist.pop_front();
                    y_hist.pop_front();
                    rho_hist.pop_front();
                }
            }
            x = std::move(x_new);
            cur = std::move(next);
            gnorm = cur.grad.lpNorm<Eigen::Infinity>();
        }
        rep.grad_norm = gnorm;
        if (out_of_time) return fill_report(SolveStatus::BudgetExhausted);

        // ---- convergence and multiplier / penalty update ----
        if (ne > 0) problem.eq_constraints(x, c_buf);
        if (ni > 0) problem.ineq_constraints(x, g_buf);
        const double viol = violation(c_buf, g_buf);
        const double eq_viol = ne > 0 ? c_buf.cwiseAbs().maxCoeff() : 0.0;
        const double ineq_viol = ni > 0 ? std::max(0.0, g_buf.maxCoeff()) : 0.0;

        const bool feasible =
            eq_viol <= opts_.target_eq && ineq_viol <= opts_.target_ineq;
        const bool stationary =
            gnorm <= grad_target || ls_exhausted ||
            std::abs(cur.value - prev_value) <= 1e-9 * std::max(1.0, std::abs(cur.value));
        if (feasible && stationary) return fill_report(SolveStatus::Converged);
        prev_value = cur.value;

        if (viol <= 0.25 * prev_viol || viol <= std::min(opts_.target_eq, opts_.target_ineq)) {
            if (ne > 0) lambda += rho * c_buf;
            if (ni > 0) mu = (mu.array() + rho * g_buf.array()).max(0.0).matrix();
            prev_viol = viol;
        } else {
            rho = std::min(rho * opts_.rho_growth, opts_.rho_max);
            // multipliers kept; a larger penalty reshapes the subproblem
        }
        inner_tol = std::max(0.2 * inner_tol, grad_target);
    }
    return fill_report(SolveStatus::Stagnated);
}

}  // namespace mrtp
