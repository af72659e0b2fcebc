#pragma once

#include <Eigen/Core>

namespace mrtp {

// Smooth constrained program  min f(x)  s.t.  c(x) = 0,  g(x) <= 0,
// exposed through first-order callbacks (values plus Jacobian-transpose
// actions), which is all the in-repo solver needs.
class ConstrainedProblem {
  public:
    virtual ~ConstrainedProblem() = default;

    virtual int dim() const = 0;
    virtual int eq_count() const = 0;
    virtual int ineq_count() const = 0;

    // Returns f(x); writes the gradient when grad is non-null.
    virtual double objective(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const = 0;
    virtual void eq_constraints(const Eigen::VectorXd& x, Eigen::VectorXd& c) const = 0;
    virtual void ineq_constraints(const Eigen::VectorXd& x, Eigen::VectorXd& g) const = 0;
    // grad += J_c(x)^T y   /   grad += J_g(x)^T y
    virtual void eq_jacobian_tv(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                Eigen::VectorXd& grad) const = 0;
    virtual void ineq_jacobian_tv(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                  Eigen::VectorXd& grad) const = 0;
};

enum class SolveStatus { Converged, BudgetExhausted, Stagnated };
const char* solve_status_name(SolveStatus s);

struct SolverOptions {
    // convergence targets on the iterate the solver hands back
    double target_eq = 1e-8;
    double target_ineq = 1e-8;
    double grad_tol = 1e-6;
    int max_outer = 50;
    int max_inner = 250;
    double time_budget_s = 30.0;
    // penalty schedule
    double rho0 = 50.0;
    double rho_growth = 10.0;
    double rho_max = 1e9;
    int lbfgs_memory = 16;
};

struct SolverReport {
    SolveStatus status = SolveStatus::Stagnated;
    int outer_iterations = 0;
    long inner_iterations = 0;
    double objective = 0.0;
    double max_eq_violation = 0.0;
    double max_ineq_violation = 0.0;
    double grad_norm = 0.0;
    double wall_time_s = 0.0;
};

class ConstrainedSolver {
  public:
    virtual ~ConstrainedSolver() = default;
    virtual SolverReport minimize(const ConstrainedProblem& problem,
                                  Eigen::VectorXd& x) const = 0;
};

// Augmented Lagrangian outer loop (PHR multipliers for inequalities) with an
// L-BFGS inner minimization on analytic gradients. Deterministic.
class AugmentedLagrangianSolver : public ConstrainedSolver {
  public:
    explicit AugmentedLagrangianSolver(SolverOptions opts = {}) : opts_(opts) {}
    SolverReport minimize(const ConstrainedProblem& problem, Eigen::VectorXd& x) const override;
    const SolverOptions& options() const { return opts_; }

  private:
    SolverOptions opts_;
};

}  // namespace mrtp
