#include "mrtp/pipeline.hpp"

#include <chrono>

namespace mrtp {

const char* plan_mode_name(PlanMode m) {
    switch (m) {
        case PlanMode::Coupled: return "coupled";
        case PlanMode::Prioritized: return "prioritized";
        case PlanMode::PrioritizedRandom: return "prioritized-random";
    }
    return "?";
}

PlanMode plan_mode_from_string(const std::string& s) {
    if (s == "coupled") return PlanMode::Coupled;
    if (s == "prioritized") return PlanMode::Prioritized;
    if (s == "prioritized-random") return PlanMode::PrioritizedRandom;
    throw std::invalid_argument("unknown mode \"" + s +
                                "\" (coupled | prioritized | prioritized-random)");
}

std::vector<RobotGroup> random_groups(int robot_count, uint64_t seed) {
    std::vector<int> order(robot_count);
    for (int i = 0; i < robot_count; ++i) order[i] = i;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng_below(rng, i)]);
    std::vector<RobotGroup> groups;
    for (int i = 0; i < robot_count; i += 3) {
        RobotGroup g(order.begin() + i, order.begin() + std::min(i + 3, robot_count));
        std::sort(g.begin(), g.end());
        groups.push_back(std::move(g));
    }
    return groups;
}

PipelineOutput run_pipeline(const Scenario& scenario, PlanMode mode) {
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::time_point a, clock::time_point b) {
        return std::chrono::duration<double>(b - a).count();
    };

    PipelineOutput out;
    RunMetrics& m = out.metrics;
    m.mode = mode;
    m.seed = scenario.params.seed;
    m.n_robots = int(scenario.robots.size());

    if (std::string msg = validate_scenario(scenario); !msg.empty()) {
        m.failure_stage = "gates";
        m.message = msg;
        return out;
    }
    const LatticeConfig cfg = scenario.params.lattice(scenario.map.origin());

    // ---- discrete path planning ----
    const auto t0 = clock::now();
    EcbsOptions eopt;
    eopt.w = scenario.params.w;
    eopt.timeout_s = scenario.params.ecbs_timeout_s;
    eopt.h_align = scenario.params.h;
    EcbsResult ecbs = ecbs_plan(scenario.map, scenario.robots, scenario.tasks, cfg, eopt);
    const auto t1 = clock::now();
    m.times.mapf_s = seconds(t0, t1);
    if (ecbs.status != MapfStatus::Success) {
        m.failure_stage = "mapf";
        m.message = std::string(mapf_status_name(ecbs.status)) +
                    (ecbs.message.empty() ? "" : ": " + ecbs.message);
        return out;
    }
    out.plan = std::move(ecbs.plan);
    m.sum_of_costs = out.plan.sum_of_costs;
    m.lower_bound = out.plan.lower_bound;
    m.M = out.plan.M;

    // ---- corridors ----
    try {
        for (size_t i = 0; i < scenario.robots.size(); ++i) {
            SampledPath sp =
                subdivide_path(out.plan.paths[i], scenario.params.h, cfg, scenario.robots);
            out.corridors.push_back(build_corridor(scenario.map, sp, scenario.robots[i].radius,
                                                   scenario.params.corridor_step));
            out.refs.push_back(std::move(sp));
        }
    } catch (const std::exception& e) {
        m.times.corridor_s = seconds(t1, clock::now());
        m.failure_stage = "corridor";
        m.message = e.what();
        return out;
    }
    const auto t2 = clock::now();
    m.times.corridor_s = seconds(t1, t2);
    m.H = out.refs.empty() ? 0 : out.refs.front().H();
    out.delta_t = cfg.delta_T / scenario.params.h;
    m.quad_events = count_quadruple_events(out.refs, scenario.params.D);

    // ---- trajectory optimization ----
    const SolverOptions sopts = scenario.params.solver_options();
    MultiSolveResult solved;
    switch (mode) {
        case PlanMode::Coupled:
            solved = coupled_solve(scenario.robots, out.corridors, out.refs,
                                   scenario.params.weights, sopts, scenario.params.tolerances);
            break;
        case PlanMode::Prioritized:
            solved = prioritized_solve(scenario.robots, out.corridors, out.refs,
                                       scenario.params.D, scenario.params.weights, sopts,
                                       scenario.params.tolerances);
            break;
        case PlanMode::PrioritizedRandom:
            solved = grouped_solve(scenario.robots, out.corridors, out.refs,
                                   random_groups(int(scenario.robots.size()),
                                                 scenario.params.seed),
                                   scenario.params.weights, sopts, scenario.params.tolerances);
            break;
    }
    const auto t3 = clock::now();
    m.times.opt_s = seconds(t2, t3);
    m.times.total_s = m.times.mapf_s + m.times.corridor_s + m.times.opt_s;
    m.groups = solved.groups;
    m.outcomes = solved.outcomes;
    if (!solved.success) {
        m.failure_stage = "opt";
        m.message = "group " + std::to_string(solved.failed_group) + " infeasible (" +
                    solve_status_name(solved.outcomes.back().diag.status) + ")";
        return out;
    }
    out.trajectories = std::move(solved.trajectories);
    m.total_cost = solved.total_cost;

    // ---- independent verification ----
    m.discrete_report = verify_discrete(out.plan, scenario.map, scenario.robots, cfg);
    m.traj_report = verify_trajectories(out.trajectories, scenario.map, scenario.robots,
                                        out.delta_t, {});
    m.times.verify_s = seconds(t3, clock::now());
    if (!m.discrete_report.pass || !m.traj_report.pass) {
        m.failure_stage = "verify";
        m.message = "independent verification failed (" +
                    std::to_string(m.discrete_report.violations.size()) + " discrete, " +
                    std::to_string(m.traj_report.violations.size()) + " trajectory violations)";
        return out;
    }
    m.success = true;
    return out;
}

}  // namespace mrtp
