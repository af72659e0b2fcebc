#include "mrtp/io.hpp"

#include <fstream>
#include <sstream>

namespace mrtp {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

void matrix_from_json(const json& j, Eigen::Ref<Eigen::MatrixXd> m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = j.at(r).at(c).get<double>();
}

json grid_to_json(const OccupancyGrid& g) {
    json j = {{"type", "mrtp-map-cells"},
              {"resolution", g.resolution()},
              {"origin", {g.origin().x, g.origin().y}},
              {"ncols", g.ncols()},
              {"nrows", g.nrows()}};
    json occ = json::array();
    for (const auto& [ix, iy] : g.occupied_cells()) occ.push_back({ix, iy});
    j["occupied"] = occ;
    return j;
}

OccupancyGrid grid_from_json(const json& j) { return load_map_string(j.dump() + "\n"); }

}  // namespace

json params_to_json(const ScenarioParams& p) {
    return {{"D", p.D},
            {"delta_T", p.delta_T},
            {"h", p.h},
            {"w", p.w},
            {"resolution", p.resolution},
            {"corridor_step", p.corridor_step},
            {"backward_arcs", p.backward_arcs},
            {"ecbs_timeout_s", p.ecbs_timeout_s},
            {"solver_budget_s", p.solver_budget_s},
            {"solver_max_outer", p.solver_max_outer},
            {"P", matrix_to_json(p.weights.P)},
            {"Q", matrix_to_json(p.weights.Q)},
            {"eq_tol", p.tolerances.eq_tol},
            {"ineq_tol", p.tolerances.ineq_tol},
            {"seed", p.seed}};
}

ScenarioParams params_from_json(const json& j) {
    ScenarioParams p;
    p.D = j.value("D", p.D);
    p.delta_T = j.value("delta_T", p.delta_T);
    p.h = j.value("h", p.h);
    p.w = j.value("w", p.w);
    p.resolution = j.value("resolution", p.resolution);
    p.corridor_step = j.value("corridor_step", p.corridor_step);
    p.backward_arcs = j.value("backward_arcs", p.backward_arcs);
    p.ecbs_timeout_s = j.value("ecbs_timeout_s", p.ecbs_timeout_s);
    p.solver_budget_s = j.value("solver_budget_s", p.solver_budget_s);
    p.solver_max_outer = j.value("solver_max_outer", p.solver_max_outer);
    if (j.contains("P")) matrix_from_json(j.at("P"), p.weights.P);
    if (j.contains("Q")) matrix_from_json(j.at("Q"), p.weights.Q);
    p.tolerances.eq_tol = j.value("eq_tol", p.tolerances.eq_tol);
    p.tolerances.ineq_tol = j.value("ineq_tol", p.tolerances.ineq_tol);
    p.seed = j.value("seed", p.seed);
    return p;
}

json scenario_to_json(const Scenario& s) {
    json robots = json::array();
    for (const auto& r : s.robots)
        robots.push_back({{"id", r.id},
                          {"radius", r.radius},
                          {"v_max", r.v_max},
                          {"omega_max", r.omega_max}});
    json tasks = json::array();
    for (const auto& t : s.tasks)
        tasks.push_back({{"robot", t.robot_id},
                         {"start", {t.start.x, t.start.y, t.start.theta}},
                         {"goal", {t.goal.x, t.goal.y, t.goal.theta}}});
    return {{"schema", "mrtp-scenario-v1"},
            {"map", grid_to_json(s.map)},
            {"robots", robots},
            {"tasks", tasks},
            {"params", params_to_json(s.params)}};
}

Scenario scenario_from_json(const json& j) {
    if (j.value("schema", "") != "mrtp-scenario-v1")
        throw std::runtime_error("scenario file: unknown or missing schema");
    Scenario s;
    s.map = grid_from_json(j.at("map"));
    for (const auto& r : j.at("robots"))
        s.robots.push_back({r.at("id").get<int>(), r.at("radius").get<double>(),
                            r.at("v_max").get<double>(), r.at("omega_max").get<double>()});
    for (const auto& t : j.at("tasks")) {
        Task task;
        task.robot_id = t.at("robot").get<int>();
        task.start = {t.at("start").at(0).get<double>(), t.at("start").at(1).get<double>(),
                      t.at("start").at(2).get<double>()};
        task.goal = {t.at("goal").at(0).get<double>(), t.at("goal").at(1).get<double>(),
                     t.at("goal").at(2).get<double>()};
        s.tasks.push_back(task);
    }
    s.params = params_from_json(j.at("params"));
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    return scenario_from_json(json::parse(read_text_file(path)));
}

json trajectories_to_json(const PipelineOutput& out, const Scenario& s) {
    json robots = json::array();
    for (size_t i = 0; i < out.trajectories.size(); ++i) {
        const auto& tr = out.trajectories[i];
        const auto& model = s.robots[i];
        json states = json::array();
        for (size_t k = 0; k < tr.states.size(); ++k) {
            const double v = k < tr.inputs.size() ? tr.inputs[k].v : 0.0;
            const double w = k < tr.inputs.size() ? tr.inputs[k].omega : 0.0;
            states.push_back({double(k) * out.delta_t, tr.states[k].x, tr.states[k].y,
                              tr.states[k].theta, v, w});
        }
        json corridor = json::array();
        if (i < out.corridors.size())
            for (const auto& r : out.corridors[i].rects)
                corridor.push_back({r.xmin, r.ymin, r.xmax, r.ymax});
        robots.push_back({{"id", model.id},
                          {"radius", model.radius},
                          {"v_max", model.v_max},
                          {"omega_max", model.omega_max},
                          {"states", states},
                          {"corridor", corridor}});
    }
    json groups = json::array();
    for (const auto& g : out.metrics.groups) groups.push_back(g);
    return {{"schema", "mrtp-traj-v1"},
            {"delta_t", out.delta_t},
            {"mode", plan_mode_name(out.metrics.mode)},
            {"seed", out.metrics.seed},
            {"groups", groups},
            {"robots", robots}};
}

TrajectoryFile trajectories_from_json(const json& j) {
    if (j.value("schema", "") != "mrtp-traj-v1")
        throw std::runtime_error("trajectory file: unknown or missing schema");
    TrajectoryFile f;
    f.delta_t = j.at("delta_t").get<double>();
    f.mode = j.value("mode", "");
    f.seed = j.value("seed", 0ull);
    for (const auto& r : j.at("robots")) {
        f.robots.push_back({r.at("id").get<int>(), r.at("radius").get<double>(),
                            r.at("v_max").get<double>(), r.at("omega_max").get<double>()});
        OptimizedTrajectory tr;
        tr.robot_id = f.robots.back().id;
        const auto& states = r.at("states");
        for (size_t k = 0; k < states.size(); ++k) {
            const auto& row = states.at(k);
            tr.states.push_back({row.at(1).get<double>(), row.at(2).get<double>(),
                                 row.at(3).get<double>()});
            if (k + 1 < states.size())
                tr.inputs.push_back({row.at(4).get<double>(), row.at(5).get<double>()});
        }
        f.trajectories.push_back(std::move(tr));
    }
    return f;
}

TrajectoryFile load_trajectory_file(const std::string& path) {
    return trajectories_from_json(json::parse(read_text_file(path)));
}

json verification_report_to_json(const VerificationReport& r) {
    json robots = json::array();
    for (const auto& s : r.robots)
        robots.push_back({{"robot", s.robot_id},
                          {"max_dynamics_residual", s.max_dynamics_residual},
                          {"max_input_violation", s.max_input_violation},
                          {"min_clearance", std::isfinite(s.min_clearance) ? s.min_clearance
                                                                           : 1e300}});
    json pairs = json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"min_separation",
                          std::isfinite(p.min_separation) ? p.min_separation : 1e300}});
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"kind", violation_kind_name(v.kind)},
                              {"robot_i", v.robot_i},
                              {"robot_j", v.robot_j},
                              {"t", v.t},
                              {"sample", v.sample},
                              {"value", v.value},
                              {"detail", v.detail}});
    return {{"pass", r.pass}, {"robots", robots}, {"pairs", pairs}, {"violations", violations}};
}

json metrics_to_json(const RunMetrics& m, bool include_timings) {
    json groups = json::array();
    for (const auto& g : m.groups) groups.push_back(g);
    json outcomes = json::array();
    for (const auto& o : m.outcomes)
        outcomes.push_back({{"robots", o.robots},
                            {"feasible", o.feasible},
                            {"cost", o.cost},
                            {"status", solve_status_name(o.diag.status)},
                            {"outer_iterations", o.diag.outer_iterations},
                            {"inner_iterations", o.diag.inner_iterations},
                            {"max_eq_residual", o.diag.max_eq_residual},
                            {"max_ineq_violation", o.diag.max_ineq_violation},
                            {"used_init", o.diag.used_init}});
    json j = {{"schema", "mrtp-metrics-v1"},
              {"success", m.success},
              {"failure_stage", m.failure_stage},
              {"message", m.message},
              {"mode", plan_mode_name(m.mode)},
              {"seed", m.seed},
              {"n_robots", m.n_robots},
              {"total_cost", m.total_cost},
              {"sum_of_costs", m.sum_of_costs},
              {"lower_bound", m.lower_bound},
              {"M", m.M},
              {"H", m.H},
              {"groups", groups},
              {"group_outcomes", outcomes},
              {"quad_events", m.quad_events},
              {"verify_discrete", verification_report_to_json(m.discrete_report)},
              {"verify_trajectories", verification_report_to_json(m.traj_report)}};
    if (include_timings)
        j["timings"] = {{"mapf_s", m.times.mapf_s},
                        {"corridor_s", m.times.corridor_s},
                        {"opt_s", m.times.opt_s},
                        {"verify_s", m.times.verify_s},
                        {"total_s", m.times.total_s}};
    return j;
}

}  // namespace mrtp
