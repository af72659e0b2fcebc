#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mrtp/bench.hpp"
#include "mrtp/io.hpp"

namespace py = pybind11;
using namespace mrtp;

namespace {

py::dict metrics_dict(const RunMetrics& m) {
    py::dict d;
    d["success"] = m.success;
    d["failure_stage"] = m.failure_stage;
    d["message"] = m.message;
    d["mode"] = plan_mode_name(m.mode);
    d["seed"] = m.seed;
    d["n_robots"] = m.n_robots;
    d["total_cost"] = m.total_cost;
    d["sum_of_costs"] = m.sum_of_costs;
    d["lower_bound"] = m.lower_bound;
    d["M"] = m.M;
    d["H"] = m.H;
    d["groups"] = m.groups;
    d["quad_events"] = m.quad_events;
    d["mapf_s"] = m.times.mapf_s;
    d["corridor_s"] = m.times.corridor_s;
    d["opt_s"] = m.times.opt_s;
    d["total_s"] = m.times.total_s;
    d["verify_pass"] = m.discrete_report.pass && m.traj_report.pass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_mrtp, m) {
    m.doc() = "multi-robot trajectory planning toolkit (lattice MAPF + safe corridors + "
              "prioritized trajectory optimization)";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y);

    py::class_<Pose>(m, "Pose")
        .def(py::init<double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
             py::arg("theta") = 0.0)
        .def_readwrite("x", &Pose::x)
        .def_readwrite("y", &Pose::y)
        .def_readwrite("theta", &Pose::theta);

    py::class_<Rect>(m, "Rect")
        .def(py::init<double, double, double, double>(), py::arg("xmin") = 0.0,
             py::arg("ymin") = 0.0, py::arg("xmax") = 0.0, py::arg("ymax") = 0.0)
        .def_readwrite("xmin", &Rect::xmin)
        .def_readwrite("ymin", &Rect::ymin)
        .def_readwrite("xmax", &Rect::xmax)
        .def_readwrite("ymax", &Rect::ymax);

    py::class_<OccupancyGrid>(m, "OccupancyGrid")
        .def_property_readonly("ncols", &OccupancyGrid::ncols)
        .def_property_readonly("nrows", &OccupancyGrid::nrows)
        .def_property_readonly("resolution", &OccupancyGrid::resolution)
        .def_property_readonly("width_m", &OccupancyGrid::width_m)
        .def_property_readonly("height_m", &OccupancyGrid::height_m)
        .def("occupied", &OccupancyGrid::occupied, py::arg("ix"), py::arg("iy"));

    py::class_<RobotModel>(m, "RobotModel")
        .def(py::init<int, double, double, double>(), py::arg("id") = 0,
             py::arg("radius") = 0.15, py::arg("v_max") = 1.0, py::arg("omega_max") = 1.0)
        .def_readwrite("id", &RobotModel::id)
        .def_readwrite("radius", &RobotModel::radius)
        .def_readwrite("v_max", &RobotModel::v_max)
        .def_readwrite("omega_max", &RobotModel::omega_max);

    py::class_<Task>(m, "Task")
        .def(py::init<>())
        .def_readwrite("robot_id", &Task::robot_id)
        .def_readwrite("start", &Task::start)
        .def_readwrite("goal", &Task::goal);

    py::class_<ScenarioParams>(m, "ScenarioParams")
        .def(py::init<>())
        .def_readwrite("D", &ScenarioParams::D)
        .def_readwrite("delta_T", &ScenarioParams::delta_T)
        .def_readwrite("h", &ScenarioParams::h)
        .def_readwrite("w", &ScenarioParams::w)
        .def_readwrite("resolution", &ScenarioParams::resolution)
        .def_readwrite("solver_budget_s", &ScenarioParams::solver_budget_s)
        .def_readwrite("seed", &ScenarioParams::seed);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("map", &Scenario::map)
        .def_readwrite("robots", &Scenario::robots)
        .def_readwrite("tasks", &Scenario::tasks)
        .def_readwrite("params", &Scenario::params);

    py::class_<State>(m, "State")
        .def_readonly("x", &State::x)
        .def_readonly("y", &State::y)
        .def_readonly("theta", &State::theta);

    py::class_<Input>(m, "Input")
        .def_readonly("v", &Input::v)
        .def_readonly("omega", &Input::omega);

    py::class_<OptimizedTrajectory>(m, "OptimizedTrajectory")
        .def_readonly("robot_id", &OptimizedTrajectory::robot_id)
        .def_readonly("states", &OptimizedTrajectory::states)
        .def_readonly("inputs", &OptimizedTrajectory::inputs);

    m.def("load_map_string", &load_map_string, py::arg("text"));
    m.def("save_map_ascii", &save_map_ascii, py::arg("grid"));
    m.def("save_map_cells", &save_map_cells, py::arg("grid"));
    m.def("disc_free", &disc_free, py::arg("grid"), py::arg("center"), py::arg("radius"));
    m.def("rect_free", &rect_free, py::arg("grid"), py::arg("rect"), py::arg("radius"));

    m.def("warehouse_slot_count", &warehouse_slot_count);
    m.def(
        "gen_warehouse",
        [](uint64_t seed, int n) { return gen_warehouse(seed, n); }, py::arg("seed"),
        py::arg("n"));
    m.def("validate_scenario", &validate_scenario, py::arg("scenario"),
          "empty string when every configuration gate passes");
    m.def(
        "scenario_to_json", [](const Scenario& s) { return scenario_to_json(s).dump(2); },
        py::arg("scenario"));
    m.def(
        "scenario_from_json",
        [](const std::string& text) { return scenario_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));

    m.def(
        "plan_discrete",
        [](const Scenario& s) {
            EcbsOptions opt;
            opt.w = s.params.w;
            opt.timeout_s = s.params.ecbs_timeout_s;
            opt.h_align = s.params.h;
            const LatticeConfig cfg = s.params.lattice(s.map.origin());
            const EcbsResult res = ecbs_plan(s.map, s.robots, s.tasks, cfg, opt);
            py::dict d;
            d["status"] = mapf_status_name(res.status);
            d["sum_of_costs"] = res.plan.sum_of_costs;
            d["lower_bound"] = res.plan.lower_bound;
            d["M"] = res.plan.M;
            return d;
        },
        py::arg("scenario"), "run only the discrete MAPF stage");

    m.def(
        "run_pipeline",
        [](const Scenario& s, const std::string& mode) {
            const PipelineOutput out = run_pipeline(s, plan_mode_from_string(mode));
            py::dict d = metrics_dict(out.metrics);
            d["trajectories"] = out.trajectories;
            d["delta_t"] = out.delta_t;
            d["metrics_json"] = metrics_to_json(out.metrics).dump(2);
            d["trajectories_json"] =
                out.metrics.success ? trajectories_to_json(out, s).dump(2) : std::string();
            return d;
        },
        py::arg("scenario"), py::arg("mode") = "prioritized");

    m.def(
        "verify",
        [](const Scenario& s, const std::vector<OptimizedTrajectory>& trajs, double delta_t) {
            const VerificationReport r =
                verify_trajectories(trajs, s.map, s.robots, delta_t, {});
            return py::make_tuple(r.pass, verification_report_to_json(r).dump(2));
        },
        py::arg("scenario"), py::arg("trajectories"), py::arg("delta_t"),
        "independent re-check; returns (pass, report_json)");
}
