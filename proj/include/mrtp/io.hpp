#pragma once

#include <json.hpp>

#include "mrtp/pipeline.hpp"

namespace mrtp {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Scenario files: {"schema": "mrtp-scenario-v1", map, robots, tasks, params}.
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);

// Trajectory files: {"schema": "mrtp-traj-v1", delta_t, robots: [{id, radius,
// v_max, omega_max, states: [[t,x,y,theta,v,omega]...], corridor}], ...}.
// The last state row carries zero inputs.
nlohmann::json trajectories_to_json(const PipelineOutput& out, const Scenario& s);

struct TrajectoryFile {
    double delta_t = 0.0;
    std::string mode;
    uint64_t seed = 0;
    std::vector<RobotModel> robots;
    std::vector<OptimizedTrajectory> trajectories;
};
TrajectoryFile trajectories_from_json(const nlohmann::json& j);
TrajectoryFile load_trajectory_file(const std::string& path);

nlohmann::json verification_report_to_json(const VerificationReport& r);

// Deterministic by default: wall-clock fields are only emitted when
// include_timings is set, so identical runs produce identical files.
nlohmann::json metrics_to_json(const RunMetrics& m, bool include_timings = false);

nlohmann::json params_to_json(const ScenarioParams& p);
ScenarioParams params_from_json(const nlohmann::json& j);

}  // namespace mrtp
