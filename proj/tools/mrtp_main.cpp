#include <CLI11.hpp>
#include <iostream>

#include "mrtp/bench.hpp"
#include "mrtp/io.hpp"

using namespace mrtp;
using nlohmann::json;

int main(int argc, char** argv) {
    CLI::App app{"multi-robot trajectory planning toolkit"};
    app.require_subcommand(1);
    // --h is a real planner flag (subdivisions), so help stays long-form only
    app.set_help_flag("--help", "print help");

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a warehouse scenario");
    gen->set_help_flag("--help", "print help");
    uint64_t gen_seed = 0;
    int gen_n = 4;
    std::string gen_out = "scenario.json";
    gen->add_option("--seed", gen_seed, "scenario seed")->envname("MRTP_SEED");
    gen->add_option("--n", gen_n, "number of robots")->envname("MRTP_N");
    gen->add_option("--out", gen_out, "output scenario file")->envname("MRTP_OUT");
    double gen_D = 1.0, gen_dt = 1.6, gen_w = 1.5;
    int gen_h = 5;
    gen->add_option("--D", gen_D, "lattice grid size (m)")->envname("MRTP_D");
    gen->add_option("--dt", gen_dt, "primitive duration delta_T (s)")->envname("MRTP_DT");
    gen->add_option("--h", gen_h, "subdivisions per primitive")->envname("MRTP_H");
    gen->add_option("--w", gen_w, "ECBS suboptimality factor")->envname("MRTP_W");

    // ---- plan ----
    auto* plan = app.add_subcommand("plan", "run the full pipeline on a scenario");
    plan->set_help_flag("--help", "print help");
    std::string plan_scenario, plan_map, plan_mode = "prioritized";
    std::string plan_out = "trajectories.json", plan_metrics;
    double plan_w = -1, plan_D = -1, plan_dt = -1, plan_budget = -1;
    int plan_h = -1;
    int64_t plan_seed = -1;
    bool plan_timings = false;
    plan->add_option("--scenario", plan_scenario, "scenario file")
        ->required()
        ->envname("MRTP_SCENARIO");
    plan->add_option("--map", plan_map, "override the scenario map with a map file")
        ->envname("MRTP_MAP");
    plan->add_option("--mode", plan_mode, "coupled | prioritized | prioritized-random")
        ->envname("MRTP_MODE");
    plan->add_option("--w", plan_w, "override ECBS suboptimality factor")->envname("MRTP_W");
    plan->add_option("--D", plan_D, "override lattice grid size")->envname("MRTP_D");
    plan->add_option("--dt", plan_dt, "override delta_T")->envname("MRTP_DT");
    plan->add_option("--h", plan_h, "override subdivisions per primitive")->envname("MRTP_H");
    plan->add_option("--seed", plan_seed, "override scenario seed")->envname("MRTP_SEED");
    plan->add_option("--out", plan_out, "trajectory output file")->envname("MRTP_OUT");
    plan->add_option("--metrics", plan_metrics, "metrics output file")->envname("MRTP_METRICS");
    plan->add_option("--budget", plan_budget, "solver budget per group (s)")
        ->envname("MRTP_BUDGET");
    plan->add_flag("--timings", plan_timings,
                   "include wall-clock timings in the metrics file (non-reproducible)");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "re-check a trajectory file");
    verify->set_help_flag("--help", "print help");
    std::string ver_traj, ver_scenario, ver_map;
    verify->add_option("--traj", ver_traj, "trajectory file")->required()->envname("MRTP_TRAJ");
    verify->add_option("--scenario", ver_scenario, "scenario file providing the map")
        ->envname("MRTP_SCENARIO");
    verify->add_option("--map", ver_map, "map file")->envname("MRTP_MAP");

    // ---- bench ----
    auto* bench = app.add_subcommand("bench", "run the benchmark suite");
    bench->set_help_flag("--help", "print help");
    std::string bench_config, bench_dir;
    bench->add_option("--config", bench_config, "bench config JSON")->envname("MRTP_CONFIG");
    bench->add_option("--out-dir", bench_dir, "output directory")->envname("MRTP_OUT_DIR");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            ScenarioParams params;
            params.D = gen_D;
            params.delta_T = gen_dt;
            params.h = gen_h;
            params.w = gen_w;
            const Scenario s = gen_warehouse(gen_seed, gen_n, params);
            if (std::string msg = validate_scenario(s); !msg.empty())
                throw std::runtime_error("generated scenario fails validation: " + msg);
            write_text_file(gen_out, scenario_to_json(s).dump(2) + "\n");
            std::cout << "wrote " << gen_out << " (" << gen_n << " robots, seed " << gen_seed
                      << ")\n";
            return 0;
        }

        if (*plan) {
            Scenario s = load_scenario_file(plan_scenario);
            if (!plan_map.empty()) s.map = load_map_file(plan_map);
            if (plan_w > 0) s.params.w = plan_w;
            if (plan_D > 0) s.params.D = plan_D;
            if (plan_dt > 0) s.params.delta_T = plan_dt;
            if (plan_h > 0) s.params.h = plan_h;
            if (plan_seed >= 0) s.params.seed = uint64_t(plan_seed);
            if (plan_budget > 0) s.params.solver_budget_s = plan_budget;
            const PlanMode mode = plan_mode_from_string(plan_mode);
            const PipelineOutput out = run_pipeline(s, mode);
            if (!plan_metrics.empty())
                write_text_file(plan_metrics,
                                metrics_to_json(out.metrics, plan_timings).dump(2) + "\n");
            if (!out.metrics.success) {
                std::cerr << "pipeline failed at stage " << out.metrics.failure_stage << ": "
                          << out.metrics.message << "\n";
                return 1;
            }
            write_text_file(plan_out, trajectories_to_json(out, s).dump(2) + "\n");
            std::cout << "wrote " << plan_out << " (mode " << plan_mode_name(mode) << ", cost "
                      << out.metrics.total_cost << ", sum-of-costs "
                      << out.metrics.sum_of_costs << ")\n";
            return 0;
        }

        if (*verify) {
            OccupancyGrid grid;
            if (!ver_scenario.empty())
                grid = load_scenario_file(ver_scenario).map;
            else if (!ver_map.empty())
                grid = load_map_file(ver_map);
            else
                throw std::runtime_error("verify needs --scenario or --map");
            const TrajectoryFile f = load_trajectory_file(ver_traj);
            const VerificationReport report =
                verify_trajectories(f.trajectories, grid, f.robots, f.delta_t, {});
            std::cout << verification_report_to_json(report).dump(2) << "\n";
            return report.pass ? 0 : 1;
        }

        if (*bench) {
            BenchConfig config;
            if (!bench_config.empty())
                config = bench_config_from_json(json::parse(read_text_file(bench_config)));
            if (!bench_dir.empty()) config.out_dir = bench_dir;
            const BenchReport report = run_bench(config);
            write_bench_outputs(report, config.out_dir);
            for (const auto& a : report.aggregates)
                std::cout << "N=" << a.n << " " << plan_mode_name(a.mode) << ": success "
                          << a.successes << "/" << a.trials << ", mean opt " << a.mean_opt_s
                          << " s, mean cost " << a.mean_cost << "\n";
            for (const auto& g : report.cost_gaps)
                if (g.paired > 0)
                    std::cout << "N=" << g.n << " cost gap: " << g.gap_percent << "% over "
                              << g.paired << " paired trials\n";
            std::cout << "wrote " << config.out_dir << "/bench.{csv,json,svg}\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
