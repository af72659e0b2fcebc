#include "mrtp/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <sstream>

namespace mrtp {

using nlohmann::json;

BenchConfig bench_config_from_json(const json& j) {
    BenchConfig c;
    if (j.contains("robot_counts")) c.robot_counts = j.at("robot_counts").get<std::vector<int>>();
    c.trials = j.value("trials", c.trials);
    if (j.contains("modes")) {
        c.modes.clear();
        for (const auto& m : j.at("modes")) c.modes.push_back(plan_mode_from_string(m));
    }
    c.seed0 = j.value("seed0", c.seed0);
    if (j.contains("params")) c.params = params_from_json(j.at("params"));
    c.out_dir = j.value("out_dir", c.out_dir);
    return c;
}

BenchReport run_bench(const BenchConfig& config) {
    BenchReport report;
    report.config = config;

    for (const int n : config.robot_counts) {
        for (int trial = 0; trial < config.trials; ++trial) {
            const uint64_t seed = config.seed0 + uint64_t(trial);
            const Scenario scenario = gen_warehouse(seed, n, config.params);
            for (const PlanMode mode : config.modes) {
                TrialRecord rec;
                rec.n = n;
                rec.mode = mode;
                rec.trial = trial;
                rec.seed = seed;
                rec.metrics = run_pipeline(scenario, mode).metrics;
                report.records.push_back(std::move(rec));
            }
        }
    }

    for (const int n : config.robot_counts) {
        for (const PlanMode mode : config.modes) {
            BenchAggregate agg;
            agg.n = n;
            agg.mode = mode;
            std::vector<double> opt_times;
            for (const auto& rec : report.records) {
                if (rec.n != n || rec.mode != mode) continue;
                ++agg.trials;
                agg.mean_mapf_s += rec.metrics.times.mapf_s;
                agg.mean_corridor_s += rec.metrics.times.corridor_s;
                agg.mean_opt_s += rec.metrics.times.opt_s;
                agg.mean_total_s += rec.metrics.times.total_s;
                opt_times.push_back(rec.metrics.times.opt_s);
                if (rec.metrics.success) {
                    ++agg.successes;
                    agg.mean_cost += rec.metrics.total_cost;
                }
            }
            if (agg.trials > 0) {
                agg.mean_mapf_s /= agg.trials;
                agg.mean_corridor_s /= agg.trials;
                agg.mean_opt_s /= agg.trials;
                agg.mean_total_s /= agg.trials;
                agg.success_rate = double(agg.successes) / agg.trials;
                std::sort(opt_times.begin(), opt_times.end());
                agg.median_opt_s = opt_times[opt_times.size() / 2];
            }
            if (agg.successes > 0) agg.mean_cost /= agg.successes;
            report.aggregates.push_back(agg);
        }
    }

    const bool has_pair =
        std::count(config.modes.begin(), config.modes.end(), PlanMode::Prioritized) &&
        std::count(config.modes.begin(), config.modes.end(), PlanMode::Coupled);
    if (has_pair) {
        for (const int n : config.robot_counts) {
            CostGapRow row;
            row.n = n;
            for (int trial = 0; trial < config.trials; ++trial) {
                const RunMetrics* pri = nullptr;
                const RunMetrics* cou = nullptr;
                for (const auto& rec : report.records) {
                    if (rec.n != n || rec.trial != trial) continue;
                    if (rec.mode == PlanMode::Prioritized) pri = &rec.metrics;
                    if (rec.mode == PlanMode::Coupled) cou = &rec.metrics;
                }
                if (pri && cou && pri->success && cou->success) {
                    ++row.paired;
                    row.mean_prioritized += pri->total_cost;
                    row.mean_coupled += cou->total_cost;
                }
            }
            if (row.paired > 0) {
                row.mean_prioritized /= row.paired;
                row.mean_coupled /= row.paired;
                if (row.mean_coupled > 0)
                    row.gap_percent =
                        100.0 * (row.mean_prioritized - row.mean_coupled) / row.mean_coupled;
            }
            report.cost_gaps.push_back(row);
        }
    }
    return report;
}

std::string bench_csv(const BenchReport& report) {
    std::ostringstream out;
    out << "n,mode,trial,seed,success,failure_stage,mapf_s,corridor_s,opt_s,total_s,"
           "cost,sum_of_costs,lower_bound,groups,quad_events\n";
    for (const auto& rec : report.records) {
        const auto& m = rec.metrics;
        out << rec.n << ',' << plan_mode_name(rec.mode) << ',' << rec.trial << ',' << rec.seed
            << ',' << (m.success ? 1 : 0) << ',' << m.failure_stage << ',' << m.times.mapf_s
            << ',' << m.times.corridor_s << ',' << m.times.opt_s << ',' << m.times.total_s
            << ',' << m.total_cost << ',' << m.sum_of_costs << ',' << m.lower_bound << ','
            << m.groups.size() << ',' << m.quad_events << '\n';
    }
    return out.str();
}

json bench_to_json(const BenchReport& report) {
    json aggs = json::array();
    for (const auto& a : report.aggregates)
        aggs.push_back({{"n", a.n},
                        {"mode", plan_mode_name(a.mode)},
                        {"trials", a.trials},
                        {"successes", a.successes},
                        {"success_rate", a.success_rate},
                        {"mean_mapf_s", a.mean_mapf_s},
                        {"mean_corridor_s", a.mean_corridor_s},
                        {"mean_opt_s", a.mean_opt_s},
                        {"mean_total_s", a.mean_total_s},
                        {"median_opt_s", a.median_opt_s},
                        {"mean_cost", a.mean_cost}});
    json gaps = json::array();
    for (const auto& g : report.cost_gaps)
        gaps.push_back({{"n", g.n},
                        {"paired", g.paired},
                        {"mean_prioritized", g.mean_prioritized},
                        {"mean_coupled", g.mean_coupled},
                        {"gap_percent", g.gap_percent}});
    return {{"schema", "mrtp-bench-v1"},
            {"trials", report.config.trials},
            {"seed0", report.config.seed0},
            {"aggregates", aggs},
            {"cost_gaps", gaps}};
}

namespace {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

// One panel with linear axes, tick labels and a small legend.
void svg_panel(std::ostringstream& out, double px, double py, double pw, double ph,
               const std::string& title, const std::string& ylabel,
               const std::vector<Series>& series) {
    double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymax <= 0) ymax = 1;
    ymax *= 1.1;
    const double lx = px + 48, ly = py + 24, lw = pw - 64, lh = ph - 64;
    auto X = [&](double x) { return lx + (x - xmin) / (xmax - xmin) * lw; };
    auto Y = [&](double y) { return ly + lh - (y - ymin) / (ymax - ymin) * lh; };

    out << "<text x='" << px + pw / 2 << "' y='" << py + 14
        << "' text-anchor='middle' font-size='13' font-weight='bold'>" << title << "</text>\n";
    out << "<rect x='" << lx << "' y='" << ly << "' width='" << lw << "' height='" << lh
        << "' fill='none' stroke='#888'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = ymin + (ymax - ymin) * i / 4.0;
        out << "<line x1='" << lx << "' y1='" << Y(y) << "' x2='" << lx + lw << "' y2='" << Y(y)
            << "' stroke='#ddd'/>\n";
        char buf[32];
        snprintf(buf, sizeof buf, "%.3g", y);
        out << "<text x='" << lx - 4 << "' y='" << Y(y) + 4
            << "' text-anchor='end' font-size='10'>" << buf << "</text>\n";
    }
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            (void)y;
            out << "<text x='" << X(x) << "' y='" << ly + lh + 14
                << "' text-anchor='middle' font-size='10'>" << int(x) << "</text>\n";
        }
    out << "<text x='" << px + 12 << "' y='" << py + ph / 2
        << "' font-size='10' transform='rotate(-90 " << px + 12 << " " << py + ph / 2 << ")'>"
        << ylabel << "</text>\n";
    out << "<text x='" << lx + lw / 2 << "' y='" << ly + lh + 30
        << "' text-anchor='middle' font-size='11'>robots</text>\n";

    double legend_y = ly + 12;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << s.color << "' stroke-width='2' points='";
        for (const auto& [x, y] : s.points) out << X(x) << ',' << Y(y) << ' ';
        out << "'/>\n";
        for (const auto& [x, y] : s.points)
            out << "<circle cx='" << X(x) << "' cy='" << Y(y) << "' r='2.5' fill='" << s.color
                << "'/>\n";
        out << "<line x1='" << lx + 8 << "' y1='" << legend_y << "' x2='" << lx + 28 << "' y2='"
            << legend_y << "' stroke='" << s.color << "' stroke-width='2'/>\n";
        out << "<text x='" << lx + 32 << "' y='" << legend_y + 4 << "' font-size='10'>"
            << s.label << "</text>\n";
        legend_y += 14;
    }
}

std::string mode_color(PlanMode m) {
    switch (m) {
        case PlanMode::Prioritized: return "#d62728";
        case PlanMode::Coupled: return "#1f77b4";
        case PlanMode::PrioritizedRandom: return "#2ca02c";
    }
    return "#000";
}

}  // namespace

std::string bench_svg(const BenchReport& report) {
    const double panel_w = 320, panel_h = 260;
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << 3 * panel_w << "' height='"
        << panel_h << "' font-family='sans-serif'>\n";

    auto series_of = [&](auto value) {
        std::vector<Series> all;
        for (const PlanMode mode : report.config.modes) {
            Series s;
            s.label = plan_mode_name(mode);
            s.color = mode_color(mode);
            for (const auto& a : report.aggregates)
                if (a.mode == mode) s.points.emplace_back(double(a.n), value(a));
            all.push_back(std::move(s));
        }
        return all;
    };

    svg_panel(out, 0, 0, panel_w, panel_h, "optimization runtime", "mean seconds",
              series_of([](const BenchAggregate& a) { return a.mean_opt_s; }));
    svg_panel(out, panel_w, 0, panel_w, panel_h, "total cost", "mean objective",
              series_of([](const BenchAggregate& a) { return a.mean_cost; }));
    svg_panel(out, 2 * panel_w, 0, panel_w, panel_h, "success rate", "fraction",
              series_of([](const BenchAggregate& a) { return a.success_rate; }));
    out << "</svg>\n";
    return out.str();
}

void write_bench_outputs(const BenchReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/bench.csv", bench_csv(report));
    write_text_file(dir + "/bench.json", bench_to_json(report).dump(2) + "\n");
    write_text_file(dir + "/bench.svg", bench_svg(report));
}

}  // namespace mrtp
