#include "mrtp/prioritizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mrtp {

TripleList find_triples(const std::vector<SampledPath>& refs, double D) {
    TripleList out;
    const int n = int(refs.size());
    if (n < 3) return out;
    const int H = refs.front().H();
    const double th = std::sqrt(2.0) * D;
    const double th2 = th * th;

    for (int t = 1; t <= H; ++t) {
        // pairwise proximity first, then triangles over the close pairs
        std::vector<std::vector<bool>> close(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const Vec2 pi = refs[i].waypoints[t].position();
                const Vec2 pj = refs[j].waypoints[t].position();
                if ((pi - pj).squared_norm() <= th2) close[i][j] = close[j][i] = true;
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (!close[i][j]) continue;
                for (int k = j + 1; k < n; ++k)
                    if (close[i][k] && close[j][k]) out.entries.push_back({i, j, k});
            }
    }
    return out;
}

int count_quadruple_events(const std::vector<SampledPath>& refs, double D) {
    const int n = int(refs.size());
    if (n < 4) return 0;
    const int H = refs.front().H();
    const double th2 = 2.0 * D * D;
    int events = 0;
    for (int t = 1; t <= H; ++t) {
        std::vector<Vec2> p(n);
        for (int i = 0; i < n; ++i) p[i] = refs[i].waypoints[t].position();
        auto close = [&](int a, int b) { return (p[a] - p[b]).squared_norm() <= th2; };
        bool found = false;
        for (int a = 0; a < n && !found; ++a)
            for (int b = a + 1; b < n && !found; ++b) {
                if (!close(a, b)) continue;
                for (int c = b + 1; c < n && !found; ++c) {
                    if (!close(a, c) || !close(b, c)) continue;
                    for (int d = c + 1; d < n && !found; ++d)
                        if (close(a, d) && close(b, d) && close(c, d)) found = true;
                }
            }
        if (found) ++events;
    }
    return events;
}

PriorityGroups assign_priorities(const TripleList& triples, int robot_count) {
    PriorityGroups out;
    std::vector<std::vector<int>> work;
    work.reserve(triples.entries.size());
    for (const auto& e : triples.entries) work.push_back({e[0], e[1], e[2]});

    std::vector<bool> grouped(robot_count, false);
    while (!work.empty()) {
        // most common current element value; ties to the lexicographically
        // smallest (std::map iterates in that order)
        std::map<std::vector<int>, int> counts;
        for (const auto& e : work) ++counts[e];
        auto best = counts.begin();
        for (auto it = counts.begin(); it != counts.end(); ++it)
            if (it->second > best->second) best = it;

        const std::vector<int> group = best->first;
        out.groups.push_back(group);
        for (int m : group)
            if (m >= 0 && m < robot_count) grouped[m] = true;

        std::vector<std::vector<int>> next;
        next.reserve(work.size());
        for (auto& e : work) {
            std::erase_if(e, [&](int m) {
                return std::find(group.begin(), group.end(), m) != group.end();
            });
            if (!e.empty()) next.push_back(std::move(e));
        }
        work = std::move(next);
    }
    for (int r = 0; r < robot_count; ++r)
        if (!grouped[r]) out.groups.push_back({r});
    return out;
}

MultiSolveResult grouped_solve(const std::vector<RobotModel>& robots,
                               const std::vector<SafeCorridor>& corridors,
                               const std::vector<SampledPath>& refs,
                               const std::vector<RobotGroup>& groups,
                               const TrajOptWeights& weights, const SolverOptions& sopts,
                               const TrajOptTolerances& tol) {
    const int n = int(robots.size());
    if (int(corridors.size()) != n || int(refs.size()) != n)
        throw std::invalid_argument("grouped_solve: robots/corridors/refs size mismatch");

    MultiSolveResult result;
    result.groups = groups;
    result.trajectories.resize(n);
    std::vector<FixedTrajectory> fixed;

    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const RobotGroup& g = groups[gi];
        std::vector<RobotModel> g_robots;
        std::vector<SafeCorridor> g_corridors;
        std::vector<SampledPath> g_refs;
        for (int r : g) {
            g_robots.push_back(robots[r]);
            g_corridors.push_back(corridors[r]);
            g_refs.push_back(refs[r]);
        }
        TrajOptProblem problem(g_robots, g_corridors, g_refs, fixed, weights);
        TrajOptResult res = solve_trajopt(problem, sopts, tol);

        GroupOutcome outcome;
        outcome.robots = g;
        outcome.feasible = res.feasible;
        outcome.cost = res.cost;
        outcome.diag = res.diag;
        result.outcomes.push_back(outcome);

        if (!res.feasible) {
            result.failed_group = int(gi);
            return result;
        }
        result.total_cost += res.cost;
        for (size_t k = 0; k < g.size(); ++k) {
            const int r = g[k];
            result.trajectories[r] = res.trajectories[k];
            FixedTrajectory ft;
            ft.robot_id = robots[r].id;
            ft.radius = robots[r].radius;
            ft.positions.reserve(res.trajectories[k].states.size());
            for (const auto& z : res.trajectories[k].states) ft.positions.push_back({z.x, z.y});
            fixed.push_back(std::move(ft));
        }
    }
    result.success = true;
    return result;
}

MultiSolveResult prioritized_solve(const std::vector<RobotModel>& robots,
                                   const std::vector<SafeCorridor>& corridors,
                                   const std::vector<SampledPath>& refs, double D,
                                   const TrajOptWeights& weights, const SolverOptions& sopts,
                                   const TrajOptTolerances& tol) {
    const PriorityGroups pg = assign_priorities(find_triples(refs, D), int(robots.size()));
    return grouped_solve(robots, corridors, refs, pg.groups, weights, sopts, tol);
}

MultiSolveResult coupled_solve(const std::vector<RobotModel>& robots,
                               const std::vector<SafeCorridor>& corridors,
                               const std::vector<SampledPath>& refs,
                               const TrajOptWeights& weights, const SolverOptions& sopts,
                               const TrajOptTolerances& tol) {
    RobotGroup all(robots.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = int(i);
    return grouped_solve(robots, corridors, refs, {all}, weights, sopts, tol);
}

}  // namespace mrtp
