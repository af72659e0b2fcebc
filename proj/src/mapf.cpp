#include "mrtp/mapf.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace mrtp {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline const LatticeState& padded(const std::vector<LatticeState>& path, int t) {
    return size_t(t) < path.size() ? path[t] : path.back();
}

inline PrimitiveKind step_kind(const std::vector<LatticeState>& path, int t) {
    if (size_t(t + 1) >= path.size()) return PrimitiveKind::Wait;
    PrimitiveKind k;
    if (!primitive_between(path[t], path[t + 1], k))
        throw std::invalid_argument("path contains a non-primitive transition at step " +
                                    std::to_string(t));
    return k;
}

// Traces stay within sqrt(2)*D of their source cell center; far-apart cells
// cannot conflict.
inline bool cells_far(const LatticeState& a, const LatticeState& b, double sep, double D) {
    const int cheb = std::max(std::abs(a.cx - b.cx), std::abs(a.cy - b.cy));
    return cheb * D - 2.0 * std::sqrt(2.0) * D > sep;
}

}  // namespace

bool edge_step_conflict(const LatticeState& a_from, PrimitiveKind a_kind,
                        const LatticeState& b_from, PrimitiveKind b_kind, double sep,
                        const LatticeConfig& cfg, double resolution, int h_align) {
    if (cells_far(a_from, b_from, sep, cfg.D)) return false;
    const MotionPrimitive ma = make_primitive(a_kind, cfg);
    const MotionPrimitive mb = make_primitive(b_kind, cfg);
    const double arc = std::max(ma.arc_length, mb.arc_length);
    const int n = std::max(trace_sample_count(arc, resolution, h_align), 2 * h_align);
    const double sep2 = sep * sep;
    for (int k = 1; k < n; ++k) {
        const double tau = double(k) / n;
        const Pose pa = trace_pose(a_from, ma, tau, cfg);
        const Pose pb = trace_pose(b_from, mb, tau, cfg);
        if ((pa.position() - pb.position()).squared_norm() < sep2) return true;
    }
    return false;
}

std::vector<Conflict> detect_conflicts(const DiscretePlan& plan,
                                       const std::vector<RobotModel>& robots,
                                       const LatticeConfig& cfg, double resolution,
                                       int h_align) {
    const int n = int(plan.paths.size());
    for (const auto& p : plan.paths)
        if (int(p.size()) != plan.M + 1)
            throw std::invalid_argument("detect_conflicts: paths must share length M+1");

    std::vector<Conflict> out;
    for (int t = 0; t <= plan.M; ++t) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double sep = robots[i].radius + robots[j].radius;
                const Vec2 pi = cfg.state_position(plan.paths[i][t]);
                const Vec2 pj = cfg.state_position(plan.paths[j][t]);
                if ((pi - pj).norm() < sep) out.push_back({i, j, t, false});
            }
        }
        if (t == plan.M) break;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double sep = robots[i].radius + robots[j].radius;
                if (edge_step_conflict(plan.paths[i][t], step_kind(plan.paths[i], t),
                                       plan.paths[j][t], step_kind(plan.paths[j], t), sep, cfg,
                                       resolution, h_align))
                    out.push_back({i, j, t, true});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) {
        return std::tie(a.t, a.is_edge, a.i, a.j) < std::tie(b.t, b.is_edge, b.i, b.j);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Low-level search
// ---------------------------------------------------------------------------

namespace {

// 8-connected BFS distance to the goal cell over valid lattice cells. Every
// primitive moves at most one cell per axis and costs one timestep, so this
// is admissible for the oriented search.
std::vector<int> goal_distance_field(const LatticeMap& lat, int goal_cx, int goal_cy) {
    const int nc = lat.ncols(), nr = lat.nrows();
    std::vector<int> dist(size_t(nc) * nr, kInf);
    auto cell_ok = [&](int x, int y) {
        return x >= 0 && x < nc && y >= 0 && y < nr && lat.vertex_valid({x, y, Heading::E});
    };
    if (!cell_ok(goal_cx, goal_cy)) return dist;
    std::deque<std::pair<int, int>> q;
    dist[size_t(goal_cy) * nc + goal_cx] = 0;
    q.emplace_back(goal_cx, goal_cy);
    while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop_front();
        const int d = dist[size_t(y) * nc + x];
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = x + dx, ny = y + dy;
                if (!cell_ok(nx, ny)) continue;
                int& slot = dist[size_t(ny) * nc + nx];
                if (slot > d + 1) {
                    slot = d + 1;
                    q.emplace_back(nx, ny);
                }
            }
        }
    }
    return dist;
}

struct LLNode {
    LatticeState s;
    int t = 0;
    int conflicts = 0;
    int f = 0;
    PrimitiveKind arrived_by = PrimitiveKind::Wait;
    int parent = -1;
    bool expanded = false;
};

inline int64_t st_key(int state_index, int t) { return (int64_t(state_index) << 24) | t; }

struct LowLevelContext {
    const LatticeMap& lat;
    const std::vector<int>& hfield;
    std::unordered_set<int64_t> forbid_vertex;  // (state idx, t)
    std::unordered_set<int64_t> forbid_edge;    // (state idx * 9 + kind, t)
    const std::vector<OtherPath>& others;
    int h_align;
    int min_rest_time = 0;

    int h(const LatticeState& s) const { return hfield[size_t(s.cy) * lat.ncols() + s.cx]; }

    bool vertex_forbidden(const LatticeState& s, int t) const {
        return forbid_vertex.count(st_key(lat.state_index(s), t)) != 0;
    }
    bool edge_forbidden(const LatticeState& s, PrimitiveKind k, int t) const {
        return forbid_edge.count(st_key(lat.state_index(s) * kPrimitiveCount + int(k), t)) != 0;
    }

    // Conflicts added by one step (s -> to) over t -> t+1: the vertex at the
    // arrival instant plus interior trace proximity.
    int step_conflicts(const LatticeState& s, PrimitiveKind kind, const LatticeState& to,
                       int t) const {
        int count = 0;
        const auto& cfg = lat.config();
        const Vec2 p_to = cfg.state_position(to);
        for (const auto& o : others) {
            const LatticeState& os = padded(*o.path, t);
            const LatticeState& os_to = padded(*o.path, t + 1);
            if ((cfg.state_position(os_to) - p_to).norm() < o.separation) ++count;
            if (edge_step_conflict(s, kind, os, step_kind(*o.path, t), o.separation, cfg,
                                   lat.grid().resolution(), h_align))
                ++count;
        }
        return count;
    }

    int start_conflicts(const LatticeState& s) const {
        int count = 0;
        const auto& cfg = lat.config();
        const Vec2 p = cfg.state_position(s);
        for (const auto& o : others)
            if ((cfg.state_position(padded(*o.path, 0)) - p).norm() < o.separation) ++count;
        return count;
    }
};

}  // namespace

LowLevelResult low_level_search(const LatticeMap& lat, const LatticeState& start,
                                const LatticeState& goal, const RobotConstraintSet& constraints,
                                const std::vector<OtherPath>& others, double w, int h_align) {
    LowLevelResult res;
    if (!lat.vertex_valid(start) || !lat.vertex_valid(goal)) return res;

    const std::vector<int> hfield = goal_distance_field(lat, goal.cx, goal.cy);
    LowLevelContext ctx{lat, hfield, {}, {}, others, h_align};
    const int goal_idx = lat.state_index(goal);
    for (const auto& vc : constraints.vertices) {
        ctx.forbid_vertex.insert(st_key(lat.state_index(vc.state), vc.t));
        if (lat.state_index(vc.state) == goal_idx)
            ctx.min_rest_time = std::max(ctx.min_rest_time, vc.t + 1);
    }
    for (const auto& ec : constraints.edges) {
        ctx.forbid_edge.insert(
            st_key(lat.state_index(ec.from) * kPrimitiveCount + int(ec.kind), ec.t));
        if (lat.state_index(ec.from) == goal_idx && ec.kind == PrimitiveKind::Wait)
            ctx.min_rest_time = std::max(ctx.min_rest_time, ec.t + 1);
    }
    if (ctx.h(start) >= kInf) return res;
    if (ctx.vertex_forbidden(start, 0)) return res;

    const int horizon = 4 * lat.ncols() * lat.nrows();

    using OpenKey = std::tuple<int, int, int, int, int>;   // f, conflicts, t, prim, state
    using FocalKey = std::tuple<int, int, int, int, int>;  // conflicts, t, prim, state, f

    std::vector<LLNode> nodes;
    std::set<std::pair<OpenKey, int>> open;
    std::set<std::pair<FocalKey, int>> focal;
    std::unordered_map<int64_t, int> best;  // (state, t) -> node with fewest conflicts

    auto open_key = [&](const LLNode& n) {
        return OpenKey{n.f, n.conflicts, n.t, int(n.arrived_by), lat.state_index(n.s)};
    };
    auto focal_key = [&](const LLNode& n) {
        return FocalKey{n.conflicts, n.t, int(n.arrived_by), lat.state_index(n.s), n.f};
    };

    double bound = 0;
    auto push = [&](const LLNode& n) {
        const int64_t key = st_key(lat.state_index(n.s), n.t);
        auto it = best.find(key);
        if (it != best.end()) {
            LLNode& cur = nodes[it->second];
            // conflict-count dominance; expanded duplicates stay closed
            if (cur.expanded || cur.conflicts <= n.conflicts) return;
            open.erase({open_key(cur), it->second});
            focal.erase({focal_key(cur), it->second});
            cur = n;
            open.insert({open_key(cur), it->second});
            if (cur.f <= bound) focal.insert({focal_key(cur), it->second});
            return;
        }
        nodes.push_back(n);
        const int id = int(nodes.size()) - 1;
        best.emplace(key, id);
        open.insert({open_key(n), id});
        if (n.f <= bound) focal.insert({focal_key(n), id});
    };

    LLNode root{start, 0, ctx.start_conflicts(start), ctx.h(start), PrimitiveKind::Wait, -1};
    bound = w * root.f;
    double last_bound = bound;
    push(root);

    while (!open.empty()) {
        const int f_min = std::get<0>(open.begin()->first);
        bound = w * f_min;
        if (bound > last_bound) {
            for (auto it = open.begin(); it != open.end(); ++it) {
                const int f = std::get<0>(it->first);
                if (double(f) > bound) break;
                if (double(f) > last_bound) focal.insert({focal_key(nodes[it->second]), it->second});
            }
            last_bound = bound;
        }
        const int id = focal.begin()->second;
        LLNode& n = nodes[id];
        focal.erase(focal.begin());
        open.erase({open_key(n), id});
        n.expanded = true;
        ++res.expanded;

        if (n.s == goal && n.t >= ctx.min_rest_time) {
            res.found = true;
            res.cost = n.t;
            res.f_min = f_min;
            for (int cur = id; cur >= 0; cur = nodes[cur].parent) res.path.push_back(nodes[cur].s);
            std::reverse(res.path.begin(), res.path.end());
            return res;
        }
        if (n.t >= horizon) continue;

        const LLNode snapshot = n;  // nodes may reallocate while pushing children
        for (int k = 0; k < kPrimitiveCount; ++k) {
            const PrimitiveKind kind = PrimitiveKind(k);
            if (!lat.edge_allowed(snapshot.s, kind)) continue;
            if (ctx.edge_forbidden(snapshot.s, kind, snapshot.t)) continue;
            const LatticeState to = apply_primitive(snapshot.s, kind);
            if (ctx.vertex_forbidden(to, snapshot.t + 1)) continue;
            const int h = ctx.h(to);
            if (h >= kInf) continue;
            LLNode child;
            child.s = to;
            child.t = snapshot.t + 1;
            child.conflicts =
                snapshot.conflicts + ctx.step_conflicts(snapshot.s, kind, to, snapshot.t);
            child.f = child.t + h;
            child.arrived_by = kind;
            child.parent = id;
            push(child);
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// High level: constraint tree with a focal queue
// ---------------------------------------------------------------------------

namespace {

struct CtConstraint {
    int robot = -1;
    bool is_edge = false;
    VertexConstraint vertex;
    EdgeConstraint edge;
};

struct CtNode {
    int parent = -1;
    CtConstraint constraint;             // root has robot == -1
    std::vector<LatticeState> new_path;  // path of constraint.robot under the new set
    int new_cost = 0;
    int new_fmin = 0;
    int cost = 0;  // sum of costs
    int lb = 0;    // sum of low-level f_min values
    int nconf = 0;
    bool has_conflict = false;
    Conflict first;
};

}  // namespace

const char* mapf_status_name(MapfStatus s) {
    switch (s) {
        case MapfStatus::Success: return "success";
        case MapfStatus::Timeout: return "timeout";
        case MapfStatus::Infeasible: return "infeasible";
    }
    return "?";
}

EcbsResult ecbs_plan(const OccupancyGrid& grid, const std::vector<RobotModel>& robots,
                     const std::vector<Task>& tasks, const LatticeConfig& cfg,
                     const EcbsOptions& opt) {
    EcbsResult result;
    const int n = int(tasks.size());
    if (n == 0) {
        result.status = MapfStatus::Success;
        return result;
    }
    if (robots.size() != tasks.size())
        throw std::invalid_argument("ecbs_plan: robots and tasks must pair up");
    const std::string gate = check_lattice_feasibility(cfg, robots);
    if (!gate.empty()) throw std::invalid_argument("ecbs_plan: " + gate);

    double max_radius = 0;
    for (const auto& r : robots) max_radius = std::max(max_radius, r.radius);
    LatticeMap lat(grid, cfg, max_radius);

    std::vector<LatticeState> starts(n), goals(n);
    for (int i = 0; i < n; ++i) {
        if (!lat.snap(tasks[i].start, starts[i], 1e-6) || !lat.vertex_valid(starts[i])) {
            result.message = "start of robot " + std::to_string(tasks[i].robot_id) +
                             " is not a valid lattice state";
            return result;
        }
        if (!lat.snap(tasks[i].goal, goals[i], 1e-6) || !lat.vertex_valid(goals[i])) {
            result.message = "goal of robot " + std::to_string(tasks[i].robot_id) +
                             " is not a valid lattice state";
            return result;
        }
    }

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    // Root: plan robots in index order, each counting conflicts against the
    // already-planned prefix.
    std::vector<std::vector<LatticeState>> root_paths(n);
    std::vector<int> root_costs(n, 0), root_fmins(n, 0);
    for (int i = 0; i < n; ++i) {
        std::vector<OtherPath> others;
        for (int j = 0; j < i; ++j)
            others.push_back({&root_paths[j], robots[i].radius + robots[j].radius});
        const LowLevelResult ll =
            low_level_search(lat, starts[i], goals[i], {}, others, opt.w, opt.h_align);
        if (!ll.found) {
            result.status = MapfStatus::Infeasible;
            result.message =
                "robot " + std::to_string(tasks[i].robot_id) + " has no path to its goal";
            return result;
        }
        root_paths[i] = ll.path;
        root_costs[i] = ll.cost;
        root_fmins[i] = ll.f_min;
    }

    // deque: growth must not invalidate references, paths_of hands out
    // pointers into stored nodes
    std::deque<CtNode> nodes;

    // Per-robot paths of a node: walk the replacement chain, fall back to root.
    auto paths_of = [&](int id) {
        std::vector<const std::vector<LatticeState>*> paths(n, nullptr);
        std::vector<int> costs(n, 0), fmins(n, 0);
        for (int cur = id; cur > 0; cur = nodes[cur].parent) {
            const CtNode& nd = nodes[cur];
            const int r = nd.constraint.robot;
            if (r >= 0 && paths[r] == nullptr) {
                paths[r] = &nd.new_path;
                costs[r] = nd.new_cost;
                fmins[r] = nd.new_fmin;
            }
        }
        for (int i = 0; i < n; ++i) {
            if (paths[i] == nullptr) {
                paths[i] = &root_paths[i];
                costs[i] = root_costs[i];
                fmins[i] = root_fmins[i];
            }
        }
        return std::tuple{paths, costs, fmins};
    };

    auto padded_plan = [&](const std::vector<const std::vector<LatticeState>*>& paths) {
        DiscretePlan plan;
        int M = 0;
        for (const auto* p : paths) M = std::max(M, int(p->size()) - 1);
        plan.M = M;
        plan.paths.resize(n);
        for (int i = 0; i < n; ++i) {
            plan.paths[i] = *paths[i];
            plan.paths[i].resize(M + 1, paths[i]->back());
        }
        return plan;
    };

    auto evaluate = [&](CtNode& nd, const std::vector<const std::vector<LatticeState>*>& paths,
                        const std::vector<int>& costs, const std::vector<int>& fmins) {
        nd.cost = 0;
        nd.lb = 0;
        for (int i = 0; i < n; ++i) {
            nd.cost += costs[i];
            nd.lb += fmins[i];
        }
        const DiscretePlan probe = padded_plan(paths);
        const auto conflicts =
            detect_conflicts(probe, robots, cfg, grid.resolution(), opt.h_align);
        nd.nconf = int(conflicts.size());
        nd.has_conflict = !conflicts.empty();
        if (nd.has_conflict) nd.first = conflicts.front();
    };

    {
        CtNode root;
        auto [paths, costs, fmins] = std::tuple{std::vector<const std::vector<LatticeState>*>(n),
                                                root_costs, root_fmins};
        for (int i = 0; i < n; ++i) paths[i] = &root_paths[i];
        evaluate(root, paths, costs, fmins);
        nodes.push_back(std::move(root));
    }
    const int root_lb = nodes[0].lb;

    // OPEN ordered by (lb, cost, id); cost >= lb holds per node, so the focal
    // candidates (cost <= w * min lb) always live in a prefix of this order.
    std::set<std::tuple<int, int, int>> open;
    open.insert({nodes[0].lb, nodes[0].cost, 0});

    auto collect_constraints = [&](int id, int robot) {
        RobotConstraintSet set;
        for (int cur = id; cur > 0; cur = nodes[cur].parent) {
            const CtConstraint& c = nodes[cur].constraint;
            if (c.robot != robot) continue;
            if (c.is_edge)
                set.edges.push_back(c.edge);
            else
                set.vertices.push_back(c.vertex);
        }
        return set;
    };

    while (!open.empty()) {
        if (elapsed() > opt.timeout_s) {
            result.status = MapfStatus::Timeout;
            result.message = "ECBS timed out after " + std::to_string(opt.timeout_s) + " s";
            return result;
        }

        // focal selection: min (nconf, cost, id) among cost <= w * lb_min
        const int lb_min = std::get<0>(*open.begin());
        const double bound = opt.w * lb_min;
        auto chosen = open.end();
        std::tuple<int, int, int> chosen_key{kInf, kInf, kInf};
        for (auto it = open.begin(); it != open.end(); ++it) {
            const auto [lb, cost, id] = *it;
            if (double(lb) > bound) break;
            if (double(cost) > bound) continue;
            const std::tuple<int, int, int> key{nodes[id].nconf, cost, id};
            if (key < chosen_key) {
                chosen_key = key;
                chosen = it;
            }
        }
        if (chosen == open.end()) chosen = open.begin();  // unreachable with w >= 1
        const int id = std::get<2>(*chosen);
        open.erase(chosen);
        ++result.ct_expanded;
        if (result.ct_expanded > opt.max_ct_expansions) {
            result.status = MapfStatus::Timeout;
            result.message = "ECBS expansion cap reached";
            return result;
        }

        auto [paths, costs, fmins] = paths_of(id);

        if (!nodes[id].has_conflict) {
            DiscretePlan plan = padded_plan(paths);
            plan.costs = costs;
            plan.sum_of_costs = nodes[id].cost;
            plan.lower_bound = root_lb;
            result.status = MapfStatus::Success;
            result.plan = std::move(plan);
            return result;
        }

        const Conflict c = nodes[id].first;
        for (const int robot : {c.i, c.j}) {
            CtNode child;
            child.parent = id;
            child.constraint.robot = robot;
            const auto& path = *paths[robot];
            if (c.is_edge) {
                child.constraint.is_edge = true;
                child.constraint.edge = {padded(path, c.t), step_kind(path, c.t), c.t};
            } else {
                child.constraint.is_edge = false;
                child.constraint.vertex = {padded(path, c.t), c.t};
            }
            nodes.push_back(std::move(child));
            const int child_id = int(nodes.size()) - 1;

            const RobotConstraintSet set = collect_constraints(child_id, robot);
            std::vector<OtherPath> others;
            for (int j = 0; j < n; ++j)
                if (j != robot)
                    others.push_back({paths[j], robots[robot].radius + robots[j].radius});
            const LowLevelResult ll =
                low_level_search(lat, starts[robot], goals[robot], set, others, opt.w,
                                 opt.h_align);
            if (!ll.found) {
                nodes.pop_back();
                continue;
            }
            CtNode& nd = nodes[child_id];
            nd.new_path = ll.path;
            nd.new_cost = ll.cost;
            nd.new_fmin = ll.f_min;

            auto child_paths = paths;
            auto child_costs = costs;
            auto child_fmins = fmins;
            child_paths[robot] = &nd.new_path;
            child_costs[robot] = ll.cost;
            child_fmins[robot] = ll.f_min;
            evaluate(nd, child_paths, child_costs, child_fmins);
            open.insert({nd.lb, nd.cost, child_id});
            ++result.ct_generated;
        }
    }

    result.status = MapfStatus::Infeasible;
    result.message = "constraint tree exhausted without a conflict-free solution";
    return result;
}

}  // namespace mrtp
