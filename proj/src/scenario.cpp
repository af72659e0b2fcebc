#include "mrtp/scenario.hpp"

#include <cmath>
#include <sstream>

namespace mrtp {

std::string validate_scenario(const Scenario& s) {
    const LatticeConfig cfg = s.params.lattice(s.map.origin());
    if (std::string msg = check_lattice_feasibility(cfg, s.robots); !msg.empty()) return msg;
    if (std::string msg = check_subdivision_bound(s.params.D, s.params.h, s.robots);
        !msg.empty())
        return msg;
    if (std::string msg = validate_tasks(s.map, s.robots, s.tasks); !msg.empty()) return msg;

    double max_radius = 0;
    for (const auto& r : s.robots) max_radius = std::max(max_radius, r.radius);
    LatticeMap lat(s.map, cfg, max_radius);
    for (const auto& t : s.tasks) {
        LatticeState st;
        if (!lat.snap(t.start, st, 1e-6))
            return "start pose of robot " + std::to_string(t.robot_id) +
                   " is not aligned to the lattice";
        if (!lat.snap(t.goal, st, 1e-6))
            return "goal pose of robot " + std::to_string(t.robot_id) +
                   " is not aligned to the lattice";
    }
    return {};
}

uint64_t rng_below(std::mt19937_64& rng, uint64_t n) {
    if (n == 0) throw std::invalid_argument("rng_below: n must be positive");
    const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                           std::numeric_limits<uint64_t>::max() % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

namespace {

constexpr double kWarehouseWidth = 10.0;
constexpr double kWarehouseHeight = 12.0;

struct ShelfSpec {
    Rect rect;
    int pickup_below_cx, pickup_below_cy;
    int pickup_above_cx, pickup_above_cy;
};

std::vector<ShelfSpec> warehouse_shelves() {
    std::vector<ShelfSpec> shelves;
    for (const double cx : {2.5, 7.5}) {
        for (const double cy : {3.0, 6.0, 9.0}) {
            ShelfSpec s;
            s.rect = {cx - 1.5, cy - 0.3, cx + 1.5, cy + 0.3};
            s.pickup_below_cx = int(cx);  // cell whose center is (cx, cy - 0.5)
            s.pickup_below_cy = int(cy) - 1;
            s.pickup_above_cx = int(cx);
            s.pickup_above_cy = int(cy);
            shelves.push_back(s);
        }
    }
    return shelves;
}

std::vector<std::pair<int, int>> warehouse_slots() {
    std::vector<std::pair<int, int>> slots;
    const int nx = int(kWarehouseWidth), ny = int(kWarehouseHeight);
    for (int cx = 0; cx < nx; ++cx)
        for (int cy = 0; cy < ny; ++cy)
            if (cx == 0 || cx == nx - 1 || cy == 0 || cy == ny - 1) slots.emplace_back(cx, cy);
    for (const auto& s : warehouse_shelves()) {
        slots.emplace_back(s.pickup_below_cx, s.pickup_below_cy);
        slots.emplace_back(s.pickup_above_cx, s.pickup_above_cy);
    }
    return slots;
}

}  // namespace

int warehouse_slot_count() { return int(warehouse_slots().size()); }

Scenario gen_warehouse(uint64_t seed, int n_robots, ScenarioParams params) {
    const auto slots = warehouse_slots();
    if (n_robots < 1)
        throw std::invalid_argument("gen_warehouse: need at least one robot");
    if (n_robots > int(slots.size()))
        throw std::invalid_argument("gen_warehouse: " + std::to_string(n_robots) +
                                    " robots exceed the " + std::to_string(slots.size()) +
                                    " distinct start/goal slots");

    Scenario s;
    params.seed = seed;
    s.params = params;

    const double res = params.resolution;
    const int ncols = int(std::lround(kWarehouseWidth / res));
    const int nrows = int(std::lround(kWarehouseHeight / res));
    OccupancyGrid grid(ncols, nrows, res, {0.0, 0.0});
    for (const auto& shelf : warehouse_shelves()) {
        const int ix0 = int(std::floor(shelf.rect.xmin / res + 1e-9));
        const int ix1 = int(std::ceil(shelf.rect.xmax / res - 1e-9)) - 1;
        const int iy0 = int(std::floor(shelf.rect.ymin / res + 1e-9));
        const int iy1 = int(std::ceil(shelf.rect.ymax / res - 1e-9)) - 1;
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix) grid.set_occupied(ix, iy, true);
    }
    s.map = std::move(grid);

    std::mt19937_64 rng(seed);
    auto shuffled = [&] {
        auto v = slots;
        for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_below(rng, i)]);
        return v;
    };
    const auto start_slots = shuffled();
    std::vector<std::pair<int, int>> goal_slots;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        goal_slots = shuffled();
        bool ok = true;
        for (int i = 0; i < n_robots; ++i)
            if (goal_slots[i] == start_slots[i]) ok = false;
        if (ok) break;
    }

    const LatticeConfig cfg = params.lattice(s.map.origin());
    for (int i = 0; i < n_robots; ++i) {
        s.robots.push_back({i, 0.15, 1.0, 1.0});
        const Heading hs = Heading(rng_below(rng, 4));
        const Heading hg = Heading(rng_below(rng, 4));
        Task t;
        t.robot_id = i;
        t.start = cfg.state_pose({start_slots[i].first, start_slots[i].second, hs});
        t.goal = cfg.state_pose({goal_slots[i].first, goal_slots[i].second, hg});
        s.tasks.push_back(t);
    }
    return s;
}

}  // namespace mrtp
