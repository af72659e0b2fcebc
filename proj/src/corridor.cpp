#include "mrtp/corridor.hpp"

#include <cmath>
#include <sstream>

namespace mrtp {

const Rect& SafeCorridor::rect(int k) const {
    if (k < 1 || k > H()) throw std::out_of_range("SafeCorridor::rect: k out of range");
    return rects[k - 1];
}

std::string check_subdivision_bound(double D, int h, const std::vector<RobotModel>& robots) {
    if (h < 1) return "subdivision count h must be >= 1";
    double min_radius = std::numeric_limits<double>::max();
    for (const auto& r : robots) min_radius = std::min(min_radius, r.radius);
    const double spacing = std::sqrt(2.0) * D / h;
    if (!(spacing < 2.0 * min_radius)) {
        std::ostringstream msg;
        msg << "subdivision too coarse for corridor continuity: requires "
            << "sqrt(2)*D/h < 2*min_i R_i but " << spacing << " >= " << 2.0 * min_radius
            << " (D=" << D << ", h=" << h << ", min R=" << min_radius << "); increase h";
        return msg.str();
    }
    return {};
}

SampledPath subdivide_path(const std::vector<LatticeState>& path, int h,
                           const LatticeConfig& cfg,
                           const std::vector<RobotModel>& robots) {
    if (path.empty()) throw std::invalid_argument("subdivide_path: empty path");
    if (std::string msg = check_subdivision_bound(cfg.D, h, robots); !msg.empty())
        throw std::invalid_argument(msg);

    SampledPath sp;
    sp.h = h;
    sp.delta_t = cfg.delta_T / h;
    sp.waypoints.reserve(1 + h * (path.size() - 1));
    sp.inputs.reserve(h * (path.size() - 1));

    Pose start = cfg.state_pose(path.front());
    sp.waypoints.push_back(start);
    double theta_acc = start.theta;  // unwrapped running heading
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        PrimitiveKind kind;
        if (!primitive_between(path[i], path[i + 1], kind))
            throw std::invalid_argument("subdivide_path: non-primitive step at index " +
                                        std::to_string(i));
        const MotionPrimitive m = make_primitive(kind, cfg);
        for (int j = 1; j <= h; ++j) {
            Pose p = trace_pose(path[i], m, double(j) / h, cfg);
            // trace theta restarts from the state's canonical angle each
            // primitive; keep the accumulated unwrapped value instead
            p.theta = theta_acc + m.omega * m.duration * (double(j) / h);
            sp.waypoints.push_back(p);
            sp.inputs.emplace_back(m.v, m.omega);
        }
        theta_acc += m.omega * m.duration;
    }
    return sp;
}

SafeCorridor build_corridor(const OccupancyGrid& grid, const SampledPath& sp, double radius,
                            double step) {
    if (step <= 0) throw std::invalid_argument("build_corridor: step must be positive");
    SafeCorridor corridor;
    corridor.rects.reserve(sp.H());
    const double max_extent =
        std::hypot(grid.width_m(), grid.height_m());  // termination guard

    for (int k = 1; k <= sp.H(); ++k) {
        const Vec2 p = sp.waypoints[k].position();
        if (k > 1 && corridor.rects.back().contains(p)) {
            corridor.rects.push_back(corridor.rects.back());
            continue;
        }
        if (!disc_free(grid, p, radius)) {
            std::ostringstream msg;
            msg << "corridor waypoint " << k << " at (" << p.x << ", " << p.y
                << ") is not collision-free for radius " << radius;
            throw std::runtime_error(msg.str());
        }
        Rect rect = Rect::point(p);
        bool dir_active[4] = {true, true, true, true};  // +x, -x, +y, -y
        int active = 4;
        while (active > 0) {
            for (int d = 0; d < 4; ++d) {
                if (!dir_active[d]) continue;
                Rect grown = rect;
                switch (d) {
                    case 0: grown.xmax += step; break;
                    case 1: grown.xmin -= step; break;
                    case 2: grown.ymax += step; break;
                    case 3: grown.ymin -= step; break;
                }
                if (grown.width() > max_extent || grown.height() > max_extent ||
                    !rect_free(grid, grown, radius)) {
                    dir_active[d] = false;
                    --active;
                } else {
                    rect = grown;
                }
            }
        }
        corridor.rects.push_back(rect);
    }
    return corridor;
}

bool corridor_contains(const SafeCorridor& c, int k, const Vec2& p) {
    return c.rect(k).contains(p);
}

}  // namespace mrtp
