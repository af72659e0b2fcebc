#pragma once

#include <vector>

#include "mrtp/lattice.hpp"
#include "mrtp/mapf.hpp"

namespace mrtp {

// A discrete path resampled at h points per primitive. Waypoint indices run
// 0..H with H = h * (primitive count); headings are unwrapped (continuous
// accumulation, no +-pi jumps). inputs[j] is the constant (v, omega) of the
// primitive that produces waypoint j+1.
struct SampledPath {
    std::vector<Pose> waypoints;             // H + 1 entries
    std::vector<std::pair<double, double>> inputs;  // H entries
    int h = 1;
    double delta_t = 0.0;  // delta_T / h

    int H() const { return int(waypoints.size()) - 1; }
};

// Overlapping axis-aligned free rectangles, one per waypoint 1..H.
struct SafeCorridor {
    std::vector<Rect> rects;  // rects[k-1] belongs to waypoint k

    int H() const { return int(rects.size()); }
    const Rect& rect(int k) const;  // 1-based, throws std::out_of_range
};

// Corridor-continuity bound: consecutive sampled waypoints must share safe
// space, which needs sqrt(2)*D/h < 2*min_i R_i. Empty string when h is fine,
// else a message naming the inequality.
std::string check_subdivision_bound(double D, int h, const std::vector<RobotModel>& robots);

// Splits every primitive of a lattice path into h equal time parts.
// Rejects configurations violating the subdivision bound.
SampledPath subdivide_path(const std::vector<LatticeState>& path, int h,
                           const LatticeConfig& cfg,
                           const std::vector<RobotModel>& robots);

// Axis-search corridor construction: reuse the previous rectangle when the
// waypoint already lies inside it, otherwise grow a point rectangle by
// `step` per direction until every direction hits an obstacle or the map
// boundary. Throws if a waypoint is not disc_free.
SafeCorridor build_corridor(const OccupancyGrid& grid, const SampledPath& sp, double radius,
                            double step);

// Closed-rectangle membership for waypoint k (1-based); this is the exact
// predicate the optimizer enforces per timestep.
bool corridor_contains(const SafeCorridor& c, int k, const Vec2& p);

}  // namespace mrtp
