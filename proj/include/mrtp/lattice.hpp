#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mrtp/grid.hpp"

namespace mrtp {

// Headings in counter-clockwise order so that turning left is +1 mod 4.
enum class Heading : uint8_t { E = 0, N = 1, W = 2, S = 3 };

inline double heading_angle(Heading h) { return double(int(h)) * M_PI_2; }
inline Heading turn_left(Heading h) { return Heading((int(h) + 1) % 4); }
inline Heading turn_right(Heading h) { return Heading((int(h) + 3) % 4); }
inline int heading_dx(Heading h) { return std::array<int, 4>{1, 0, -1, 0}[int(h)]; }
inline int heading_dy(Heading h) { return std::array<int, 4>{0, 1, 0, -1}[int(h)]; }
char heading_char(Heading h);
Heading heading_from_char(char c);

// One-timestep maneuvers. Arc L/R refer to the sign of the angular
// velocity (left = counter-clockwise). Enum order is the deterministic
// expansion and tie-breaking order everywhere.
enum class PrimitiveKind : uint8_t {
    Wait = 0,
    Forward,
    Backward,
    TurnLeft,
    TurnRight,
    ForwardArcLeft,
    ForwardArcRight,
    BackwardArcLeft,
    BackwardArcRight,
};
constexpr int kPrimitiveCount = 9;
const char* primitive_name(PrimitiveKind k);

struct LatticeState {
    int cx = 0;
    int cy = 0;
    Heading heading = Heading::E;

    bool operator==(const LatticeState& o) const = default;
    bool same_cell(const LatticeState& o) const { return cx == o.cx && cy == o.cy; }
};

struct LatticeConfig {
    double D = 1.0;        // lattice grid size (meters)
    double delta_T = 1.6;  // time per primitive (seconds)
    Vec2 origin{0.0, 0.0};
    bool backward_arcs = true;

    Vec2 state_position(const LatticeState& s) const {
        return {origin.x + (s.cx + 0.5) * D, origin.y + (s.cy + 0.5) * D};
    }
    Pose state_pose(const LatticeState& s) const {
        const Vec2 p = state_position(s);
        return {p.x, p.y, heading_angle(s.heading)};
    }
};

// Constant (v, omega) realization of one primitive under a config.
struct MotionPrimitive {
    PrimitiveKind kind = PrimitiveKind::Wait;
    double v = 0.0;
    double omega = 0.0;
    double duration = 0.0;
    double arc_length = 0.0;  // |v| * duration
};

MotionPrimitive make_primitive(PrimitiveKind kind, const LatticeConfig& cfg);

// One-step transition feasibility: every robot must manage the diagonal
// quarter-circle within one timestep. Empty string when the gate passes,
// otherwise an actionable description of the violated inequality.
std::string check_lattice_feasibility(const LatticeConfig& cfg,
                                      const std::vector<RobotModel>& robots);
bool feasibility_gate(const LatticeConfig& cfg, const std::vector<RobotModel>& robots);

// Pure integer successor. Validity against obstacles is a separate check.
LatticeState apply_primitive(const LatticeState& s, PrimitiveKind kind);

// Unique primitive mapping `from` to `to` in one step, if any.
// All 9 successors of a state are distinct, so the answer is unambiguous.
bool primitive_between(const LatticeState& from, const LatticeState& to, PrimitiveKind& kind);

// Pose on the constant-(v, omega) trace at fraction tau in [0, 1].
// tau=0 is the source pose; theta comes out unwrapped (theta0 + omega*t).
Pose trace_pose(const LatticeState& s, const MotionPrimitive& m, double tau,
                const LatticeConfig& cfg);

// True iff disc_free holds at every trace sample (arc-length stride at most
// half a fine-grid cell).
bool edge_valid(const OccupancyGrid& grid, const LatticeState& s, PrimitiveKind kind,
                double radius, const LatticeConfig& cfg);

// Sample count used for sweep and conflict checks of a primitive pair; a
// multiple of `h` so corridor waypoints land on checked samples.
int trace_sample_count(double arc_length, double resolution, int h);

// Shared lattice over one grid: vertex and edge validity for the team's
// largest collision disc, memoized. Read-only queries after construction
// are not thread-safe due to memoization; clone per thread instead.
class LatticeMap {
  public:
    LatticeMap(const OccupancyGrid& grid, const LatticeConfig& cfg, double radius);

    int ncols() const { return ncols_; }
    int nrows() const { return nrows_; }
    const LatticeConfig& config() const { return cfg_; }
    const OccupancyGrid& grid() const { return *grid_; }
    double radius() const { return radius_; }

    bool state_in_bounds(const LatticeState& s) const {
        return s.cx >= 0 && s.cx < ncols_ && s.cy >= 0 && s.cy < nrows_;
    }
    int state_index(const LatticeState& s) const {
        return (s.cy * ncols_ + s.cx) * 4 + int(s.heading);
    }
    bool vertex_valid(const LatticeState& s) const;
    bool edge_allowed(const LatticeState& s, PrimitiveKind kind) const;

    // Nearest lattice state for a pose; false if the pose is not aligned to
    // the lattice (cell center within tol, heading within tol of a multiple
    // of pi/2).
    bool snap(const Pose& p, LatticeState& out, double tol = 1e-6) const;

  private:
    const OccupancyGrid* grid_;
    LatticeConfig cfg_;
    double radius_;
    int ncols_;
    int nrows_;
    mutable std::vector<int8_t> vertex_cache_;
    mutable std::vector<int8_t> edge_cache_;
};

}  // namespace mrtp
