#include "mrtp/lattice.hpp"

#include <cmath>
#include <sstream>

namespace mrtp {

char heading_char(Heading h) { return std::array<char, 4>{'E', 'N', 'W', 'S'}[int(h)]; }

Heading heading_from_char(char c) {
    switch (c) {
        case 'E': return Heading::E;
        case 'N': return Heading::N;
        case 'W': return Heading::W;
        case 'S': return Heading::S;
    }
    throw std::invalid_argument(std::string("unknown heading '") + c + "'");
}

const char* primitive_name(PrimitiveKind k) {
    static const char* names[kPrimitiveCount] = {"WAIT",      "FWD",       "BACK",
                                                 "TURN_L",    "TURN_R",    "FWD_ARC_L",
                                                 "FWD_ARC_R", "BACK_ARC_L", "BACK_ARC_R"};
    return names[int(k)];
}

MotionPrimitive make_primitive(PrimitiveKind kind, const LatticeConfig& cfg) {
    const double T = cfg.delta_T;
    const double quarter = M_PI_2;
    MotionPrimitive m;
    m.kind = kind;
    m.duration = T;
    switch (kind) {
        case PrimitiveKind::Wait: break;
        case PrimitiveKind::Forward: m.v = cfg.D / T; break;
        case PrimitiveKind::Backward: m.v = -cfg.D / T; break;
        case PrimitiveKind::TurnLeft: m.omega = quarter / T; break;
        case PrimitiveKind::TurnRight: m.omega = -quarter / T; break;
        case PrimitiveKind::ForwardArcLeft:
            m.v = quarter * cfg.D / T;
            m.omega = quarter / T;
            break;
        case PrimitiveKind::ForwardArcRight:
            m.v = quarter * cfg.D / T;
            m.omega = -quarter / T;
            break;
        case PrimitiveKind::BackwardArcLeft:
            m.v = -quarter * cfg.D / T;
            m.omega = quarter / T;
            break;
        case PrimitiveKind::BackwardArcRight:
            m.v = -quarter * cfg.D / T;
            m.omega = -quarter / T;
            break;
    }
    m.arc_length = std::abs(m.v) * T;
    return m;
}

std::string check_lattice_feasibility(const LatticeConfig& cfg,
                                      const std::vector<RobotModel>& robots) {
    if (cfg.D <= 0 || cfg.delta_T <= 0)
        return "lattice config requires D > 0 and delta_T > 0";
    const double arc = M_PI_2 * cfg.D;
    for (const auto& r : robots) {
        std::ostringstream msg;
        if (r.v_max * cfg.delta_T < arc) {
            msg << "robot " << r.id << ": one-step arc is infeasible, needs "
                << "v_max*delta_T >= (pi/2)*D but " << r.v_max * cfg.delta_T << " < " << arc
                << " (v_max=" << r.v_max << ", delta_T=" << cfg.delta_T << ", D=" << cfg.D
                << "); raise delta_T or v_max, or shrink D";
            return msg.str();
        }
        if (r.omega_max * cfg.delta_T < M_PI_2) {
            msg << "robot " << r.id << ": one-step quarter turn is infeasible, needs "
                << "omega_max*delta_T >= pi/2 but " << r.omega_max * cfg.delta_T << " < "
                << M_PI_2 << " (omega_max=" << r.omega_max << ", delta_T=" << cfg.delta_T
                << "); raise delta_T or omega_max";
            return msg.str();
        }
    }
    return {};
}

bool feasibility_gate(const LatticeConfig& cfg, const std::vector<RobotModel>& robots) {
    return check_lattice_feasibility(cfg, robots).empty();
}

LatticeState apply_primitive(const LatticeState& s, PrimitiveKind kind) {
    LatticeState out = s;
    switch (kind) {
        case PrimitiveKind::Wait: break;
        case PrimitiveKind::Forward:
            out.cx += heading_dx(s.heading);
            out.cy += heading_dy(s.heading);
            break;
        case PrimitiveKind::Backward:
            out.cx -= heading_dx(s.heading);
            out.cy -= heading_dy(s.heading);
            break;
        case PrimitiveKind::TurnLeft: out.heading = turn_left(s.heading); break;
        case PrimitiveKind::TurnRight: out.heading = turn_right(s.heading); break;
        case PrimitiveKind::ForwardArcLeft:
        case PrimitiveKind::ForwardArcRight:
        case PrimitiveKind::BackwardArcLeft:
        case PrimitiveKind::BackwardArcRight: {
            const bool left = kind == PrimitiveKind::ForwardArcLeft ||
                              kind == PrimitiveKind::BackwardArcLeft;
            const bool fwd = kind == PrimitiveKind::ForwardArcLeft ||
                             kind == PrimitiveKind::ForwardArcRight;
            const Heading h2 = left ? turn_left(s.heading) : turn_right(s.heading);
            const int sgn = fwd ? 1 : -1;
            out.cx += sgn * (heading_dx(s.heading) + heading_dx(h2));
            out.cy += sgn * (heading_dy(s.heading) + heading_dy(h2));
            out.heading = h2;
            break;
        }
    }
    return out;
}

bool primitive_between(const LatticeState& from, const LatticeState& to, PrimitiveKind& kind) {
    for (int k = 0; k < kPrimitiveCount; ++k) {
        if (apply_primitive(from, PrimitiveKind(k)) == to) {
            kind = PrimitiveKind(k);
            return true;
        }
    }
    return false;
}

Pose trace_pose(const LatticeState& s, const MotionPrimitive& m, double tau,
                const LatticeConfig& cfg) {
    const Pose p0 = cfg.state_pose(s);
    const double t = tau * m.duration;
    if (m.omega == 0.0)
        return {p0.x + m.v * t * std::cos(p0.theta), p0.y + m.v * t * std::sin(p0.theta),
                p0.theta};
    const double th = p0.theta + m.omega * t;
    if (m.v == 0.0) return {p0.x, p0.y, th};
    const double r = m.v / m.omega;
    return {p0.x + r * (std::sin(th) - std::sin(p0.theta)),
            p0.y - r * (std::cos(th) - std::cos(p0.theta)), th};
}

int trace_sample_count(double arc_length, double resolution, int h) {
    int n = int(std::ceil(arc_length / (0.5 * resolution)));
    if (n < 1) n = 1;
    if (h > 1) n = ((n + h - 1) / h) * h;  // keep the j/h waypoints on the sample grid
    return n;
}

bool edge_valid(const OccupancyGrid& grid, const LatticeState& s, PrimitiveKind kind,
                double radius, const LatticeConfig& cfg) {
    const MotionPrimitive m = make_primitive(kind, cfg);
    const int n = trace_sample_count(m.arc_length, grid.resolution(), 1);
    for (int k = 0; k <= n; ++k) {
        const Pose p = trace_pose(s, m, double(k) / n, cfg);
        if (!disc_free(grid, p.position(), radius)) return false;
    }
    return true;
}

LatticeMap::LatticeMap(const OccupancyGrid& grid, const LatticeConfig& cfg, double radius)
    : grid_(&grid), cfg_(cfg), radius_(radius) {
    ncols_ = int(std::floor(grid.width_m() / cfg.D + 1e-9));
    nrows_ = int(std::floor(grid.height_m() / cfg.D + 1e-9));
    if (ncols_ <= 0 || nrows_ <= 0)
        throw std::invalid_argument("LatticeMap: grid smaller than one lattice cell");
    vertex_cache_.assign(size_t(ncols_) * nrows_, -1);
    edge_cache_.assign(size_t(ncols_) * nrows_ * 4 * kPrimitiveCount, -1);
}

bool LatticeMap::vertex_valid(const LatticeState& s) const {
    if (!state_in_bounds(s)) return false;
    int8_t& slot = vertex_cache_[size_t(s.cy) * ncols_ + s.cx];
    if (slot < 0) slot = disc_free(*grid_, cfg_.state_position(s), radius_) ? 1 : 0;
    return slot != 0;
}

bool LatticeMap::edge_allowed(const LatticeState& s, PrimitiveKind kind) const {
    if (!vertex_valid(s)) return false;
    if (!cfg_.backward_arcs && (kind == PrimitiveKind::BackwardArcLeft ||
                                 kind == PrimitiveKind::BackwardArcRight))
        return false;
    const LatticeState to = apply_primitive(s, kind);
    if (!state_in_bounds(to) || !vertex_valid(to)) return false;
    int8_t& slot = edge_cache_[size_t(state_index(s)) * kPrimitiveCount + int(kind)];
    if (slot < 0) slot = edge_valid(*grid_, s, kind, radius_, cfg_) ? 1 : 0;
    return slot != 0;
}

bool LatticeMap::snap(const Pose& p, LatticeState& out, double tol) const {
    const double fx = (p.x - cfg_.origin.x) / cfg_.D - 0.5;
    const double fy = (p.y - cfg_.origin.y) / cfg_.D - 0.5;
    const int cx = int(std::lround(fx));
    const int cy = int(std::lround(fy));
    if (std::abs(fx - cx) * cfg_.D > tol || std::abs(fy - cy) * cfg_.D > tol) return false;
    const double q = p.theta / M_PI_2;
    const int qi = int(std::lround(q));
    if (angle_dist(p.theta, qi * M_PI_2) > tol) return false;
    out = {cx, cy, Heading(((qi % 4) + 4) % 4)};
    return state_in_bounds(out);
}

}  // namespace mrtp
