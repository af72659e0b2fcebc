#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrtp/geometry.hpp"

namespace mrtp {

// 2-D occupancy grid over a bounded rectangular workspace. Immutable after
// load; all queries are const and thread-safe. Everything outside the map
// boundary counts as occupied.
class OccupancyGrid {
  public:
    OccupancyGrid() = default;
    OccupancyGrid(int ncols, int nrows, double resolution, Vec2 origin,
                  std::vector<uint8_t> cells = {});

    int ncols() const { return ncols_; }
    int nrows() const { return nrows_; }
    double resolution() const { return resolution_; }
    Vec2 origin() const { return origin_; }
    double width_m() const { return ncols_ * resolution_; }
    double height_m() const { return nrows_ * resolution_; }

    bool in_bounds(int ix, int iy) const {
        return ix >= 0 && ix < ncols_ && iy >= 0 && iy < nrows_;
    }
    bool occupied(int ix, int iy) const {
        return !in_bounds(ix, iy) || cells_[size_t(iy) * ncols_ + ix] != 0;
    }
    void set_occupied(int ix, int iy, bool value);

    Vec2 cell_center(int ix, int iy) const {
        return {origin_.x + (ix + 0.5) * resolution_, origin_.y + (iy + 0.5) * resolution_};
    }
    int cell_x(double x) const { return int(std::floor((x - origin_.x) / resolution_)); }
    int cell_y(double y) const { return int(std::floor((y - origin_.y) / resolution_)); }

    std::vector<std::pair<int, int>> occupied_cells() const;

    bool operator==(const OccupancyGrid& o) const = default;

  private:
    int ncols_ = 0;
    int nrows_ = 0;
    double resolution_ = 0.1;
    Vec2 origin_{0.0, 0.0};
    std::vector<uint8_t> cells_;
};

struct RobotModel {
    int id = 0;
    double radius = 0.15;
    double v_max = 1.0;
    double omega_max = 1.0;
};

struct Task {
    int robot_id = 0;
    Pose start;
    Pose goal;
};

// True iff the closed disc at `center` stays clear of obstacles and map
// boundary. Conservative: every cell whose center lies within
// radius + (sqrt(2)/2)*resolution of `center` must be free, so a cell
// touching the disc boundary counts as inside.
bool disc_free(const OccupancyGrid& grid, const Vec2& center, double radius);

// True iff the rectangle dilated by the robot disc avoids all obstacles and
// the map boundary; equivalent to disc_free holding at every point of rect.
bool rect_free(const OccupancyGrid& grid, const Rect& rect, double radius);

struct MapParseError : std::runtime_error {
    MapParseError(const std::string& msg, int line, int column = -1);
    int line;
    int column;
};

// Two on-disk forms, both round-trip exactly:
//  - ASCII: one JSON header line {"type":"mrtp-map", ...} followed by rows of
//    '.' (free) and '#' (occupied); the first text row is the top of the map.
//  - JSON: a single {"type":"mrtp-map-cells", ...} object listing occupied cells.
OccupancyGrid load_map(std::istream& in);
OccupancyGrid load_map_string(const std::string& text);
OccupancyGrid load_map_file(const std::string& path);
std::string save_map_ascii(const OccupancyGrid& grid);
std::string save_map_cells(const OccupancyGrid& grid);

// Task sanity per the problem statement: start/goal discs in free space,
// start discs pairwise disjoint, goal discs pairwise disjoint.
// Returns an empty string when valid, else a description of the violation.
std::string validate_tasks(const OccupancyGrid& grid, const std::vector<RobotModel>& robots,
                           const std::vector<Task>& tasks);

}  // namespace mrtp
