#include "mrtp/grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mrtp {

using nlohmann::json;

OccupancyGrid::OccupancyGrid(int ncols, int nrows, double resolution, Vec2 origin,
                             std::vector<uint8_t> cells)
    : ncols_(ncols), nrows_(nrows), resolution_(resolution), origin_(origin),
      cells_(std::move(cells)) {
    if (ncols_ <= 0 || nrows_ <= 0)
        throw std::invalid_argument("OccupancyGrid: cell counts must be positive");
    if (resolution_ <= 0.0)
        throw std::invalid_argument("OccupancyGrid: resolution must be positive");
    if (cells_.empty())
        cells_.assign(size_t(ncols_) * nrows_, 0);
    if (cells_.size() != size_t(ncols_) * nrows_)
        throw std::invalid_argument("OccupancyGrid: cell array size mismatch");
}

void OccupancyGrid::set_occupied(int ix, int iy, bool value) {
    if (!in_bounds(ix, iy)) throw std::out_of_range("OccupancyGrid::set_occupied");
    cells_[size_t(iy) * ncols_ + ix] = value ? 1 : 0;
}

std::vector<std::pair<int, int>> OccupancyGrid::occupied_cells() const {
    std::vector<std::pair<int, int>> out;
    for (int iy = 0; iy < nrows_; ++iy)
        for (int ix = 0; ix < ncols_; ++ix)
            if (cells_[size_t(iy) * ncols_ + ix]) out.emplace_back(ix, iy);
    return out;
}

bool disc_free(const OccupancyGrid& grid, const Vec2& center, double radius) {
    if (radius < 0.0) throw std::invalid_argument("disc_free: radius must be >= 0");
    const double res = grid.resolution();
    // The disc itself must stay inside the map; the boundary is an obstacle.
    if (center.x - radius < grid.origin().x || center.x + radius > grid.origin().x + grid.width_m() ||
        center.y - radius < grid.origin().y || center.y + radius > grid.origin().y + grid.height_m())
        return false;

    const double reach = radius + 0.5 * std::sqrt(2.0) * res;
    const int ix0 = grid.cell_x(center.x - reach);
    const int ix1 = grid.cell_x(center.x + reach);
    const int iy0 = grid.cell_y(center.y - reach);
    const int iy1 = grid.cell_y(center.y + reach);
    const double reach2 = reach * reach;
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            const Vec2 c = grid.cell_center(ix, iy);
            if ((c - center).squared_norm() <= reach2 && grid.occupied(ix, iy)) return false;
        }
    }
    return true;
}

bool rect_free(const OccupancyGrid& grid, const Rect& rect, double radius) {
    if (rect.xmin > rect.xmax || rect.ymin > rect.ymax)
        throw std::invalid_argument("rect_free: degenerate rectangle with min > max");
    // Boundary containment of the dilated rectangle.
    if (rect.xmin - radius < grid.origin().x ||
        rect.xmax + radius > grid.origin().x + grid.width_m() ||
        rect.ymin - radius < grid.origin().y ||
        rect.ymax + radius > grid.origin().y + grid.height_m())
        return false;

    const double res = grid.resolution();
    const double reach = radius + 0.5 * std::sqrt(2.0) * res;
    const int ix0 = grid.cell_x(rect.xmin - reach);
    const int ix1 = grid.cell_x(rect.xmax + reach);
    const int iy0 = grid.cell_y(rect.ymin - reach);
    const int iy1 = grid.cell_y(rect.ymax + reach);
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            const Vec2 c = grid.cell_center(ix, iy);
            if (rect.distance_to(c) <= reach && grid.occupied(ix, iy)) return false;
        }
    }
    return true;
}

MapParseError::MapParseError(const std::string& msg, int line_, int column_)
    : std::runtime_error("map parse error (line " + std::to_string(line_) +
                         (column_ >= 0 ? ", column " + std::to_string(column_) : std::string()) +
                         "): " + msg),
      line(line_), column(column_) {}

namespace {

OccupancyGrid grid_from_cells_json(const json& j) {
    if (!j.contains("resolution") || !j.contains("ncols") || !j.contains("nrows"))
        throw MapParseError("cell-list map needs resolution, ncols, nrows", 1);
    const double res = j.at("resolution").get<double>();
    const int ncols = j.at("ncols").get<int>();
    const int nrows = j.at("nrows").get<int>();
    Vec2 origin{0, 0};
    if (j.contains("origin")) {
        origin.x = j.at("origin").at(0).get<double>();
        origin.y = j.at("origin").at(1).get<double>();
    }
    if (res <= 0) throw MapParseError("resolution must be positive", 1);
    if (ncols <= 0 || nrows <= 0) throw MapParseError("ncols/nrows must be positive", 1);
    OccupancyGrid grid(ncols, nrows, res, origin);
    for (const auto& cell : j.value("occupied", json::array())) {
        const int ix = cell.at(0).get<int>();
        const int iy = cell.at(1).get<int>();
        if (!grid.in_bounds(ix, iy))
            throw MapParseError("occupied cell (" + std::to_string(ix) + "," +
                                    std::to_string(iy) + ") out of bounds", 1);
        grid.set_occupied(ix, iy, true);
    }
    return grid;
}

}  // namespace

OccupancyGrid load_map(std::istream& in) {
    std::string first_line;
    if (!std::getline(in, first_line)) throw MapParseError("empty map source", 1);

    json header;
    try {
        header = json::parse(first_line);
    } catch (const json::exception& e) {
        throw MapParseError(std::string("header is not valid JSON: ") + e.what(), 1);
    }
    if (!header.is_object() || !header.contains("type"))
        throw MapParseError("header must be a JSON object with a \"type\" field", 1);
    const std::string type = header.at("type").get<std::string>();

    if (type == "mrtp-map-cells") return grid_from_cells_json(header);
    if (type != "mrtp-map")
        throw MapParseError("unknown map type \"" + type + "\"", 1);

    if (!header.contains("resolution")) throw MapParseError("header missing resolution", 1);
    const double res = header.at("resolution").get<double>();
    if (res <= 0) throw MapParseError("resolution must be positive", 1);
    Vec2 origin{0, 0};
    if (header.contains("origin")) {
        origin.x = header.at("origin").at(0).get<double>();
        origin.y = header.at("origin").at(1).get<double>();
    }

    std::vector<std::string> rows;
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!rows.empty() && line.size() != rows.front().size())
            throw MapParseError("row has " + std::to_string(line.size()) + " cells, expected " +
                                    std::to_string(rows.front().size()), lineno);
        for (size_t c = 0; c < line.size(); ++c)
            if (line[c] != '.' && line[c] != '#')
                throw MapParseError(std::string("unknown cell symbol '") + line[c] + "'",
                                    lineno, int(c) + 1);
        rows.push_back(line);
    }
    if (rows.empty()) throw MapParseError("map has no rows", lineno);

    const int ncols = int(rows.front().size());
    const int nrows = int(rows.size());
    OccupancyGrid grid(ncols, nrows, res, origin);
    // First text row is the top of the map (largest y index).
    for (int r = 0; r < nrows; ++r)
        for (int c = 0; c < ncols; ++c)
            if (rows[r][c] == '#') grid.set_occupied(c, nrows - 1 - r, true);
    return grid;
}

OccupancyGrid load_map_string(const std::string& text) {
    std::istringstream in(text);
    return load_map(in);
}

OccupancyGrid load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    return load_map(in);
}

std::string save_map_ascii(const OccupancyGrid& grid) {
    json header = {{"type", "mrtp-map"},
                   {"resolution", grid.resolution()},
                   {"origin", {grid.origin().x, grid.origin().y}}};
    std::string out = header.dump();
    out += '\n';
    for (int iy = grid.nrows() - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < grid.ncols(); ++ix)
            out += grid.occupied(ix, iy) ? '#' : '.';
        out += '\n';
    }
    return out;
}

std::string save_map_cells(const OccupancyGrid& grid) {
    json j = {{"type", "mrtp-map-cells"},
              {"resolution", grid.resolution()},
              {"origin", {grid.origin().x, grid.origin().y}},
              {"ncols", grid.ncols()},
              {"nrows", grid.nrows()}};
    json occ = json::array();
    for (const auto& [ix, iy] : grid.occupied_cells()) occ.push_back({ix, iy});
    j["occupied"] = occ;
    return j.dump() + "\n";
}

std::string validate_tasks(const OccupancyGrid& grid, const std::vector<RobotModel>& robots,
                           const std::vector<Task>& tasks) {
    if (robots.size() != tasks.size())
        return "robot and task counts differ";
    auto radius_of = [&](int robot_id) -> double {
        for (const auto& r : robots)
            if (r.id == robot_id) return r.radius;
        return -1.0;
    };
    for (const auto& t : tasks) {
        const double R = radius_of(t.robot_id);
        if (R < 0) return "task references unknown robot id " + std::to_string(t.robot_id);
        if (!disc_free(grid, t.start.position(), R))
            return "start disc of robot " + std::to_string(t.robot_id) + " is not in free space";
        if (!disc_free(grid, t.goal.position(), R))
            return "goal disc of robot " + std::to_string(t.robot_id) + " is not in free space";
    }
    for (size_t a = 0; a < tasks.size(); ++a) {
        for (size_t b = a + 1; b < tasks.size(); ++b) {
            const double rr = radius_of(tasks[a].robot_id) + radius_of(tasks[b].robot_id);
            if (distance(tasks[a].start.position(), tasks[b].start.position()) < rr)
                return "start discs of robots " + std::to_string(tasks[a].robot_id) + " and " +
                       std::to_string(tasks[b].robot_id) + " overlap";
            if (distance(tasks[a].goal.position(), tasks[b].goal.position()) < rr)
                return "goal discs of robots " + std::to_string(tasks[a].robot_id) + " and " +
                       std::to_string(tasks[b].robot_id) + " overlap";
        }
    }
    return {};
}

}  // namespace mrtp
