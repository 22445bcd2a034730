#include "locons/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "locons/errors.hpp"
#include "locons/expr.hpp"

namespace locons::cli {

using expr::format_double;
using nlohmann::json;

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << kTrajectoryHeader << '\n';
    for (const SimState& s : tr.states) {
        os << format_double(s.t) << ',' << format_double(s.q.x) << ',' << format_double(s.q.y) << ','
           << format_double(s.p.x) << ',' << format_double(s.p.y) << ',' << s.chart << ',' << format_double(s.V)
           << ',' << format_double(s.kinetic) << ',' << format_double(s.E_local) << ','
           << format_double(s.theta_acc.empty() ? 0.0 : s.theta_acc.front()) << ',' << format_double(s.p_theta)
           << '\n';
    }
}

void write_lift_csv(std::ostream& os, const std::vector<LiftState>& lift) {
    os << "t,u,v,sheet\n";
    for (const LiftState& s : lift)
        os << format_double(s.t) << ',' << format_double(s.u) << ',' << format_double(s.v) << ',' << sheet_of(s)
           << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError("CSV has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    std::size_t offset = 0;
    if (!std::getline(is, line)) throw ParseError(0, "CSV: missing header line");
    t.header = split_csv_line(line);
    offset += line.size() + 1;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            offset += line.size() + 1;
            continue;
        }
        auto cells = split_csv_line(line);
        if (cells.size() != t.header.size())
            throw ParseError(offset, "CSV line " + std::to_string(lineno) + ": expected " +
                                         std::to_string(t.header.size()) + " cells");
        std::vector<double> row;
        for (const std::string& c : cells) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || ptr != c.data() + c.size() || c.empty())
                throw ParseError(offset, "CSV line " + std::to_string(lineno) + ": bad number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
        offset += line.size() + 1;
    }
    return t;
}

json transitions_json(const Trajectory& tr) {
    json arr = json::array();
    for (const ChartTransition& c : tr.transitions)
        arr.push_back({{"t", c.t}, {"from", c.from}, {"to", c.to}, {"q", {c.q.x, c.q.y}}, {"dE", c.dE}});
    return {{"status", to_string(tr.status)}, {"message", tr.message}, {"transitions", arr}};
}

namespace {

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void write_svg(std::ostream& os, const Trajectory& tr, const std::vector<Vec2>& singular_points) {
    double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
    auto grow = [&](Vec2 p) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    };
    for (const SimState& s : tr.states) grow(s.q);
    for (Vec2 p : singular_points) grow(p);
    double span = std::max(x1 - x0, y1 - y0) * 1.1;
    double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    const double size = 600.0;
    auto sx = [&](double x) { return (x - cx) / span * size + 0.5 * size; };
    auto sy = [&](double y) { return 0.5 * size - (y - cy) / span * size; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" viewBox=\"0 0 600 600\">\n";
    os << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
    // axes through the origin when visible
    if (sx(0) >= 0 && sx(0) <= size)
        os << "<line x1=\"" << fixed(sx(0)) << "\" y1=\"0\" x2=\"" << fixed(sx(0))
           << "\" y2=\"600\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    if (sy(0) >= 0 && sy(0) <= size)
        os << "<line x1=\"0\" y1=\"" << fixed(sy(0)) << "\" x2=\"600\" y2=\"" << fixed(sy(0))
           << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    std::size_t stride = std::max<std::size_t>(1, tr.states.size() / 4000);
    os << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < tr.states.size(); i += stride) {
        if (i) os << ' ';
        os << fixed(sx(tr.states[i].q.x)) << ',' << fixed(sy(tr.states[i].q.y));
    }
    if (!tr.states.empty() && (tr.states.size() - 1) % stride != 0)
        os << ' ' << fixed(sx(tr.states.back().q.x)) << ',' << fixed(sy(tr.states.back().q.y));
    os << "\"/>\n";
    for (Vec2 p : singular_points)
        os << "<circle cx=\"" << fixed(sx(p.x)) << "\" cy=\"" << fixed(sy(p.y))
           << "\" r=\"4\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
    os << "</svg>\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out << content;
    if (!out) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace locons::cli
