#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "locons/cover.hpp"
#include "locons/dynamics.hpp"

namespace locons::cli {

inline constexpr const char* kTrajectoryHeader = "t,x,y,px,py,chart,V,Tkin,Elocal,theta_acc,p_theta";

/// One row per logged state; theta_acc is the angle about the first center.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);
void write_lift_csv(std::ostream& os, const std::vector<LiftState>& lift);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    /// Index of a named column; ValidationError if absent.
    std::size_t column(const std::string& name) const;
};

/// Numeric CSV with a header line. ParseError on malformed cells.
CsvTable read_csv(std::istream& is);

nlohmann::json transitions_json(const Trajectory& tr);

/// Static figure: axes, trajectory polyline, singular-point markers.
void write_svg(std::ostream& os, const Trajectory& tr, const std::vector<Vec2>& singular_points);

/// Writes text to a file, ValidationError if it cannot be opened.
void write_file(const std::string& path, const std::string& content);

}  // namespace locons::cli
