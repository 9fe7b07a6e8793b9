#pragma once

#include <istream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sirf/simulate.hpp"

namespace sirf {

/// Overlay of f (dashed) and the threshold function g (solid) on [0, 1],
/// with one marker per endemic equilibrium from the report: circle =
/// stable, diamond = saddle, square = degenerate.  Self-contained SVG,
/// byte-stable for a given report.
std::string plot_report_svg(const nlohmann::ordered_json& report);

/// Phase plane (R horizontal, I vertical) with one polyline per
/// trajectory and a dot at each start.  Accepts any mix of 2-D and 3-D
/// tables; only the (I, R) columns are drawn.
std::string plot_trajectories_svg(const std::vector<Trajectory<State2>>& trajs);

/// Basin map as colored lattice cells (x = R0, y = I0); unresolved cells
/// are light gray, outcome ids cycle through a fixed palette.
std::string plot_basin_svg(const BasinMap& map);

/// Read back the CSV formats the CLI emits (throws SpecError on malformed
/// input).  Trajectories lose nothing the plots need; basin maps restore
/// completely.
Trajectory<State2> read_trajectory_csv(std::istream& in);
BasinMap read_basin_csv(std::istream& in);

} // namespace sirf
