#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fqc/cli/config.hpp"

namespace fqc::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Locale-free general format with `digits` significant digits; nan/inf spelled out.
std::string format_number(double x, int digits);

/// Pretty JSON with floating values at 17 significant digits; NaN and inf become null.
std::string json_dump(const nlohmann::json& j);

std::string spectrum_csv(const SpectrumReport& r, const std::vector<std::string>& header_comments);
nlohmann::json spectrum_json(const SpectrumReport& r);

std::string grid_csv(const PhaseGrid& g, const std::vector<std::string>& header_comments);
nlohmann::json grid_json(const PhaseGrid& g);

/// Quantities that can be drawn for this grid, in default order.
std::vector<std::string> heatmap_quantities(const PhaseGrid& g);
double cell_quantity(const ScanCell& c, std::string_view quantity);

struct Segment {
  double x0, y0, x1, y1;  // parameter coordinates (axis1, axis2)
};
/// Zero contours of the analytic phase-boundary functions of the grid's model.
std::vector<Segment> boundary_segments(const PhaseGrid& g);

std::string render_heatmap_svg(const PhaseGrid& g, std::string_view quantity);

struct RunManifest {
  std::string command;
  std::string config_digest;
  std::string config_text;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};
nlohmann::json manifest_json(const RunManifest& m);

}  // namespace fqc::cli
