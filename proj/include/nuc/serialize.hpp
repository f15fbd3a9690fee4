#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nuc/analysis.hpp"

namespace nuc {

/// Version tag carried by every grid container (JSON "format" field and the
/// first 8 bytes of the binary form, NUL-padded).
inline constexpr const char* kGridFormat = "NUCVOX1";
/// Version tag of report JSON.
inline constexpr const char* kReportFormat = "NUCREPORT1";

/// Shortest decimal string that parses back to exactly v; locale-free.
std::string format_double(double v);

nlohmann::ordered_json config_to_json(const GridConfig& config);
/// Strict: unknown or scheme-inapplicable keys are rejected by name.
GridConfig config_from_json(const nlohmann::json& j);

nlohmann::ordered_json grid_to_json(const SparseVoxelGrid& grid);
SparseVoxelGrid grid_from_json(const nlohmann::json& j);

/// Compact fixed-width little-endian records; layout documented in README.
void write_grid_binary(const SparseVoxelGrid& grid, std::ostream& out);
SparseVoxelGrid read_grid_binary(std::istream& in);
void save_grid_binary(const SparseVoxelGrid& grid, const std::filesystem::path& path);
SparseVoxelGrid load_grid_binary(const std::filesystem::path& path);

nlohmann::ordered_json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);

nlohmann::ordered_json comparison_to_json(const SchemeComparison& cmp);

/// One CSV row per band plus overall and outside rows; `scan` fills the first
/// column (file stem or "mean") and may be empty for single-cloud reports.
std::string report_csv_header();
std::string report_csv_rows(const AnalysisReport& report, const std::string& scan = "");

}  // namespace nuc
