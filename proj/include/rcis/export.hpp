/*
 * export.hpp
 *
 * Result serialization: run reports as JSON, cell lists as CSV/JSON
 * (shortest round-trip decimals, bit-exact reload) and a 2-D convex
 * hull export for plotting.
 */

#ifndef RCIS_EXPORT_HPP_
#define RCIS_EXPORT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "rcis/algorithms.hpp"
#include "json.hpp"

namespace rcis {

enum class ExportFormat { cells_csv, cells_json, hull_csv };

ExportFormat export_format_from_string(const std::string& s);

nlohmann::json covering_to_json(const Covering& c);
Covering covering_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const RunReport& report);
/* reloads the metadata and final covering (snapshots are not stored) */
RunReport report_from_json(const nlohmann::json& j);

std::string cells_csv(const Covering& c);
std::string cells_json_text(const Covering& c);
/* counterclockwise convex hull of the cell corner points; 2-D only */
std::string hull_csv(const Covering& c);
std::vector<std::vector<double>> convex_hull_2d(
    std::vector<std::vector<double>> points);

void export_results(const Covering& c, ExportFormat format,
                    const std::filesystem::path& path);

/* reload of a cells.csv file: the cell boxes, in file order */
std::vector<Box> load_cells_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rcis

#endif  // RCIS_EXPORT_HPP_
