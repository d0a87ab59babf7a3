#ifndef QWLIM_IO_HPP
#define QWLIM_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qwlim/geometry.hpp"
#include "qwlim/lowenergy.hpp"
#include "qwlim/point_interaction.hpp"
#include "qwlim/potential.hpp"

namespace qwlim::io {

using Json = nlohmann::ordered_json;

// ---- document schemas (see README) ------------------------------------
CurvatureProfile curvature_from_json(const Json& j);
Potential1D potential_from_json(const Json& j);
PointInteraction pointop_from_json(const Json& j);

Json curvature_to_json(const CurvatureProfile& gamma);
Json pointop_to_json(const PointInteraction& op);
Json resonance_report_to_json(const ResonanceReport& report);

// ---- deterministic emission --------------------------------------------
/// JSON text with every float printed at 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);
/// Number formatted with `sig` significant digits (%.{sig}g).
std::string format_double(double v, int sig);

/// Write-once via a temporary file and rename.
void atomic_write(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const Json& j);
/// CSV with a header row; cells are printed at 12 significant digits.
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

Json parse_json_text(const std::string& text);

} // namespace qwlim::io

#endif
