#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "tubeband/bands.hpp"
#include "tubeband/posterior.hpp"
#include "tubeband/sim.hpp"

namespace tubeband::io {

/// Reads a CSV with header `x,y` (LF or CRLF line endings, optional UTF-8
/// BOM, blank lines ignored). Throws InvalidArgument on malformed content,
/// EmptyDesign when there are no rows, Domain when x leaves [0, 1].
[[nodiscard]] Dataset read_dataset_csv(std::istream& in);
[[nodiscard]] Dataset read_dataset_csv_file(const std::string& path);

void write_dataset_csv(std::ostream& out, const Dataset& data);

/// Columns x,center,lower,upper.
void write_band_csv(std::ostream& out, const Band& band);

[[nodiscard]] nlohmann::ordered_json trace_to_json(const LepskiTrace& trace);
[[nodiscard]] nlohmann::ordered_json band_to_json(const Band& band);

/// Deterministic given the configuration; the worker count is omitted.
[[nodiscard]] nlohmann::ordered_json config_to_json(const SimConfig& cfg);
[[nodiscard]] nlohmann::ordered_json report_to_json(const SimulationReport& report);

/// One row per method, one column per sample size, coverage in each cell.
void write_coverage_table_csv(std::ostream& out, std::span<const SimulationReport> reports);

/// Shortest round-trip representation.
[[nodiscard]] std::string format_double(double v);

}  // namespace tubeband::io
