#pragma once

// Plain-text emission helpers: locale-free CSV with full-precision floats.
// JSON envelopes are assembled by the CLI, which owns the vendored parser.

#include <string>
#include <vector>

namespace geoflow {

// 17 significant digits, '.' decimal point, no locale
std::string format_double(double v);

// header line plus one row per entry; trailing newline
std::string csv_table(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

void write_file(const std::string& path, const std::string& content);

}  // namespace geoflow
