#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace sws {

inline constexpr const char* kToolName = "swapscan";
inline constexpr const char* kToolVersion = "0.1.0";

/// Floats in CSV bodies carry 12 significant digits; bodies contain no
/// wall-clock data, so identical invocations produce byte-identical files.
std::string format_double(double x);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

/// Sidecar manifest accompanying a CSV output file (written next to it as
/// <path>.manifest.json). The timestamp lives here, outside the CSV body.
void write_manifest(const std::string& csv_path, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& parameters);

}  // namespace sws
