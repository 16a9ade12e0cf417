#include "sws/csvio.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "json.hpp"

namespace sws {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

void write_manifest(const std::string& csv_path, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& parameters) {
    nlohmann::json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : parameters) params[k] = v;
    j["parameters"] = params;
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = stamp;
    j["seed_note"] = "core computation paths use no randomness; outputs are deterministic";
    std::ofstream out(csv_path + ".manifest.json");
    out << j.dump(2) << '\n';
}

}  // namespace sws
