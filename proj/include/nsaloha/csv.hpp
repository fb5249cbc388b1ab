#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nsaloha {

inline constexpr const char* kVersion = "0.1.0";

/// Header metadata emitted with every CSV so a file can be regenerated from
/// itself: resolved config snapshot, code version, seed, wall-clock and
/// per-run provenance (analytic vs simulated).
struct RunManifest {
    std::string version = kVersion;
    std::string command;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::string provenance;  // "analytic", "simulated" or "analytic+simulated"
    std::vector<std::pair<std::string, std::string>> config;
};

std::string format_double(double v, int significant_digits = 12);

void write_csv(const std::string& path, const RunManifest& manifest,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

/// Appends rows to an existing CSV (creating it, manifest included, if absent).
void append_csv(const std::string& path, const RunManifest& manifest,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows);

RunManifest read_manifest(const std::string& path);
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path);

}  // namespace nsaloha
