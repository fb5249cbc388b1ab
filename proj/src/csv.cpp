#include "nsaloha/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsaloha/errors.hpp"

namespace nsaloha {

std::string format_double(double v, int significant_digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, v);
    return buffer;
}

namespace {

void write_manifest(std::ostream& out, const RunManifest& m) {
    out << "# nsaloha " << m.version << "\n";
    out << "# command: " << m.command << "\n";
    out << "# seed: " << m.seed << "\n";
    out << "# wall_seconds: " << format_double(m.wall_seconds, 6) << "\n";
    out << "# provenance: " << m.provenance << "\n";
    for (const auto& [key, value] : m.config) out << "# config: " << key << " = " << value << "\n";
}

void write_rows(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
}

}  // namespace

void write_csv(const std::string& path, const RunManifest& manifest,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_manifest(out, manifest);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ",";
        out << columns[i];
    }
    out << "\n";
    write_rows(out, rows);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void append_csv(const std::string& path, const RunManifest& manifest,
                const std::vector<std::string>& columns,
                const std::vector<std::vector<std::string>>& rows) {
    if (!std::filesystem::exists(path)) {
        write_csv(path, manifest, columns, rows);
        return;
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to '" + path + "'");
    write_rows(out, rows);
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    RunManifest m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '#') break;
        std::string body = line.substr(1);
        if (!body.empty() && body[0] == ' ') body = body.substr(1);
        auto starts_with = [&](const char* prefix) { return body.rfind(prefix, 0) == 0; };
        if (starts_with("nsaloha ")) {
            m.version = body.substr(8);
        } else if (starts_with("command: ")) {
            m.command = body.substr(9);
        } else if (starts_with("seed: ")) {
            m.seed = std::stoull(body.substr(6));
        } else if (starts_with("wall_seconds: ")) {
            m.wall_seconds = std::stod(body.substr(14));
        } else if (starts_with("provenance: ")) {
            m.provenance = body.substr(12);
        } else if (starts_with("config: ")) {
            const std::string kv = body.substr(8);
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("manifest: malformed config line");
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(' ');
                const auto b = s.find_last_not_of(' ');
                return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
            };
            m.config.emplace_back(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
        }
    }
    return m;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // first non-comment line is the column header
            header_seen = true;
            continue;
        }
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nsaloha
