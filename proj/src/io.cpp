#include "bridgevol/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bridgevol/rng.hpp"

namespace bridgevol::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_sidecar(const std::string& path, const std::string& command,
                   const nlohmann::ordered_json& config) {
    nlohmann::ordered_json sidecar;
    sidecar["command"] = command;
    sidecar["version"] = kVersion;
    sidecar["rng"] = rng::algorithm_name();
    sidecar["config"] = config;
    const auto now = std::chrono::system_clock::now();
    sidecar["wallclock_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    write_text_file(path, sidecar.dump(2) + "\n");
}

}  // namespace bridgevol::io
