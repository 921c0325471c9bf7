#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace bridgevol {

inline constexpr const char* kVersion = "1.0.0";

namespace io {

// Shortest decimal that round-trips the double bit-exactly.
std::string format_double(double x);

std::vector<std::string> split_csv_line(const std::string& line);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Every command drops a JSON sidecar next to its outputs with the fully
// resolved configuration, seeds, generator id, library version and
// wall-clock, so a run can be reproduced from the sidecar alone.
void write_sidecar(const std::string& path, const std::string& command,
                   const nlohmann::ordered_json& config);

}  // namespace io
}  // namespace bridgevol
