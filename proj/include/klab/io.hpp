#pragma once

#include <string>

#include <json.hpp>

namespace klab {

// All emitted files are UTF-8 with LF line endings and %.12g numerics.
std::string fmt12(double x);

// Round-trips x through %.12g so JSON reports carry the same precision as the
// CSV files.
double round12(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

void write_json_file(const std::string& path, const nlohmann::json& j);

} // namespace klab
