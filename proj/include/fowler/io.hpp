#pragma once

#include <json.hpp>

#include <string>

namespace fowler {

using Json = nlohmann::ordered_json;

/// Decimal rendering with 17 significant digits; "nan"/"inf" for non-finite values.
std::string format_double(double x);

/// Strict decimal parse; throws Error(Io) on garbage.
double parse_double(const std::string& text);

/// Serializes JSON with every floating-point number printed at 17 significant
/// digits (nlohmann's own dump prints the shortest round-trip form).
std::string dump_json(const Json& j, int indent = 2);

/// Writes text to a file, throwing Error(Io) on failure.
void write_file(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace fowler
