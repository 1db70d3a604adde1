#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ffnet {

/// Shortest decimal form that parses back to the exact same double
/// (printf %.17g). Every file this library writes goes through here so
/// serialization is lossless and byte-stable.
std::string format_double(double v);

/// Strict double parse; throws ParseError unless the whole token consumes.
double parse_double(std::string_view token, std::string_view context = {});

std::vector<std::string> split(std::string_view line, char delim);
std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);       // throws IoError
void write_file(const std::string& path, std::string_view content);

}  // namespace ffnet
