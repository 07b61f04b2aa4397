#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scanpath::text {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

std::string_view trim(std::string_view s);

// Splits on ',' and trims each field. A trailing '\r' is dropped first.
std::vector<std::string_view> split_csv(std::string_view line);

}  // namespace scanpath::text
