#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nagata::text {

// Shortest-safe representation: 17 significant digits, '.' decimal point,
// independent of the global locale. Infinities print as `inf` / `-inf`,
// NaN as `nan`.
std::string format_double(double value);

// Locale-independent parse of a full token; accepts `inf`, `-inf`, `nan`.
// Throws DomainError on trailing garbage.
double parse_double(std::string_view token);
long long parse_int(std::string_view token);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace nagata::text
