#ifndef SQT_UTIL_STRINGS_HPP
#define SQT_UTIL_STRINGS_HPP

#include <string>
#include <string_view>
#include <vector>

namespace sqt {

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool iequals(std::string_view a, std::string_view b);

/// Case-insensitive search; returns npos when absent.
size_t ifind(std::string_view haystack, std::string_view needle, size_t from = 0);

std::vector<std::string> split(std::string_view s, char sep);

/// Renders a double with the shortest round-trip representation; stable
/// across runs and platforms using the same libc++/libstdc++.
std::string format_double(double v);

} // namespace sqt

#endif
