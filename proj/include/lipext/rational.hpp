#pragma once

#include <string>
#include <string_view>

namespace lipext {

// Parses "p/q", an integer, or a decimal literal. Throws InputError.
double parse_rational(std::string_view text);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

} // namespace lipext
