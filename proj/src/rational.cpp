#include "lipext/rational.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "lipext/errors.hpp"

namespace lipext {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s, std::string_view whole) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw InputError("not a rational number: '" + std::string(whole) + "'");
    return value;
}

} // namespace

double parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_number(text, text);
    double p = parse_number(text.substr(0, slash), text);
    double q = parse_number(text.substr(slash + 1), text);
    if (q == 0.0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return p / q;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) value = 0.0; // drop the sign of -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace lipext
