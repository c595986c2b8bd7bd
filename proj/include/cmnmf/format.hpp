#pragma once

#include <string>

namespace cmnmf {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict parse of a whole string as a double; throws ParseError.
double parse_double(const std::string& text);

}  // namespace cmnmf
