#include "cmnmf/format.hpp"

#include <array>
#include <charconv>

#include "cmnmf/errors.hpp"

namespace cmnmf {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf.data(), end);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [end, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || end != last || text.empty()) throw ParseError("not a number: '" + text + "'");
  return v;
}

}  // namespace cmnmf
