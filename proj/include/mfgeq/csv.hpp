#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace mfgeq::csv {

// Shortest form that still round-trips: 17 significant digits.
std::string format(double value);

// Writes one comma-separated row; cells are emitted verbatim.
void row(std::ostream& os, std::initializer_list<std::string_view> cells);

inline std::string cell(double value) { return format(value); }
inline std::string cell(bool value) { return value ? "1" : "0"; }
inline std::string cell(std::size_t value) { return std::to_string(value); }
inline std::string cell(int value) { return std::to_string(value); }

}  // namespace mfgeq::csv
