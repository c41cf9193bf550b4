#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "iirrelay/numerics.hpp"

namespace iirrelay::detail {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
double parse_double(const std::string& text, const std::string& what);
std::uint64_t parse_uint(const std::string& text, const std::string& what);
bool parse_bool(const std::string& text, const std::string& what);
std::vector<double> parse_list(const std::string& text, const std::string& what);
/// "re" or "(re,im)".
Complex parse_complex(const std::string& text, const std::string& what);
std::string format_complex(Complex c);
std::string join(const std::vector<double>& v);

}  // namespace iirrelay::detail
