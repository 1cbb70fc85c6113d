#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fraclps::detail {

std::string fmt17(double v);
std::vector<std::string> split_csv(const std::string& line);
// Throws InputError naming the line on empty, partial or non-finite tokens.
double parse_double(const std::string& tok, std::size_t line_no);

}  // namespace fraclps::detail
