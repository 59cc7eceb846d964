#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace horndelta {

// Iterates a line-oriented stream, skipping blank lines and '#' comments.
// fn(line_number, line) is called with the 1-based physical line number.
void for_each_data_line(std::istream& in,
                        const std::function<void(std::size_t, std::string_view)>& fn);

// Splits on single tab characters; empty fields are preserved.
std::vector<std::string_view> split_tabs(std::string_view line);

std::uint64_t parse_u64(std::string_view field, std::size_t line);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace horndelta
