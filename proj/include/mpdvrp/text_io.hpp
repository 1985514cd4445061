#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mpdvrp {

// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

// Strict full-token numeric parsers; throw ParseError with `what` in the message.
double parse_double(std::string_view s, std::string_view what);
std::int64_t parse_int(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);

// Whitespace tokenization with '#' starting a comment that runs to end of line.
std::vector<std::string> tokenize_line(std::string_view line);

}  // namespace mpdvrp
