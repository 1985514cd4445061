#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpdvrp/geometry.hpp"

namespace mpdvrp {

// Reads a TSPLIB EUC_2D coordinate file: NAME, TYPE, DIMENSION,
// EDGE_WEIGHT_TYPE, NODE_COORD_SECTION and EOF are understood, anything else
// is skipped with a warning. Returns DIMENSION locations in file order with
// 1-based file ids remapped to 0-based. Throws ParseError naming the
// offending line on malformed input.
std::vector<Location> parse_tsplib(std::istream& in, std::vector<std::string>* warnings = nullptr);

std::vector<Location> parse_tsplib_file(const std::string& path,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace mpdvrp
