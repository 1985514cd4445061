#pragma once

#include <iosfwd>
#include <string>

#include "mpdvrp/instance.hpp"

namespace mpdvrp {

// Whitespace-delimited instance file with '#' comments:
//   n <tasks>
//   fleet <type_id> <capacity> <count>      (one line per agent type)
//   override <flat_agent> <capacity>        (optional per-agent overrides)
//   node <id> <x> <y>                       (2n+1 lines)
//   task <id> <pickup> <delivery> <mass>    (n lines)
// All reals render at full precision so write/read round-trips bit-exactly.
void write_instance(std::ostream& out, const Instance& inst);
Instance read_instance(std::istream& in);

void write_instance_file(const std::string& path, const Instance& inst);
Instance read_instance_file(const std::string& path);

}  // namespace mpdvrp
