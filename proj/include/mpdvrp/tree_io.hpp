#pragma once

#include <iosfwd>
#include <string>

#include "mpdvrp/search.hpp"

namespace mpdvrp {

// Plain-text tree snapshot: a header with n_tasks, n_agents, task order,
// J_max, the incumbent and the RNG state, then one `id parent depth
// agent_choice N J` record per node in id order. Reals render at full
// precision; save -> load -> save is byte-identical, so searches can resume
// across process invocations.
void write_tree_snapshot(std::ostream& out, const SearchTree& tree);
SearchTree read_tree_snapshot(std::istream& in);

void write_tree_snapshot_file(const std::string& path, const SearchTree& tree);
SearchTree read_tree_snapshot_file(const std::string& path);

}  // namespace mpdvrp
