#pragma once

#include <string>
#include <vector>

#include "wag/game.hpp"

namespace wag {

// Observation cells named by their member states, e.g. "{s,w}".
std::vector<std::string> obs_cell_names(const ObservationPartition& p,
                                        const std::vector<std::string>& state_names);

// Textual strategy format: memory states, initial memory, per-memory output,
// update table keyed by observation-cell names.
std::string write_strategy(const MooreStrategy& s, const std::vector<std::string>& cell_names,
                           const std::vector<std::string>& action_names);
MooreStrategy read_strategy(const std::string& text, const std::vector<std::string>& cell_names,
                            const std::vector<std::string>& action_names);

} // namespace wag
