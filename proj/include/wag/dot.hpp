#pragma once

#include <string>

#include "wag/game.hpp"

namespace wag {

// Graph-description export: states as nodes, transitions as labeled edges
// (edges with identical endpoints merged, labels stacked), obs2 cells as
// clusters, obs1 shown per node. With a verdict carrying a witness, the
// moves the witness can actually play are highlighted.
std::string export_dot(const GameDoc& doc, const Verdict* verdict = nullptr);

} // namespace wag
