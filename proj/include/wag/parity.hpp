#pragma once

#include <vector>

#include "wag/game.hpp"

namespace wag {

// Turn-based perfect-information parity game. Winner of a play is decided by
// the minimum priority seen infinitely often (even = Even player wins).
struct PerfectInfoParityGame {
    int num_vertices = 0;
    std::vector<char> owner;            // 0 = Even, 1 = Odd
    std::vector<int> priority;
    std::vector<std::vector<int>> succ; // every vertex has >= 1 successor
    int initial = 0;

    void validate() const;
};

struct ParitySolution {
    std::vector<char> winner;   // per vertex: 0 or 1
    // positional strategy: for v owned by winner[v], a winning successor;
    // -1 elsewhere
    std::vector<int> strategy;
};

// Recursive decomposition over priorities; regions partition the vertex set
// and both strategies are positional.
ParitySolution solve_parity_perfect(const PerfectInfoParityGame& g);

} // namespace wag
