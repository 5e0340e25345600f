#pragma once

#include "wag/game.hpp"

namespace wag {

// Path-multiplicity counters over the states of a knowledge, with omega for
// counts driven unbounded by acceleration. Ordered pointwise, omega maximal.
struct CountingFunction {
    static constexpr long long omega = std::numeric_limits<long long>::max();
    std::vector<long long> count;

    std::vector<StateId> support() const {
        std::vector<StateId> s;
        for (int q = 0; q < (int)count.size(); ++q)
            if (count[q] > 0) s.push_back(q);
        return s;
    }
    bool empty() const {
        for (long long c : count)
            if (c > 0) return false;
        return true;
    }
    bool leq(const CountingFunction& o) const {
        for (size_t q = 0; q < count.size(); ++q)
            if (count[q] > o.count[q]) return false;
        return true;
    }
    bool operator==(const CountingFunction& o) const { return count == o.count; }
};

// count 1 on the initial state, 0 elsewhere
CountingFunction counting_root(const ThreePlayerGame& g);

// count'(q') sums, over source states q with positive count and player-3
// actions leading to q' inside the announced obs2 cell, the count of q.
// Omega is absorbing under the sum.
CountingFunction counting_step(const CountingFunction& c, ActionId a1, ActionId a2,
                               const std::vector<StateId>& cell, const ThreePlayerGame& g);

// Self-covering unraveling of the counting-abstraction safety game. Nodes
// alternate implicitly: player 1 picks a per-state action map, the adversary
// picks a2, and the protagonist side picks the observation branch (the
// observation announced is the one of the play it keeps alive). Supports are
// restricted to the safe set; a branch with empty restricted support is not
// available; a node where some a2 kills every branch of every action map is
// losing. Expansion stops at nodes dominating an ancestor, with strictly
// grown coordinates accelerated to omega first.
struct CountingTree {
    struct Node {
        CountingFunction counting;
        int parent = -1;
        int depth = 0;
        int covering_ancestor = -1; // covered nodes are leaves
        bool dead = false;          // empty safe support
        std::vector<std::vector<ActionId>> phis; // per-support-state action maps
        // branches[phi][a2] -> (obs2 cell, child node), empty supports pruned
        std::vector<std::vector<std::vector<std::pair<CellId, int>>>> branches;
        bool winning = false;  // filled by the safety solve
        int chosen_phi = -1;
    };
    std::vector<Node> nodes; // node 0 = root
    long long accelerated_coordinates = 0;
};

CountingTree unravel(const ThreePlayerGame& g, const ObservationPartition& obs2,
                     const std::vector<char>& safe, long long budget = 1'000'000);

// Decision procedure for safety with a perfectly informed player 1: solves
// the finite safety game on the covering tree (covered leaves loop to their
// covering ancestor) and extracts a finite-memory witness whose memory
// states are tree nodes paired with the observed game state. Reachability is
// deliberately not routed through counting; use the knowledge pipeline or
// bounded enumeration for it.
Verdict solve_counting_safety(const ThreePlayerGame& g, const ObservationPartition& obs1,
                              const ObservationPartition& obs2, const Objective& obj,
                              long long budget = 1'000'000);

std::string counting_tree_dot(const CountingTree& tree, const ThreePlayerGame& g);

} // namespace wag
