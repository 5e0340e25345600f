#pragma once

#include "wag/game.hpp"

namespace wag {

// Product of a game with the one-bit objective flag (reached / violated).
// Flag-1 states are absorbing, both partitions are refined by the flag, and
// the reach/safe objective becomes a parity objective visible for player 2.
struct VisibleProduct {
    ThreePlayerGame game;
    ObservationPartition obs1, obs2;
    Objective parity;
    std::vector<std::pair<StateId, int>> factors; // product index -> (state, flag)
};
VisibleProduct make_visible(const ThreePlayerGame& g, const ObservationPartition& obs1,
                            const ObservationPartition& obs2, const Objective& reach_or_safe);

// Common priority of a knowledge set; mixed priorities signal an objective
// that is not visible for player 2.
int lift_priority(const Objective& parity, const std::vector<StateId>& knowledge);

// delta_H primitive: post(s, a1, a2) intersected with an obs2 cell. An empty
// result means the move routes to the losing sink.
std::vector<StateId> knowledge_step(const ThreePlayerGame& g, const std::vector<StateId>& s,
                                    ActionId a1, ActionId a2, const std::vector<StateId>& cell);

// The two-player game over knowledges of player 2. Player 1's actions are
// pairs (a1, f) where f announces the obs2 cell player 2 observes next; f is
// materialized sparsely, as the per-(state, a2) menu of announcements with a
// non-empty update. Announcements with an empty update route to an absorbing
// losing sink of odd priority and are never part of a winning strategy, so
// the menus omit them. Only knowledges reachable from {q0} are materialized.
struct KnowledgeGame {
    std::vector<std::vector<StateId>> states; // sorted base-state sets, discovery order
    int initial = 0;
    std::vector<CellId> obs1_cell;  // covering obs1 cell per knowledge state
    std::vector<int> priority;      // lifted priority per knowledge state
    int num_obs1_cells = 0;         // == |obs1 cells| of the base game
    int sink_obs1_cell = 0;         // designated cell of the sink
    int a1_count = 0, a2_count = 0;
    // menus[s][a1][a2]: choices (obs2 cell, successor knowledge index)
    std::vector<std::vector<std::vector<std::vector<std::pair<CellId, int>>>>> menus;
    long long candidate_count = 0;  // sum over obs2 cells of 2^|cell| - 1

    int num_states() const { return (int)states.size(); }
    static constexpr int sink_priority = 1;
    // index used for the sink in delta results
    int sink_index() const { return num_states(); }
    // delta_H on materialized states; returns sink_index() on empty update
    int delta(int s, ActionId a1, ActionId a2, CellId announced_cell,
              const ThreePlayerGame& base, const ObservationPartition& obs2) const;
};

KnowledgeGame build_knowledge_game(const ThreePlayerGame& g, const ObservationPartition& obs1,
                                   const ObservationPartition& obs2, const Objective& parity,
                                   long long budget = 1'000'000);

// Composite player-24 action: a base player-2 action plus a resolver mapping
// every player-4 turn state to a player-4 action.
struct CompositeAction24 {
    ActionId base = 0;
    std::vector<ActionId> resolver; // indexed by position in the Q4 list
};

struct MergedGame {
    ThreePlayerGame game;
    ObservationPartition obs1, obs2;
    Objective objective;
    std::vector<StateId> q4_states;              // resolver domain, document order
    std::vector<CompositeAction24> actions24;    // player-2 alphabet of the merge
};
MergedGame four_to_three(const FourPlayerGame& g, const ObservationPartition& obs1,
                         const ObservationPartition& obs2, const Objective& obj,
                         long long budget = 1'000'000);

// Player 3 replaced by the uniform distribution over its actions.
StochasticGame uniform(const ThreePlayerGame& g);

// Supports of a stochastic game as player-3 choices; indices beyond the
// support size clamp to the last element in canonical state order.
ThreePlayerGame support_game(const StochasticGame& sg);

// Probabilistic transitions replaced by a turn-based gadget: player 4 either
// resolves the support itself (through a pass-through state whose priority is
// the even floor of the source's) or delegates the resolution to player 3.
// Gadget states join the observation cells of their source state.
struct GadgetResult {
    FourPlayerGame game;
    ObservationPartition obs1, obs2;
    Objective objective;
    int gadget_states = 0; // states added beyond the base
};
GadgetResult gadget(const StochasticGame& sg, const ObservationPartition& obs1,
                    const ObservationPartition& obs2, const Objective& obj);

} // namespace wag
