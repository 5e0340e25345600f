#pragma once

#include "wag/parity.hpp"
#include "wag/reductions.hpp"

namespace wag {

// Knowledge-of-player-1 construction over a knowledge game: Even vertices
// are player-1 knowledges (sets of knowledge-game states within one obs1'
// cell), interleaved with move-resolution vertices where the adversary
// resolves player 2's action and the observation branch.
struct SubsetConstruction {
    PerfectInfoParityGame pg;
    struct Move {
        int a1 = 0;
        // announcement per (member index, a2), row-major over the knowledge
        std::vector<CellId> row;
        // successor Even vertex per obs1' cell, -1 where the branch is empty
        std::vector<int> succ_by_cell;
        int aux_vertex = -1;
    };
    std::vector<std::vector<int>> vertex_knowledge; // Even vertex -> knowledge set
    std::vector<int> vertex_cell;                   // Even vertex -> obs1' cell
    std::vector<std::vector<Move>> moves;           // Even vertex -> distinct moves
    int knowledge_vertices = 0;
    long long enumerated_moves = 0;
};

SubsetConstruction subset_construct(const KnowledgeGame& h, long long budget = 1'000'000);

// Two-player partial-observation game: an existential player with a uniform
// action alphabet against a perfect adversary folded into nondeterministic
// successor sets. Priorities must be visible for the existential player.
struct PartialObsGame {
    int num_states = 0;
    int initial = 0;
    ObservationPartition obs;
    std::vector<int> priority;
    int num_actions = 0;
    std::vector<std::vector<std::vector<StateId>>> succ; // [s][a] sorted sets
};

struct BeliefResult {
    bool exists_winning = false;
    long long vertices = 0;
};
BeliefResult solve_belief_game(const PartialObsGame& g, long long budget = 1'000'000);

enum class Method { Auto, Knowledge, Bounded, Counting };

struct SolveOptions {
    Method method = Method::Auto;
    int m1 = 2;
    int m2 = 2;
    long long budget = 1'000'000;
};

// End-to-end pipeline: visibility preprocessing, knowledge construction,
// knowledge-of-player-1 subset construction, parity solving, and witness
// extraction back through observation histories. Falls back to bounded
// enumeration when the lifted priorities are not visible for player 1
// (method Auto only).
Verdict solve_three(const ThreePlayerGame& g, const ObservationPartition& obs1,
                    const ObservationPartition& obs2, const Objective& obj,
                    const SolveOptions& opts = {});

// Enumerates player-1 Moore strategies of memory <= m1 and checks each with
// verify_strategy (after a cheap refutation pass against player-2 machines
// of memory <= m2). YES is always sound; NO is complete only when m1 covers
// every relevant observation-history class or the doubly-exponential bound.
Verdict bounded_solve(const ThreePlayerGame& g, const ObservationPartition& obs1,
                      const ObservationPartition& obs2, const Objective& obj, int m1, int m2,
                      long long budget = 1'000'000);

// Complete check of  forall s2 . exists s3 : outcome in obj  with sigma1
// fixed, by deciding the complement as a two-player partial-observation game
// for player 2 over the product of the game with sigma1's memory.
bool verify_strategy(const ThreePlayerGame& g, const ObservationPartition& obs1,
                     const ObservationPartition& obs2, const Objective& obj,
                     const MooreStrategy& sigma1, long long budget = 1'000'000);

} // namespace wag
