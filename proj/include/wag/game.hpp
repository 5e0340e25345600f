#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wag/common.hpp"

namespace wag {

using StateId = int;
using ActionId = int;
using CellId = int;

// A partition of the state set into observation cells. obs(q) is the unique
// cell containing q. Player 3 never carries one (it has perfect observation
// by convention and the file format rejects an obs3 field).
struct ObservationPartition {
    int num_states = 0;
    std::vector<CellId> cell_of;                 // state -> cell index
    std::vector<std::vector<StateId>> cells;     // cell -> sorted members

    int num_cells() const { return (int)cells.size(); }
    CellId obs(StateId q) const { return cell_of[q]; }
    bool is_blind() const { return cells.size() == 1; }
    bool is_perfect() const { return (int)cells.size() == num_states; }

    static ObservationPartition blind(int n);
    static ObservationPartition perfect(int n);
    // Validates the partition law: cells non-empty, disjoint, covering.
    // Violations name the offending state.
    static ObservationPartition from_cells(int n, const std::vector<std::vector<StateId>>& cells);
};

// true iff every cell of `fine` is contained in some cell of `coarse`,
// i.e. the owner of `coarse` is less informed.
bool less_informed(const ObservationPartition& coarse, const ObservationPartition& fine);

enum class ObjectiveKind { Reach, Safe, Parity };

struct Objective {
    ObjectiveKind kind = ObjectiveKind::Reach;
    std::vector<char> target;    // reach/safe membership mask
    std::vector<int> priority;   // parity: total map state -> 0..d

    static Objective reach(std::vector<char> t) { return {ObjectiveKind::Reach, std::move(t), {}}; }
    static Objective safe(std::vector<char> t) { return {ObjectiveKind::Safe, std::move(t), {}}; }
    static Objective parity(std::vector<int> p) { return {ObjectiveKind::Parity, {}, std::move(p)}; }
};

// Finite concurrent game with three action alphabets and a total
// deterministic transition table indexed [q][a1][a2][a3].
struct ThreePlayerGame {
    std::vector<std::string> state_names;
    std::vector<std::string> a1_names, a2_names, a3_names;
    StateId initial = 0;
    std::vector<StateId> table;

    int num_states() const { return (int)state_names.size(); }
    int n1() const { return (int)a1_names.size(); }
    int n2() const { return (int)a2_names.size(); }
    int n3() const { return (int)a3_names.size(); }

    StateId step(StateId q, ActionId a1, ActionId a2, ActionId a3) const {
        return table[((q * n1() + a1) * n2() + a2) * n3() + a3];
    }
    StateId& at(StateId q, ActionId a1, ActionId a2, ActionId a3) {
        return table[((q * n1() + a1) * n2() + a2) * n3() + a3];
    }
    void validate() const; // totality + target range
};

// Turn-based extension for two perfect-observation players: player 3 moves
// at turn-3 states, player 4 at turn-4 states.
struct FourPlayerGame {
    std::vector<std::string> state_names;
    std::vector<std::string> a1_names, a2_names, a3_names, a4_names;
    StateId initial = 0;
    std::vector<int> turn;          // 3 or 4 per state
    std::vector<StateId> table3;    // [q][a1][a2][a3], valid where turn==3
    std::vector<StateId> table4;    // [q][a1][a2][a4], valid where turn==4

    int num_states() const { return (int)state_names.size(); }
    int n1() const { return (int)a1_names.size(); }
    int n2() const { return (int)a2_names.size(); }
    int n3() const { return (int)a3_names.size(); }
    int n4() const { return (int)a4_names.size(); }

    StateId step3(StateId q, ActionId a1, ActionId a2, ActionId a3) const {
        return table3[((q * n1() + a1) * n2() + a2) * n3() + a3];
    }
    StateId step4(StateId q, ActionId a1, ActionId a2, ActionId a4) const {
        return table4[((q * n1() + a1) * n2() + a2) * n4() + a4];
    }
    void validate() const;
};

// Two-player game with exact rational probabilistic transitions.
struct StochasticGame {
    std::vector<std::string> state_names;
    std::vector<std::string> a1_names, a2_names;
    StateId initial = 0;
    // [q][a1][a2] -> list of (target, probability), probabilities sum to 1
    std::vector<std::vector<std::pair<StateId, Rat>>> dists;

    int num_states() const { return (int)state_names.size(); }
    int n1() const { return (int)a1_names.size(); }
    int n2() const { return (int)a2_names.size(); }
    const std::vector<std::pair<StateId, Rat>>& dist(StateId q, ActionId a1, ActionId a2) const {
        return dists[(q * n1() + a1) * n2() + a2];
    }
    void validate() const; // each distribution sums exactly to 1
};

// Finite-memory observation-based strategy: update consumes the observation
// of the state just entered, then output fires.
struct MooreStrategy {
    int owner = 1;               // player index
    int num_obs_cells = 0;
    int memory_count = 0;
    int initial_memory = 0;
    std::vector<int> update;     // [m][cell] -> m'
    std::vector<ActionId> output; // [m] -> action

    int next(int m, CellId cell) const { return update[m * num_obs_cells + cell]; }
    ActionId act(int m) const { return output[m]; }
    void validate(int expected_cells, int num_actions) const;
};

enum class Answer { Yes, No };

// Result of a decision procedure. YES verdicts from the solvers carry a
// witness strategy for player 1.
struct Verdict {
    Answer answer = Answer::No;
    std::optional<MooreStrategy> witness;
    std::string method;
    bool complete = true;
    std::map<std::string, long long> diagnostics;

    bool yes() const { return answer == Answer::Yes; }
};

// post(s, a1, a2) = successors of s under (a1, a2) with player 3's action
// existentially resolved. Non-empty whenever s is non-empty.
std::vector<StateId> post(const ThreePlayerGame& g, const std::vector<StateId>& s,
                          ActionId a1, ActionId a2);

// Evaluates the ultimately-periodic play stem.cycle^omega against an
// objective: reach = target on stem or cycle, safe = all states in target,
// parity = minimum cycle priority even.
bool eval_lasso(const std::vector<StateId>& stem, const std::vector<StateId>& cycle,
                const Objective& obj);

// A parsed game document: one of the three game kinds plus the observation
// partitions for players 1 and 2 and the objective.
enum class GameKind { Three, Four, Stochastic };

struct GameDoc {
    GameKind kind = GameKind::Three;
    ThreePlayerGame three;
    FourPlayerGame four;
    StochasticGame stoch;
    ObservationPartition obs1, obs2;
    Objective objective;

    int num_states() const;
    const std::vector<std::string>& state_names() const;
    void validate() const;
};

} // namespace wag
