#pragma once

#include <map>

#include "wag/game.hpp"

namespace wag {

struct TmTransition {
    int from = 0;  // machine state
    int read = 0;  // tape symbol index
    int to = 0;
    int write = 0;
    int dir = 1; // -1 or +1
};

// Alternating Turing machine; or-states resolve nondeterminism existentially,
// and-states universally. The accept/reject states carry no transitions.
struct AlternatingTM {
    std::vector<std::string> state_names;
    std::vector<char> is_and;
    std::vector<std::string> input_alphabet; // tape alphabet adds the blank '#'
    int initial = 0, accept = 0, reject = 0;
    std::vector<TmTransition> delta;

    int num_tape_symbols() const { return (int)input_alphabet.size() + 1; }
    int blank() const { return (int)input_alphabet.size(); }
    bool nondeterministic() const {
        for (size_t q = 0; q < is_and.size(); ++q)
            if (is_and[q] && (int)q != accept && (int)q != reject) return false;
        return true;
    }
    void validate() const;
};

AlternatingTM parse_tm(const std::string& text);
std::vector<int> parse_word(const AlternatingTM& m, const std::string& word);

// Configuration-graph acceptance with the tape bounded by 2^n cells,
// memoized; refuses (BudgetError) when the graph exceeds the budget. For
// nondeterministic machines an accepting run is returned through `run`:
// the sequence of configurations and chosen transition indices.
struct TmRun {
    struct Step {
        int state, head;
        std::vector<int> tape;
        int transition = -1; // taken to reach the next configuration
    };
    std::vector<Step> steps;
};
bool tm_accepts(const AlternatingTM& m, const std::vector<int>& word, int n, long long budget,
                TmRun* run = nullptr);

struct TmGameResult {
    GameDoc doc; // three-player game, reach objective
    std::map<std::string, long long> phase_map;
    bool expected_accepts = false;
    int sink_state = -1, target_state = -1;
    // action indices for script building
    std::vector<int> symbol_action;      // symbol index -> a1 index
    std::vector<int> transition_action;  // transition index -> a1 index
    int bits_per_round = 0;              // n
};

TmGameResult tm_to_game(const AlternatingTM& m, const std::vector<int>& word, int n,
                        long long budget = 4'000'000);

// Restart form: player 3 replaced by the uniform distribution and every
// losing sink rerouted to the initial state.
struct TmStochasticResult {
    GameDoc doc;
    bool expected_accepts = false;
};
TmStochasticResult tm_to_stochastic(const AlternatingTM& m, const std::vector<int>& word, int n,
                                    long long budget = 4'000'000);

// Honest announcement script for an accepting run of a nondeterministic
// machine, as a blind Moore machine: the run's configurations symbol by
// symbol, transitions in between, final configuration repeated forever.
MooreStrategy honest_script(const TmGameResult& game, const AlternatingTM& m,
                            const std::vector<int>& word, int n);

// Blind machine playing a fixed per-step action sequence, then a loop.
MooreStrategy step_script(int owner, int num_obs_cells, const std::vector<ActionId>& prefix,
                          const std::vector<ActionId>& loop);

} // namespace wag
