#pragma once

#include <optional>

#include "wag/game.hpp"

namespace wag {

// Proof that every play reaches a verdict-determined point within `horizon`
// steps, computed by backward absorption analysis on the all-moves graph.
// Strategies differing only after that many steps yield identical verdicts,
// which is what makes exhaustive enumeration complete.
struct HorizonCertificate {
    int horizon = 0;
    long long determined_positions = 0;
    long long positions = 0;
};

// Computed, never user-asserted. Returns nothing when some play can stay
// verdict-undetermined forever.
std::optional<HorizonCertificate> horizon_certificate(const ThreePlayerGame& g, const Objective& obj);
std::optional<HorizonCertificate> horizon_certificate(const FourPlayerGame& g, const Objective& obj);

// Exhaustive decision of  exists s1 . forall s2 . exists s3 : outcome in obj
// by enumeration of observation-history strategies up to the certified
// horizon. Refuses (OracleError) without a certificate of horizon <= h.
Verdict brute_force_three(const ThreePlayerGame& g, const ObservationPartition& obs1,
                          const ObservationPartition& obs2, const Objective& obj, int h,
                          long long budget = 50'000'000);

// Same for  exists s1 . forall s2 . exists s3 . forall s4  on turn-based
// four-player games (players 3 and 4 perfect-information).
Verdict brute_force_four(const FourPlayerGame& g, const ObservationPartition& obs1,
                         const ObservationPartition& obs2, const Objective& obj, int h,
                         long long budget = 50'000'000);

// One-player graph after fixing the controllable strategies: does some
// infinite play satisfy the objective? Returns the witness lasso on success.
struct Lasso {
    std::vector<int> stem;
    std::vector<int> cycle;
};
struct OnePlayerGraph {
    int num_states = 0;
    int initial = 0;
    std::vector<std::vector<int>> succ; // total: every state has a successor
};
std::optional<Lasso> exists_play(const OnePlayerGraph& graph, const Objective& obj);

// Finite Markov chain with exact rational transition rows.
struct MarkovChain {
    int num_states = 0;
    int initial = 0;
    std::vector<std::vector<std::pair<int, Rat>>> rows;
    void validate() const;
};
enum class Qualitative { Zero, Positive, One };

// Graph-only classification of Pr(reach target): positive iff the target is
// reachable in the support graph, probability one iff no target-free bottom
// SCC is reachable once the target is made absorbing.
Qualitative markov_qualitative(const MarkovChain& mc, const std::vector<char>& target);

// Executable statement of the uniform-distribution correspondence: the
// three-player reachability verdict coincides with positive winning when
// player 3 is replaced by the uniform distribution over its actions. The
// left side runs the lasso-search oracle, the right side enumerates
// (s1, s2) pairs and classifies the induced chain with markov_qualitative.
bool check_lemma_uniform(const ThreePlayerGame& g, const ObservationPartition& obs1,
                         const ObservationPartition& obs2, const std::vector<char>& target, int h,
                         long long budget = 50'000'000);

// Number of distinct realizable observation-history classes that still
// matter (have an undetermined play prefix) within the horizon, for each of
// the two partially informed players. A Moore strategy with that much memory
// can express every relevant history function, which is the honest
// completeness threshold for bounded enumeration.
struct ClassCounts {
    long long player1 = 0;
    long long player2 = 0;
};
ClassCounts strategy_class_counts(const ThreePlayerGame& g, const ObservationPartition& obs1,
                                  const ObservationPartition& obs2, const Objective& obj, int h);

} // namespace wag
