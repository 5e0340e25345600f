#pragma once

// Shared desk-scale fixtures and random-game generators for the test suites.

#include <string>

#include "wag/common.hpp"
#include "wag/game.hpp"

namespace fixtures {

using namespace wag;

// one forced step into an absorbing state
inline GameDoc g0() {
    GameDoc d;
    d.kind = GameKind::Three;
    ThreePlayerGame& g = d.three;
    g.state_names = {"s", "t"};
    g.a1_names = {"a"};
    g.a2_names = {"a"};
    g.a3_names = {"a"};
    g.initial = 0;
    g.table = {1, 1}; // s -> t, t -> t
    d.obs1 = ObservationPartition::blind(2);
    d.obs2 = ObservationPartition::blind(2);
    d.objective = Objective::reach({0, 1});
    return d;
}

// matching-pennies: player 1 wins iff its coin matches player 2's
inline GameDoc g1() {
    GameDoc d;
    d.kind = GameKind::Three;
    ThreePlayerGame& g = d.three;
    g.state_names = {"s", "w", "l"};
    g.a1_names = {"h", "t"};
    g.a2_names = {"h", "t"};
    g.a3_names = {"a"};
    g.initial = 0;
    g.table.assign(3 * 2 * 2 * 1, 0);
    auto set = [&](StateId q, int a1, int a2, StateId to) { g.at(q, a1, a2, 0) = to; };
    set(0, 0, 0, 1);
    set(0, 0, 1, 2);
    set(0, 1, 0, 2);
    set(0, 1, 1, 1);
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2) {
            set(1, a1, a2, 1);
            set(2, a1, a2, 2);
        }
    d.obs1 = ObservationPartition::blind(3);
    d.obs2 = ObservationPartition::blind(3);
    d.objective = Objective::reach({0, 1, 0});
    return d;
}

// player 3 resolves between а good and a bad absorbing state
inline GameDoc g2() {
    GameDoc d;
    d.kind = GameKind::Three;
    ThreePlayerGame& g = d.three;
    g.state_names = {"s", "t", "b"};
    g.a1_names = {"a"};
    g.a2_names = {"a"};
    g.a3_names = {"l", "r"};
    g.initial = 0;
    g.table.assign(3 * 1 * 1 * 2, 0);
    g.at(0, 0, 0, 0) = 1;
    g.at(0, 0, 0, 1) = 2;
    g.at(1, 0, 0, 0) = g.at(1, 0, 0, 1) = 1;
    g.at(2, 0, 0, 0) = g.at(2, 0, 0, 1) = 2;
    d.obs1 = ObservationPartition::blind(3);
    d.obs2 = ObservationPartition::from_cells(3, {{0}, {1, 2}});
    d.objective = Objective::reach({0, 1, 0});
    return d;
}

// random partition of n states biased towards coarse cells
inline ObservationPartition random_partition(Rng& rng, int n) {
    int cells = rng.range(1, n);
    std::vector<std::vector<StateId>> assign(cells);
    for (int q = 0; q < n; ++q) assign[rng.range(0, cells - 1)].push_back(q);
    std::vector<std::vector<StateId>> nonempty;
    for (auto& c : assign)
        if (!c.empty()) nonempty.push_back(std::move(c));
    return ObservationPartition::from_cells(n, nonempty);
}

// coarsening of a given partition (merges cells), so less_informed holds
inline ObservationPartition random_coarsening(Rng& rng, const ObservationPartition& fine) {
    int groups = rng.range(1, fine.num_cells());
    std::vector<std::vector<StateId>> merged(groups);
    for (int c = 0; c < fine.num_cells(); ++c) {
        auto& cell = merged[rng.range(0, groups - 1)];
        cell.insert(cell.end(), fine.cells[c].begin(), fine.cells[c].end());
    }
    std::vector<std::vector<StateId>> nonempty;
    for (auto& c : merged)
        if (!c.empty()) nonempty.push_back(std::move(c));
    return ObservationPartition::from_cells(fine.num_states, nonempty);
}

// random three-player game; absorbing-state bias keeps horizons short
inline GameDoc random_three(Rng& rng, int max_states = 4, int max_actions = 2) {
    GameDoc d;
    d.kind = GameKind::Three;
    ThreePlayerGame& g = d.three;
    int n = rng.range(2, max_states);
    for (int q = 0; q < n; ++q) g.state_names.push_back("q" + std::to_string(q));
    int n1 = rng.range(1, max_actions), n2 = rng.range(1, max_actions),
        n3 = rng.range(1, max_actions);
    for (int a = 0; a < n1; ++a) g.a1_names.push_back("a" + std::to_string(a));
    for (int a = 0; a < n2; ++a) g.a2_names.push_back("b" + std::to_string(a));
    for (int a = 0; a < n3; ++a) g.a3_names.push_back("c" + std::to_string(a));
    g.initial = 0;
    std::vector<char> absorbing(n, 0);
    for (int q = 1; q < n; ++q) absorbing[q] = rng.below(100) < 60;
    g.table.assign((size_t)n * n1 * n2 * n3, 0);
    for (int q = 0; q < n; ++q)
        for (int a1 = 0; a1 < n1; ++a1)
            for (int a2 = 0; a2 < n2; ++a2)
                for (int a3 = 0; a3 < n3; ++a3)
                    g.at(q, a1, a2, a3) = absorbing[q] ? q : rng.range(0, n - 1);
    d.obs2 = random_partition(rng, n);
    d.obs1 = random_coarsening(rng, d.obs2);
    std::vector<char> target(n, 0);
    for (int q = 0; q < n; ++q) target[q] = rng.below(100) < 40;
    d.objective = rng.below(2) ? Objective::reach(target) : Objective::safe(target);
    return d;
}

// random turn-based four-player game
inline GameDoc random_four(Rng& rng, int max_states = 3, int max_actions = 2) {
    GameDoc d;
    d.kind = GameKind::Four;
    FourPlayerGame& g = d.four;
    int n = rng.range(2, max_states);
    for (int q = 0; q < n; ++q) g.state_names.push_back("q" + std::to_string(q));
    int n1 = rng.range(1, max_actions), n2 = rng.range(1, max_actions),
        n3 = rng.range(1, max_actions), n4 = rng.range(1, max_actions);
    for (int a = 0; a < n1; ++a) g.a1_names.push_back("a" + std::to_string(a));
    for (int a = 0; a < n2; ++a) g.a2_names.push_back("b" + std::to_string(a));
    for (int a = 0; a < n3; ++a) g.a3_names.push_back("c" + std::to_string(a));
    for (int a = 0; a < n4; ++a) g.a4_names.push_back("d" + std::to_string(a));
    g.initial = 0;
    std::vector<char> absorbing(n, 0);
    for (int q = 1; q < n; ++q) absorbing[q] = rng.below(100) < 60;
    g.turn.resize(n);
    for (int q = 0; q < n; ++q) g.turn[q] = rng.below(2) ? 3 : 4;
    g.table3.assign((size_t)n * n1 * n2 * n3, 0);
    g.table4.assign((size_t)n * n1 * n2 * n4, 0);
    for (int q = 0; q < n; ++q)
        for (int a1 = 0; a1 < n1; ++a1)
            for (int a2 = 0; a2 < n2; ++a2) {
                for (int a3 = 0; a3 < n3; ++a3)
                    g.table3[((q * n1 + a1) * n2 + a2) * n3 + a3] =
                        absorbing[q] ? q : rng.range(0, n - 1);
                for (int a4 = 0; a4 < n4; ++a4)
                    g.table4[((q * n1 + a1) * n2 + a2) * n4 + a4] =
                        absorbing[q] ? q : rng.range(0, n - 1);
            }
    d.obs2 = random_partition(rng, n);
    d.obs1 = random_coarsening(rng, d.obs2);
    std::vector<char> target(n, 0);
    for (int q = 0; q < n; ++q) target[q] = rng.below(100) < 40;
    d.objective = rng.below(2) ? Objective::reach(target) : Objective::safe(target);
    return d;
}

// random stochastic game with few, small-support probabilistic transitions
inline GameDoc random_stochastic(Rng& rng, int max_states = 3, int max_actions = 2,
                                 int max_probabilistic = 2) {
    GameDoc d;
    d.kind = GameKind::Stochastic;
    StochasticGame& g = d.stoch;
    int n = rng.range(2, max_states);
    for (int q = 0; q < n; ++q) g.state_names.push_back("q" + std::to_string(q));
    int n1 = rng.range(1, max_actions), n2 = rng.range(1, max_actions);
    for (int a = 0; a < n1; ++a) g.a1_names.push_back("a" + std::to_string(a));
    for (int a = 0; a < n2; ++a) g.a2_names.push_back("b" + std::to_string(a));
    g.initial = 0;
    std::vector<char> absorbing(n, 0);
    for (int q = 1; q < n; ++q) absorbing[q] = rng.below(100) < 60;
    g.dists.resize((size_t)n * n1 * n2);
    int probabilistic = 0;
    for (int q = 0; q < n; ++q)
        for (int a1 = 0; a1 < n1; ++a1)
            for (int a2 = 0; a2 < n2; ++a2) {
                auto& dist = g.dists[(q * n1 + a1) * n2 + a2];
                if (absorbing[q]) {
                    dist = {{q, Rat::one()}};
                } else if (probabilistic < max_probabilistic && rng.below(100) < 30 && n >= 2) {
                    ++probabilistic;
                    int x = rng.range(0, n - 1), y = rng.range(0, n - 1);
                    while (y == x) y = (y + 1) % n;
                    if (x > y) std::swap(x, y);
                    dist = {{x, Rat(1, 2)}, {y, Rat(1, 2)}};
                } else {
                    dist = {{rng.range(0, n - 1), Rat::one()}};
                }
            }
    d.obs2 = random_partition(rng, n);
    d.obs1 = random_coarsening(rng, d.obs2);
    std::vector<char> target(n, 0);
    for (int q = 0; q < n; ++q) target[q] = rng.below(100) < 40;
    d.objective = Objective::reach(target);
    return d;
}

} // namespace fixtures
