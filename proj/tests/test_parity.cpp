#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <climits>

#include "fixtures.hpp"
#include "wag/parity.hpp"

using namespace wag;

namespace {

// oracle: regions by exhaustive positional-strategy enumeration; a vertex is
// Even-winning iff some Even positional strategy beats every Odd positional
// strategy from it, judged by the lasso each pair closes
std::vector<char> enumerate_regions(const PerfectInfoParityGame& g) {
    int n = g.num_vertices;
    std::vector<std::vector<int>> even_choices, odd_choices;
    std::vector<int> even_vs, odd_vs;
    for (int v = 0; v < n; ++v)
        (g.owner[v] == 0 ? even_vs : odd_vs).push_back(v);

    auto all_maps = [&](const std::vector<int>& vs) {
        std::vector<std::vector<int>> maps;
        std::vector<size_t> combo(vs.size(), 0);
        while (true) {
            std::vector<int> m(n, -1);
            for (size_t i = 0; i < vs.size(); ++i) m[vs[i]] = g.succ[vs[i]][combo[i]];
            maps.push_back(m);
            size_t i = 0;
            while (i < combo.size()) {
                if (++combo[i] < g.succ[vs[i]].size()) break;
                combo[i++] = 0;
            }
            if (i == combo.size()) break;
        }
        return maps;
    };
    auto evens = all_maps(even_vs);
    auto odds = all_maps(odd_vs);

    auto play_even_wins = [&](const std::vector<int>& se, const std::vector<int>& so, int from) {
        std::vector<int> seen(n, -1);
        std::vector<int> order;
        int v = from;
        while (seen[v] == -1) {
            seen[v] = (int)order.size();
            order.push_back(v);
            v = g.owner[v] == 0 ? se[v] : so[v];
        }
        int mn = INT_MAX;
        for (size_t i = seen[v]; i < order.size(); ++i) mn = std::min(mn, g.priority[order[i]]);
        return mn % 2 == 0;
    };

    std::vector<char> region(n, 1);
    for (int v = 0; v < n; ++v) {
        bool even_wins = false;
        for (const auto& se : evens) {
            bool beats_all = true;
            for (const auto& so : odds)
                if (!play_even_wins(se, so, v)) {
                    beats_all = false;
                    break;
                }
            if (beats_all) {
                even_wins = true;
                break;
            }
        }
        region[v] = even_wins ? 0 : 1;
    }
    return region;
}

PerfectInfoParityGame random_game(Rng& rng, int max_v, int max_prio) {
    PerfectInfoParityGame g;
    g.num_vertices = rng.range(1, max_v);
    g.initial = 0;
    for (int v = 0; v < g.num_vertices; ++v) {
        g.owner.push_back((char)rng.below(2));
        g.priority.push_back(rng.range(0, max_prio));
        std::vector<int> s;
        int outs = rng.range(1, 2);
        for (int i = 0; i < outs; ++i) s.push_back(rng.range(0, g.num_vertices - 1));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        g.succ.push_back(s);
    }
    return g;
}

// simulate the positional strategy of the region winner against every
// opposing positional strategy; every closed lasso must favour the winner
void check_strategy(const PerfectInfoParityGame& g, const ParitySolution& sol) {
    for (int v = 0; v < g.num_vertices; ++v) {
        int p = sol.winner[v];
        // walk: winner plays sol.strategy, opponent tries each positional map
        std::vector<int> opp_vs;
        for (int u = 0; u < g.num_vertices; ++u)
            if (g.owner[u] != p) opp_vs.push_back(u);
        std::vector<size_t> combo(opp_vs.size(), 0);
        while (true) {
            std::vector<int> so(g.num_vertices, -1);
            for (size_t i = 0; i < opp_vs.size(); ++i)
                so[opp_vs[i]] = g.succ[opp_vs[i]][combo[i]];
            std::vector<int> seen(g.num_vertices, -1), order;
            int cur = v;
            while (seen[cur] == -1) {
                seen[cur] = (int)order.size();
                order.push_back(cur);
                cur = g.owner[cur] == p ? sol.strategy[cur] : so[cur];
                REQUIRE(cur != -1);
            }
            int mn = INT_MAX;
            for (size_t i = seen[cur]; i < order.size(); ++i)
                mn = std::min(mn, g.priority[order[i]]);
            CHECK((mn % 2 == 0) == (p == 0));
            size_t i = 0;
            while (i < combo.size()) {
                if (++combo[i] < g.succ[opp_vs[i]].size()) break;
                combo[i++] = 0;
            }
            if (i == combo.size()) break;
        }
    }
}

} // namespace

TEST_CASE("single vertex self loops") {
    PerfectInfoParityGame g;
    g.num_vertices = 1;
    g.owner = {0};
    g.priority = {0};
    g.succ = {{0}};
    g.initial = 0;
    auto sol = solve_parity_perfect(g);
    CHECK(sol.winner[0] == 0);

    g.priority = {1};
    sol = solve_parity_perfect(g);
    CHECK(sol.winner[0] == 1);
}

TEST_CASE("regions match exhaustive positional enumeration") {
    Rng rng(101);
    for (int round = 0; round < 2000; ++round) {
        PerfectInfoParityGame g = random_game(rng, 5, rng.range(1, 3));
        auto sol = solve_parity_perfect(g);
        auto expected = enumerate_regions(g);
        for (int v = 0; v < g.num_vertices; ++v) CHECK(sol.winner[v] == expected[v]);
    }
}

TEST_CASE("winning strategies win every simulated lasso") {
    Rng rng(103);
    for (int round = 0; round < 500; ++round) {
        PerfectInfoParityGame g = random_game(rng, 5, 2);
        auto sol = solve_parity_perfect(g);
        check_strategy(g, sol);
    }
}

TEST_CASE("dead ends are rejected") {
    PerfectInfoParityGame g;
    g.num_vertices = 1;
    g.owner = {0};
    g.priority = {0};
    g.succ = {{}};
    g.initial = 0;
    CHECK_THROWS_AS(solve_parity_perfect(g), ValidationError);
}
