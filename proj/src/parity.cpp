#include "wag/parity.hpp"

#include <algorithm>

namespace wag {

void PerfectInfoParityGame::validate() const {
    if (num_vertices <= 0) throw ValidationError("parity game has no vertices");
    if ((int)owner.size() != num_vertices || (int)priority.size() != num_vertices ||
        (int)succ.size() != num_vertices)
        throw ValidationError("parity game tables not total");
    for (const auto& s : succ)
        if (s.empty()) throw ValidationError("parity game has a dead end");
    if (initial < 0 || initial >= num_vertices)
        throw ValidationError("parity game initial vertex out of range");
}

namespace {

struct Solver {
    const PerfectInfoParityGame& g;
    std::vector<std::vector<int>> pred;
    std::vector<char> removed;
    std::vector<char> winner;
    std::vector<int> strategy;

    explicit Solver(const PerfectInfoParityGame& game) : g(game) {
        pred.resize(g.num_vertices);
        for (int v = 0; v < g.num_vertices; ++v)
            for (int w : g.succ[v]) pred[w].push_back(v);
        removed.assign(g.num_vertices, 0);
        winner.assign(g.num_vertices, 0);
        strategy.assign(g.num_vertices, -1);
    }

    // Attractor of player p to `base` within the current subgame. Fills
    // strat[v] with the attracting edge for p-owned vertices newly added.
    std::vector<int> attractor(int p, const std::vector<int>& base, std::vector<char>& in,
                               std::vector<int>& strat) {
        std::vector<int> out_count(g.num_vertices, 0);
        for (int v = 0; v < g.num_vertices; ++v)
            if (!removed[v] && g.owner[v] != p) {
                int c = 0;
                for (int w : g.succ[v])
                    if (!removed[w]) ++c;
                out_count[v] = c;
            }
        std::vector<int> stack = base;
        for (int v : base) in[v] = 1;
        std::vector<int> result = base;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int u : pred[v]) {
                if (removed[u] || in[u]) continue;
                if (g.owner[u] == p) {
                    in[u] = 1;
                    strat[u] = v;
                    stack.push_back(u);
                    result.push_back(u);
                } else if (--out_count[u] == 0) {
                    in[u] = 1;
                    stack.push_back(u);
                    result.push_back(u);
                }
            }
        }
        return result;
    }

    std::vector<int> live_vertices() const {
        std::vector<int> vs;
        for (int v = 0; v < g.num_vertices; ++v)
            if (!removed[v]) vs.push_back(v);
        return vs;
    }

    void run() {
        std::vector<int> all = live_vertices();
        zielonka(all);
    }

    // Solves the subgame induced by the non-removed vertices in `vertices`.
    // On return, winner/strategy are set for these vertices and the removed
    // mask is restored.
    void zielonka(std::vector<int>& vertices) {
        if (vertices.empty()) return;
        int d = g.priority[vertices[0]];
        for (int v : vertices) d = std::min(d, g.priority[v]);
        int p = d % 2; // player favoured by the minimum priority

        std::vector<int> base;
        for (int v : vertices)
            if (g.priority[v] == d) base.push_back(v);

        std::vector<char> in_a(g.num_vertices, 0);
        std::vector<int> strat_a(g.num_vertices, -1);
        std::vector<int> a = attractor(p, base, in_a, strat_a);

        std::vector<int> rest;
        for (int v : vertices)
            if (!in_a[v]) rest.push_back(v);
        for (int v : a) removed[v] = 1;
        zielonka(rest);
        for (int v : a) removed[v] = 0;

        bool opponent_empty = true;
        for (int v : rest)
            if (winner[v] != p) {
                opponent_empty = false;
                break;
            }

        if (opponent_empty) {
            for (int v : a) {
                winner[v] = (char)p;
                if (g.owner[v] == p) {
                    if (strat_a[v] != -1) {
                        strategy[v] = strat_a[v];
                    } else {
                        // priority-d vertex: any live successor keeps the play
                        // inside the subgame, which p wins entirely
                        strategy[v] = -1;
                        for (int w : g.succ[v])
                            if (!removed[w]) {
                                strategy[v] = w;
                                break;
                            }
                    }
                } else {
                    strategy[v] = -1;
                }
            }
            return;
        }

        // opponent wins part of the rest; grow it with its attractor and
        // re-solve the remainder
        std::vector<int> opp_base;
        std::vector<char> in_opp_base(g.num_vertices, 0);
        for (int v : rest)
            if (winner[v] != p) {
                opp_base.push_back(v);
                in_opp_base[v] = 1;
            }
        std::vector<char> in_b(g.num_vertices, 0);
        std::vector<int> strat_b(g.num_vertices, -1);
        std::vector<int> b = attractor(1 - p, opp_base, in_b, strat_b);

        for (int v : b) {
            winner[v] = (char)(1 - p);
            if (!in_opp_base[v])
                strategy[v] = g.owner[v] == 1 - p ? strat_b[v] : -1;
            // opp_base vertices keep their sub-strategy from the recursion
        }

        std::vector<int> remainder;
        for (int v : vertices)
            if (!in_b[v]) remainder.push_back(v);
        for (int v : b) removed[v] = 1;
        zielonka(remainder);
        for (int v : b) removed[v] = 0;
    }
};

} // namespace

ParitySolution solve_parity_perfect(const PerfectInfoParityGame& g) {
    g.validate();
    Solver s(g);
    s.run();
    return {std::move(s.winner), std::move(s.strategy)};
}

} // namespace wag
