#include "wag/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

#include "wag/counting.hpp"
#include "wag/oracles.hpp"

namespace wag {

namespace {

// shared skeleton of the two knowledge constructions: Even vertices are
// beliefs, Odd vertices resolve the adversary's choices; aux vertices are
// deduplicated by their successor sets
struct BeliefGraph {
    PerfectInfoParityGame pg;
    std::vector<std::vector<int>> vertex_knowledge;
    std::vector<int> vertex_cell;
    std::vector<int> even_vertices;
    long long enumerated_moves = 0;
};

} // namespace

SubsetConstruction subset_construct(const KnowledgeGame& h, long long budget) {
    SubsetConstruction sc;
    PerfectInfoParityGame& pg = sc.pg;
    std::map<std::vector<int>, int> index;

    auto new_even = [&](const std::vector<int>& knowledge) {
        int v = pg.num_vertices++;
        pg.owner.push_back(0);
        pg.priority.push_back(h.priority[knowledge[0]]);
        pg.succ.emplace_back();
        sc.vertex_knowledge.resize(pg.num_vertices);
        sc.vertex_cell.resize(pg.num_vertices, -1);
        sc.moves.resize(pg.num_vertices);
        sc.vertex_knowledge[v] = knowledge;
        sc.vertex_cell[v] = h.obs1_cell[knowledge[0]];
        ++sc.knowledge_vertices;
        return v;
    };

    std::vector<int> init{h.initial};
    int v0 = new_even(init);
    index[init] = v0;
    pg.initial = v0;
    std::vector<int> queue{v0};

    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        const std::vector<int> knowledge = sc.vertex_knowledge[v];

        // lifted priority must be constant on the belief (visibility for
        // player 1); the belief lies inside one obs1' cell by construction
        for (int s : knowledge)
            if (h.priority[s] != pg.priority[v])
                throw VisibilityError(
                    "lifted priorities not constant on a player-1 knowledge: objective not "
                    "visible for player 1 in the knowledge game");

        // slots: (member, a2) pairs in canonical order
        struct Slot {
            int s;
            int a2;
        };
        std::vector<Slot> slots;
        for (int s : knowledge)
            for (int a2 = 0; a2 < h.a2_count; ++a2) slots.push_back({s, a2});

        std::map<std::vector<int>, int> aux_by_signature;
        for (int a1 = 0; a1 < h.a1_count; ++a1) {
            // moves sharing a fold set induce the same branch map, so
            // announcement rows are enumerated as distinct successor unions,
            // slot by slot; the row kept per union is the lexicographically
            // least one, which keeps extraction deterministic. Winning
            // beliefs are downward closed under inclusion, so only the
            // inclusion-minimal unions can matter and dominated partial
            // unions are pruned as they appear.
            std::map<std::vector<int>, std::vector<CellId>> partial;
            partial[{}] = {};
            for (const Slot& slot : slots) {
                const auto& menu = h.menus[slot.s][a1][slot.a2];
                std::map<std::vector<int>, std::vector<CellId>> next;
                for (const auto& [fold, row] : partial) {
                    for (const auto& [cell, succ] : menu) {
                        if (++sc.enumerated_moves > budget)
                            throw BudgetError(
                                "knowledge-level move enumeration exceeded the budget");
                        std::vector<int> fold2 = fold;
                        auto pos = std::lower_bound(fold2.begin(), fold2.end(), succ);
                        if (pos == fold2.end() || *pos != succ) fold2.insert(pos, succ);
                        std::vector<CellId> row2 = row;
                        row2.push_back(cell);
                        auto [it, inserted] = next.try_emplace(std::move(fold2), row2);
                        if (!inserted && row2 < it->second) it->second = std::move(row2);
                    }
                }
                // keep the inclusion-minimal unions only
                std::vector<const std::vector<int>*> keys;
                for (const auto& [fold, row] : next) keys.push_back(&fold);
                std::sort(keys.begin(), keys.end(),
                          [](const auto* a, const auto* b) { return a->size() < b->size(); });
                std::map<std::vector<int>, std::vector<CellId>> pruned;
                std::vector<const std::vector<int>*> kept;
                for (const auto* f : keys) {
                    bool dominated = false;
                    for (const auto* k : kept) {
                        if (std::includes(f->begin(), f->end(), k->begin(), k->end())) {
                            dominated = true;
                            break;
                        }
                        if (++sc.enumerated_moves > budget)
                            throw BudgetError(
                                "knowledge-level move enumeration exceeded the budget");
                    }
                    if (!dominated) {
                        kept.push_back(f);
                        pruned.emplace(*f, std::move(next.at(*f)));
                    }
                }
                partial = std::move(pruned);
            }
            for (const auto& [fold, row] : partial) {
                std::vector<std::vector<int>> by_cell(h.num_obs1_cells);
                for (int s : fold) by_cell[h.obs1_cell[s]].push_back(s);
                std::vector<int> succ_by_cell(h.num_obs1_cells, -1);
                std::vector<int> signature;
                for (int c = 0; c < h.num_obs1_cells; ++c) {
                    auto& grp = by_cell[c];
                    if (grp.empty()) continue;
                    auto [it, inserted] = index.try_emplace(grp, 0);
                    if (inserted) {
                        if ((long long)pg.num_vertices >= budget)
                            throw BudgetError("subset construction exceeded the vertex budget");
                        it->second = new_even(grp);
                        queue.push_back(it->second);
                    }
                    succ_by_cell[c] = it->second;
                    signature.push_back(it->second);
                }
                std::sort(signature.begin(), signature.end());
                if (!aux_by_signature.count(signature)) {
                    int aux = pg.num_vertices++;
                    pg.owner.push_back(1);
                    pg.priority.push_back(pg.priority[v]);
                    pg.succ.emplace_back(signature);
                    sc.vertex_knowledge.resize(pg.num_vertices);
                    sc.vertex_cell.resize(pg.num_vertices, -1);
                    sc.moves.resize(pg.num_vertices);
                    aux_by_signature[signature] = aux;
                    pg.succ[v].push_back(aux);
                    SubsetConstruction::Move mv;
                    mv.a1 = a1;
                    mv.row = row;
                    mv.succ_by_cell = succ_by_cell;
                    mv.aux_vertex = aux;
                    sc.moves[v].push_back(std::move(mv));
                }
            }
        }
    }
    pg.validate();
    return sc;
}

BeliefResult solve_belief_game(const PartialObsGame& g, long long budget) {
    PerfectInfoParityGame pg;
    std::vector<std::vector<int>> vertex_belief;
    std::map<std::vector<int>, int> index;

    auto new_even = [&](const std::vector<int>& belief) {
        int v = pg.num_vertices++;
        pg.owner.push_back(0);
        pg.priority.push_back(g.priority[belief[0]]);
        pg.succ.emplace_back();
        vertex_belief.resize(pg.num_vertices);
        vertex_belief[v] = belief;
        return v;
    };

    std::vector<int> init{g.initial};
    int v0 = new_even(init);
    index[init] = v0;
    pg.initial = v0;
    std::vector<int> queue{v0};
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        const std::vector<int> belief = vertex_belief[v];
        for (int s : belief)
            if (g.priority[s] != pg.priority[v])
                throw VisibilityError("priorities not constant on a belief");
        std::map<std::vector<int>, int> aux_by_signature;
        for (int a = 0; a < g.num_actions; ++a) {
            std::vector<char> fold(g.num_states, 0);
            for (int s : belief)
                for (int t : g.succ[s][a]) fold[t] = 1;
            std::vector<std::vector<int>> by_cell(g.obs.num_cells());
            for (int t = 0; t < g.num_states; ++t)
                if (fold[t]) by_cell[g.obs.obs(t)].push_back(t);
            std::vector<int> signature;
            for (int c = 0; c < g.obs.num_cells(); ++c) {
                if (by_cell[c].empty()) continue;
                auto [it, inserted] = index.try_emplace(by_cell[c], 0);
                if (inserted) {
                    if ((long long)pg.num_vertices >= budget)
                        throw BudgetError("belief construction exceeded the vertex budget");
                    it->second = new_even(by_cell[c]);
                    queue.push_back(it->second);
                }
                signature.push_back(it->second);
            }
            std::sort(signature.begin(), signature.end());
            signature.erase(std::unique(signature.begin(), signature.end()), signature.end());
            if (!aux_by_signature.count(signature)) {
                int aux = pg.num_vertices++;
                pg.owner.push_back(1);
                pg.priority.push_back(pg.priority[v]);
                pg.succ.emplace_back(signature);
                vertex_belief.resize(pg.num_vertices);
                aux_by_signature[signature] = aux;
                pg.succ[v].push_back(aux);
            }
        }
    }
    pg.validate();
    ParitySolution sol = solve_parity_perfect(pg);
    return {sol.winner[pg.initial] == 0, pg.num_vertices};
}

bool verify_strategy(const ThreePlayerGame& g, const ObservationPartition& obs1,
                     const ObservationPartition& obs2, const Objective& obj,
                     const MooreStrategy& sigma1, long long budget) {
    g.validate();
    if (sigma1.owner != 1) throw PreconditionError("verify_strategy expects a player-1 strategy");
    sigma1.validate(obs1.num_cells(), g.n1());

    const int M = sigma1.memory_count;
    const int n = g.num_states();
    const bool flagged = obj.kind != ObjectiveKind::Parity;

    // product position: ((q * M) + m) * (flagged ? 2 : 1) + flag, where m is
    // the memory after consuming obs1(q)
    auto complement_hit = [&](StateId q) {
        // state where the complement objective's flag flips
        return obj.kind == ObjectiveKind::Reach ? (bool)obj.target[q] : !obj.target[q];
    };
    int width = flagged ? 2 : 1;
    int total = n * M * width;
    auto enc = [&](StateId q, int m, int flag) { return (q * M + m) * width + flag; };

    PartialObsGame pog;
    pog.num_states = total;
    pog.num_actions = g.n2();
    int m0 = sigma1.next(sigma1.initial_memory, obs1.obs(g.initial));
    pog.initial = enc(g.initial, m0, flagged && complement_hit(g.initial) ? 1 : 0);

    pog.succ.assign(total, {});
    for (StateId q = 0; q < n; ++q)
        for (int m = 0; m < M; ++m)
            for (int flag = 0; flag < width; ++flag) {
                int s = enc(q, m, flag);
                pog.succ[s].assign(g.n2(), {});
                for (int a2 = 0; a2 < g.n2(); ++a2) {
                    std::set<int> next;
                    if (flagged && flag == 1) {
                        next.insert(s); // complement flag is absorbing
                    } else {
                        ActionId a1 = sigma1.act(m);
                        for (int a3 = 0; a3 < g.n3(); ++a3) {
                            StateId q2 = g.step(q, a1, a2, a3);
                            int m2 = sigma1.next(m, obs1.obs(q2));
                            int f2 = flagged && complement_hit(q2) ? 1 : flag;
                            next.insert(enc(q2, m2, f2));
                        }
                    }
                    pog.succ[s][a2].assign(next.begin(), next.end());
                }
            }

    // priorities of the complement objective:
    //   complement of Reach(T)  = Safe(~T):  flag (entered T) is losing for p2
    //   complement of Safe(T)   = Reach(~T): flag (left T) is winning for p2
    //   complement of Parity(p) = Parity(p + 1)
    pog.priority.assign(total, 0);
    for (StateId q = 0; q < n; ++q)
        for (int m = 0; m < M; ++m)
            for (int flag = 0; flag < width; ++flag) {
                int s = enc(q, m, flag);
                switch (obj.kind) {
                    case ObjectiveKind::Reach: pog.priority[s] = flag ? 1 : 0; break;
                    case ObjectiveKind::Safe: pog.priority[s] = flag ? 0 : 1; break;
                    case ObjectiveKind::Parity: pog.priority[s] = obj.priority[q] + 1; break;
                }
            }
    if (obj.kind == ObjectiveKind::Parity) {
        for (const auto& cell : obs2.cells) {
            int p = obj.priority[cell[0]];
            for (StateId q : cell)
                if (obj.priority[q] != p)
                    throw VisibilityError(
                        "parity objective not visible for player 2; cannot verify");
        }
    }

    // player 2 observes the game state's obs2 cell and the flag, not the
    // strategy memory
    std::vector<std::vector<StateId>> cells;
    for (const auto& cell : obs2.cells)
        for (int flag = 0; flag < width; ++flag) {
            std::vector<StateId> c;
            for (StateId q : cell)
                for (int m = 0; m < M; ++m) c.push_back(enc(q, m, flag));
            cells.push_back(c);
        }
    pog.obs = ObservationPartition::from_cells(total, cells);

    BeliefResult r = solve_belief_game(pog, budget);
    return !r.exists_winning;
}

namespace {

// Moore witness from the Even winning region of the subset construction.
// Memory 0 = before the first observation, memory 1 = dead (observations
// impossible under the tracked knowledge), memory 2+i = i-th knowledge
// vertex. For flag products the machine consumes the original observation
// as its flag-0 refinement; after the flag flips the objective is already
// decided, so the mistracking cannot affect the verdict.
MooreStrategy extract_witness(const SubsetConstruction& sc, const ParitySolution& sol,
                              const std::vector<int>& work_cell_of_orig, int orig_cells,
                              int initial_orig_cell) {
    std::vector<int> even_ids;
    std::vector<int> mem_of_vertex(sc.pg.num_vertices, -1);
    for (int v = 0; v < sc.pg.num_vertices; ++v)
        if (sc.pg.owner[v] == 0 && sc.vertex_cell[v] != -1) {
            mem_of_vertex[v] = 2 + (int)even_ids.size();
            even_ids.push_back(v);
        }

    MooreStrategy s;
    s.owner = 1;
    s.num_obs_cells = orig_cells;
    s.memory_count = 2 + (int)even_ids.size();
    s.initial_memory = 0;
    s.update.assign(s.memory_count * orig_cells, 1); // default: dead
    s.output.assign(s.memory_count, 0);

    // memory 0: the first observation must be the initial state's cell
    s.update[0 * orig_cells + initial_orig_cell] = mem_of_vertex[sc.pg.initial];
    // memory 1 (dead) self-loops
    for (int c = 0; c < orig_cells; ++c) s.update[1 * orig_cells + c] = 1;

    for (size_t i = 0; i < even_ids.size(); ++i) {
        int v = even_ids[i];
        int mem = 2 + (int)i;
        if (sol.winner[v] != 0 || sol.strategy[v] == -1) continue; // dead region
        const SubsetConstruction::Move* mv = nullptr;
        for (const auto& m : sc.moves[v])
            if (m.aux_vertex == sol.strategy[v]) {
                mv = &m;
                break;
            }
        assert(mv != nullptr);
        s.output[mem] = mv->a1;
        for (int c = 0; c < orig_cells; ++c) {
            int wc = work_cell_of_orig[c];
            int nxt = wc == -1 ? -1 : mv->succ_by_cell[wc];
            s.update[mem * orig_cells + c] = nxt == -1 ? 1 : mem_of_vertex[nxt];
        }
    }
    return s;
}

} // namespace

Verdict solve_three(const ThreePlayerGame& g, const ObservationPartition& obs1,
                    const ObservationPartition& obs2, const Objective& obj,
                    const SolveOptions& opts) {
    g.validate();
    if (obs1.num_states != g.num_states() || obs2.num_states != g.num_states())
        throw PreconditionError("observation partitions over the wrong state set");
    if (!less_informed(obs1, obs2))
        throw PreconditionError("player 1 must be less informed than player 2");

    if (opts.method == Method::Bounded)
        return bounded_solve(g, obs1, obs2, obj, opts.m1, opts.m2, opts.budget);
    if (opts.method == Method::Counting)
        return solve_counting_safety(g, obs1, obs2, obj, opts.budget);

    try {
        const ThreePlayerGame* work = &g;
        const ObservationPartition* wobs1 = &obs1;
        const ObservationPartition* wobs2 = &obs2;
        Objective parity = obj;
        VisibleProduct vp;
        bool product = obj.kind != ObjectiveKind::Parity;
        if (product) {
            vp = make_visible(g, obs1, obs2, obj);
            work = &vp.game;
            wobs1 = &vp.obs1;
            wobs2 = &vp.obs2;
            parity = vp.parity;
        }

        KnowledgeGame h = build_knowledge_game(*work, *wobs1, *wobs2, parity, opts.budget);
        SubsetConstruction sc = subset_construct(h, opts.budget);
        ParitySolution sol = solve_parity_perfect(sc.pg);
        bool yes = sol.winner[sc.pg.initial] == 0;

        Verdict v;
        v.answer = yes ? Answer::Yes : Answer::No;
        v.method = "knowledge";
        v.complete = true;
        v.diagnostics["knowledge_states"] = h.num_states();
        v.diagnostics["knowledge_candidates"] = h.candidate_count;
        v.diagnostics["solver_vertices"] = sc.pg.num_vertices;
        v.diagnostics["enumerated_moves"] = sc.enumerated_moves;
        if (yes) {
            // map original obs1 cells onto the working partition (flag 0)
            std::vector<int> work_cell(obs1.num_cells(), -1);
            for (int c = 0; c < obs1.num_cells(); ++c) {
                StateId q = obs1.cells[c][0];
                work_cell[c] = product ? vp.obs1.cell_of[q * 2] : c;
            }
            v.witness = extract_witness(sc, sol, work_cell, obs1.num_cells(),
                                        obs1.obs(g.initial));
        }
        return v;
    } catch (const VisibilityError&) {
        if (opts.method != Method::Auto) throw;
        Verdict v = bounded_solve(g, obs1, obs2, obj, opts.m1, opts.m2, opts.budget);
        v.diagnostics["visibility_fallback"] = 1;
        return v;
    }
}

namespace {

// all Moore machines with exactly `mem` memory states over `cells`
// observation cells and `actions` outputs, in canonical odometer order
template <class Fn>
bool for_each_machine(int mem, int cells, int actions, long long& budget, Fn fn) {
    std::vector<int> update(mem * cells, 0);
    std::vector<int> output(mem, 0);
    while (true) {
        if (--budget < 0) throw BudgetError("strategy enumeration exceeded the budget");
        MooreStrategy s;
        s.owner = 1;
        s.num_obs_cells = cells;
        s.memory_count = mem;
        s.initial_memory = 0;
        s.update = update;
        s.output = output;
        if (fn(s)) return true;
        size_t i = 0;
        while (i < update.size()) {
            if (++update[i] < mem) break;
            update[i++] = 0;
        }
        if (i == update.size()) {
            size_t j = 0;
            while (j < output.size()) {
                if (++output[j] < actions) break;
                output[j++] = 0;
            }
            if (j == output.size()) return false;
        }
    }
}

} // namespace

Verdict bounded_solve(const ThreePlayerGame& g, const ObservationPartition& obs1,
                      const ObservationPartition& obs2, const Objective& obj, int m1, int m2,
                      long long budget) {
    g.validate();
    if (m1 < 1 || m2 < 1) throw PreconditionError("memory bounds must be at least 1");

    // completeness threshold: number of relevant observation-history classes
    // when the game is horizon-bounded, else the doubly-exponential bound
    long long threshold = std::numeric_limits<long long>::max();
    auto cert = horizon_certificate(g, obj);
    if (cert) {
        ClassCounts cc = strategy_class_counts(g, obs1, obs2, obj, cert->horizon);
        threshold = std::max(1ll, cc.player1);
    } else {
        long long candidates = 0;
        for (const auto& cell : obs2.cells) {
            if (cell.size() >= 62 || candidates >= (1ll << 40)) {
                candidates = -1;
                break;
            }
            candidates += (1ll << cell.size()) - 1;
        }
        if (candidates >= 0 && candidates < 40) threshold = (1ll << candidates) + 2;
    }

    // player-2 refuter machines used as a cheap pre-filter
    std::vector<MooreStrategy> refuters;
    {
        long long cap = 200'000;
        for (int mem = 1; mem <= m2; ++mem)
            for_each_machine(mem, obs2.num_cells(), g.n2(), cap, [&](const MooreStrategy& s2) {
                MooreStrategy r = s2;
                r.owner = 2;
                refuters.push_back(r);
                return false;
            });
    }

    auto refuted_by = [&](const MooreStrategy& s1, const MooreStrategy& s2) {
        // graph of (state, memory-1, memory-2) nodes, branching over player 3
        std::map<std::tuple<StateId, int, int>, int> index;
        std::vector<std::tuple<StateId, int, int>> nodes;
        OnePlayerGraph graph;
        int m10 = s1.next(s1.initial_memory, obs1.obs(g.initial));
        int m20 = s2.next(s2.initial_memory, obs2.obs(g.initial));
        nodes.push_back({g.initial, m10, m20});
        index[nodes[0]] = 0;
        for (size_t i = 0; i < nodes.size(); ++i) {
            auto [q, ma, mb] = nodes[i];
            graph.succ.emplace_back();
            ActionId a1 = s1.act(ma);
            ActionId a2 = s2.act(mb);
            for (int a3 = 0; a3 < g.n3(); ++a3) {
                StateId q2 = g.step(q, a1, a2, a3);
                std::tuple<StateId, int, int> key{q2, s1.next(ma, obs1.obs(q2)),
                                                  s2.next(mb, obs2.obs(q2))};
                auto [it, inserted] = index.try_emplace(key, (int)nodes.size());
                if (inserted) nodes.push_back(key);
                graph.succ[i].push_back(it->second);
            }
        }
        graph.num_states = (int)nodes.size();
        graph.initial = 0;
        Objective lifted = obj;
        if (obj.kind == ObjectiveKind::Parity) {
            lifted.priority.assign(nodes.size(), 0);
            for (size_t i = 0; i < nodes.size(); ++i)
                lifted.priority[i] = obj.priority[std::get<0>(nodes[i])];
        } else {
            lifted.target.assign(nodes.size(), 0);
            for (size_t i = 0; i < nodes.size(); ++i)
                lifted.target[i] = obj.target[std::get<0>(nodes[i])];
        }
        return !exists_play(graph, lifted).has_value();
    };

    long long candidates = 0;
    for (int mem = 1; mem <= m1; ++mem) {
        MooreStrategy found;
        bool yes = for_each_machine(mem, obs1.num_cells(), g.n1(), budget,
                                    [&](const MooreStrategy& s1) {
                                        ++candidates;
                                        for (const auto& s2 : refuters)
                                            if (refuted_by(s1, s2)) return false;
                                        if (verify_strategy(g, obs1, obs2, obj, s1)) {
                                            found = s1;
                                            return true;
                                        }
                                        return false;
                                    });
        if (yes) {
            Verdict v;
            v.answer = Answer::Yes;
            v.witness = found;
            v.method = "bounded";
            v.complete = true;
            v.diagnostics["strategies_enumerated"] = candidates;
            v.diagnostics["memory_used"] = mem;
            return v;
        }
    }
    Verdict v;
    v.answer = Answer::No;
    v.method = "bounded";
    v.complete = m1 >= threshold;
    v.diagnostics["strategies_enumerated"] = candidates;
    v.diagnostics["completeness_threshold"] =
        threshold == std::numeric_limits<long long>::max() ? -1 : threshold;
    return v;
}

} // namespace wag
