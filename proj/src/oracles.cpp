#include "wag/oracles.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace wag {

namespace {

// ---------------------------------------------------------------- lassos --

std::vector<int> bfs_path(const std::vector<std::vector<int>>& succ, int from,
                          const std::vector<char>& goal) {
    int n = (int)succ.size();
    std::vector<int> parent(n, -2);
    std::vector<int> queue{from};
    parent[from] = -1;
    for (size_t i = 0; i < queue.size(); ++i) {
        int v = queue[i];
        if (goal[v]) {
            std::vector<int> path;
            for (int u = v; u != -1; u = parent[u]) path.push_back(u);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int w : succ[v])
            if (parent[w] == -2) {
                parent[w] = v;
                queue.push_back(w);
            }
    }
    return {};
}

// walk inside `allowed` from `start` until a node repeats; the caller
// guarantees every allowed node has an allowed successor
Lasso walk_to_cycle(const std::vector<std::vector<int>>& succ, int start,
                    const std::vector<char>& allowed) {
    std::vector<int> order;
    std::map<int, int> pos;
    int v = start;
    while (!pos.count(v)) {
        pos[v] = (int)order.size();
        order.push_back(v);
        int nxt = -1;
        for (int w : succ[v])
            if (allowed[w]) {
                nxt = w;
                break;
            }
        v = nxt;
    }
    int i = pos[v];
    Lasso l;
    l.stem.assign(order.begin(), order.begin() + i);
    l.cycle.assign(order.begin() + i, order.end());
    return l;
}

// strongly connected components, iterative Tarjan
std::vector<int> scc_of(const std::vector<std::vector<int>>& succ, const std::vector<char>& in) {
    int n = (int)succ.size();
    std::vector<int> comp(n, -1), low(n), num(n, -1), stk;
    int counter = 0, comps = 0;
    std::vector<char> on_stack(n, 0);
    for (int root = 0; root < n; ++root) {
        if (!in[root] || num[root] != -1) continue;
        // frames: (vertex, next successor index)
        std::vector<std::pair<int, size_t>> frames{{root, 0}};
        num[root] = low[root] = counter++;
        stk.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            auto& [v, idx] = frames.back();
            if (idx < succ[v].size()) {
                int w = succ[v][idx++];
                if (!in[w]) continue;
                if (num[w] == -1) {
                    num[w] = low[w] = counter++;
                    stk.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                if (low[v] == num[v]) {
                    while (true) {
                        int w = stk.back();
                        stk.pop_back();
                        on_stack[w] = 0;
                        comp[w] = comps;
                        if (w == v) break;
                    }
                    ++comps;
                }
                int done = v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            }
        }
    }
    return comp;
}

} // namespace

std::optional<Lasso> exists_play(const OnePlayerGraph& g, const Objective& obj) {
    int n = g.num_states;
    std::vector<char> reachable(n, 0);
    {
        std::vector<int> queue{g.initial};
        reachable[g.initial] = 1;
        for (size_t i = 0; i < queue.size(); ++i)
            for (int w : g.succ[queue[i]])
                if (!reachable[w]) {
                    reachable[w] = 1;
                    queue.push_back(w);
                }
    }

    auto finish = [&](Lasso l) -> std::optional<Lasso> {
        assert(eval_lasso(l.stem, l.cycle, obj));
        return l;
    };

    switch (obj.kind) {
        case ObjectiveKind::Reach: {
            std::vector<char> goal(n, 0);
            for (int q = 0; q < n; ++q) goal[q] = obj.target[q];
            std::vector<int> stem = bfs_path(g.succ, g.initial, goal);
            if (stem.empty()) return std::nullopt;
            std::vector<char> all(n, 1);
            Lasso tail = walk_to_cycle(g.succ, stem.back(), all);
            // tail starts at stem.back(): drop the duplicate, or drop the
            // target from the stem when it sits on the cycle itself
            Lasso l;
            l.stem = stem;
            if (tail.stem.empty()) l.stem.pop_back();
            else l.stem.insert(l.stem.end(), tail.stem.begin() + 1, tail.stem.end());
            l.cycle = tail.cycle;
            return finish(l);
        }
        case ObjectiveKind::Safe: {
            if (!obj.target[g.initial]) return std::nullopt;
            // greatest fixpoint: states that can stay inside the target forever
            std::vector<char> stay(n, 0);
            for (int q = 0; q < n; ++q) stay[q] = obj.target[q];
            bool changed = true;
            while (changed) {
                changed = false;
                for (int q = 0; q < n; ++q) {
                    if (!stay[q]) continue;
                    bool ok = false;
                    for (int w : g.succ[q])
                        if (stay[w]) {
                            ok = true;
                            break;
                        }
                    if (!ok) {
                        stay[q] = 0;
                        changed = true;
                    }
                }
            }
            if (!stay[g.initial]) return std::nullopt;
            return finish(walk_to_cycle(g.succ, g.initial, stay));
        }
        case ObjectiveKind::Parity: {
            std::vector<int> prios = obj.priority;
            std::set<int> evens;
            for (int q = 0; q < n; ++q)
                if (reachable[q] && prios[q] % 2 == 0) evens.insert(prios[q]);
            for (int d : evens) {
                std::vector<char> in(n, 0);
                for (int q = 0; q < n; ++q) in[q] = reachable[q] && prios[q] >= d;
                std::vector<int> comp = scc_of(g.succ, in);
                // an SCC with an internal cycle through a priority-d state
                std::vector<char> cyclic_comp;
                int comps = 0;
                for (int q = 0; q < n; ++q)
                    if (in[q]) comps = std::max(comps, comp[q] + 1);
                std::vector<int> size(comps, 0);
                std::vector<char> has_internal_edge(comps, 0);
                for (int q = 0; q < n; ++q) {
                    if (!in[q]) continue;
                    ++size[comp[q]];
                    for (int w : g.succ[q])
                        if (in[w] && comp[w] == comp[q]) has_internal_edge[comp[q]] = 1;
                }
                for (int x = 0; x < n; ++x) {
                    if (!in[x] || prios[x] != d) continue;
                    int c = comp[x];
                    if (!(size[c] > 1 || has_internal_edge[c])) continue;
                    if (size[c] == 1 && has_internal_edge[c]) {
                        bool self = false;
                        for (int w : g.succ[x])
                            if (w == x) self = true;
                        if (!self) continue;
                    }
                    // cycle: path x -> x inside the SCC
                    std::vector<std::vector<int>> internal(n);
                    for (int q = 0; q < n; ++q) {
                        if (!in[q] || comp[q] != c) continue;
                        for (int w : g.succ[q])
                            if (in[w] && comp[w] == c) internal[q].push_back(w);
                    }
                    std::vector<char> back(n, 0);
                    back[x] = 1;
                    std::vector<int> cyc;
                    bool found = false;
                    for (int w : internal[x]) {
                        if (w == x) {
                            cyc = {x};
                            found = true;
                            break;
                        }
                        std::vector<int> p = bfs_path(internal, w, back);
                        if (!p.empty()) {
                            cyc = {x};
                            cyc.insert(cyc.end(), p.begin(), p.end() - 1);
                            found = true;
                            break;
                        }
                    }
                    if (!found) continue;
                    std::vector<char> goal(n, 0);
                    goal[x] = 1;
                    std::vector<int> stem = bfs_path(g.succ, g.initial, goal);
                    assert(!stem.empty());
                    stem.pop_back(); // x starts the cycle
                    return finish({stem, cyc});
                }
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------------------ arena --

namespace {

inline int flag_after(const Objective& obj, int flag, StateId q) {
    if (obj.kind == ObjectiveKind::Reach) return flag | (obj.target[q] ? 1 : 0);
    return flag | (obj.target[q] ? 0 : 1);
}

struct Arena {
    int num_positions = 0;
    int initial = 0;
    bool flagged = false;
    std::vector<signed char> det;           // -1 undetermined
    std::vector<std::vector<int>> folded;   // deduplicated all-moves successors
    std::optional<HorizonCertificate> cert; // computed once
};

// raw_succ(q) enumerates state successors under all action tuples
template <class RawSucc>
Arena build_arena(int num_states, StateId initial, const Objective& obj, RawSucc raw_succ) {
    Arena a;
    a.flagged = obj.kind != ObjectiveKind::Parity;
    a.num_positions = a.flagged ? 2 * num_states : num_states;
    a.initial = a.flagged ? initial * 2 + flag_after(obj, 0, initial) : initial;
    a.folded.resize(a.num_positions);
    for (int pos = 0; pos < a.num_positions; ++pos) {
        int q = a.flagged ? pos / 2 : pos;
        int flag = a.flagged ? pos % 2 : 0;
        std::set<int> out;
        for (StateId q2 : raw_succ(q))
            out.insert(a.flagged ? q2 * 2 + flag_after(obj, flag, q2) : q2);
        a.folded[pos].assign(out.begin(), out.end());
    }
    a.det.assign(a.num_positions, -1);
    switch (obj.kind) {
        case ObjectiveKind::Reach:
        case ObjectiveKind::Safe: {
            signed char flagged_value = obj.kind == ObjectiveKind::Reach ? 1 : 0;
            // positions that can still reach a flagged position
            std::vector<std::vector<int>> rev(a.num_positions);
            for (int pos = 0; pos < a.num_positions; ++pos)
                for (int w : a.folded[pos]) rev[w].push_back(pos);
            std::vector<char> can(a.num_positions, 0);
            std::vector<int> queue;
            for (int pos = 0; pos < a.num_positions; ++pos)
                if (pos % 2 == 1) {
                    can[pos] = 1;
                    queue.push_back(pos);
                }
            for (size_t i = 0; i < queue.size(); ++i)
                for (int u : rev[queue[i]])
                    if (!can[u]) {
                        can[u] = 1;
                        queue.push_back(u);
                    }
            for (int pos = 0; pos < a.num_positions; ++pos) {
                if (pos % 2 == 1) a.det[pos] = flagged_value;
                else if (!can[pos]) a.det[pos] = (signed char)(1 - flagged_value);
            }
            break;
        }
        case ObjectiveKind::Parity: {
            OnePlayerGraph gg{a.num_positions, 0, a.folded};
            std::vector<int> shifted(obj.priority);
            for (int& p : shifted) ++p;
            for (int q = 0; q < a.num_positions; ++q) {
                gg.initial = q;
                bool even = exists_play(gg, Objective::parity(obj.priority)).has_value();
                bool odd = exists_play(gg, Objective::parity(shifted)).has_value();
                if (even && !odd) a.det[q] = 1;
                if (!even && odd) a.det[q] = 0;
            }
            break;
        }
    }
    // longest undetermined path from the initial position; a cycle of
    // undetermined positions means no certificate exists
    std::vector<int> depth(a.num_positions, -1);
    std::vector<char> color(a.num_positions, 0); // 0 white, 1 on stack, 2 done
    bool cyclic = false;
    auto dfs = [&](auto&& self, int pos) -> int {
        if (a.det[pos] != -1) return 0;
        if (color[pos] == 1) {
            cyclic = true;
            return 0;
        }
        if (color[pos] == 2) return depth[pos];
        color[pos] = 1;
        int d = 0;
        for (int w : a.folded[pos]) {
            d = std::max(d, self(self, w));
            if (cyclic) break;
        }
        color[pos] = 2;
        depth[pos] = d + 1;
        return depth[pos];
    };
    int h = dfs(dfs, a.initial);
    if (!cyclic) {
        HorizonCertificate c;
        c.horizon = h;
        c.positions = a.num_positions;
        for (int pos = 0; pos < a.num_positions; ++pos)
            if (a.det[pos] != -1) ++c.determined_positions;
        a.cert = c;
    }
    return a;
}

Arena arena_three(const ThreePlayerGame& g, const Objective& obj) {
    return build_arena(g.num_states(), g.initial, obj, [&](StateId q) {
        std::vector<StateId> out;
        for (int a1 = 0; a1 < g.n1(); ++a1)
            for (int a2 = 0; a2 < g.n2(); ++a2)
                for (int a3 = 0; a3 < g.n3(); ++a3) out.push_back(g.step(q, a1, a2, a3));
        return out;
    });
}

Arena arena_four(const FourPlayerGame& g, const Objective& obj) {
    return build_arena(g.num_states(), g.initial, obj, [&](StateId q) {
        std::vector<StateId> out;
        for (int a1 = 0; a1 < g.n1(); ++a1)
            for (int a2 = 0; a2 < g.n2(); ++a2) {
                if (g.turn[q] == 3)
                    for (int a3 = 0; a3 < g.n3(); ++a3) out.push_back(g.step3(q, a1, a2, a3));
                else
                    for (int a4 = 0; a4 < g.n4(); ++a4) out.push_back(g.step4(q, a1, a2, a4));
            }
        return out;
    });
}

// -------------------------------------------------------------- enumerator --

// observation-history classes as a trie; node identity = whole history
struct Trie {
    std::map<std::pair<int, int>, int> child;
    int nodes = 1; // node 0 = empty history
    int step(int node, int cell) {
        auto [it, inserted] = child.try_emplace({node, cell}, nodes);
        if (inserted) ++nodes;
        return it->second;
    }
};

struct P {
    int pos, n1, n2;
    bool operator<(const P& o) const {
        return std::tie(pos, n1, n2) < std::tie(o.pos, o.n1, o.n2);
    }
    bool operator==(const P& o) const { return pos == o.pos && n1 == o.n1 && n2 == o.n2; }
};

void dedup(std::vector<P>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// The view tells the enumerator how positions move and what the players see.
// `conj_at` marks positions where the inner branching is universal (player 4
// turns); everywhere else it is existential (player 3 resolves).
struct ThreeView {
    const ThreePlayerGame& g;
    const ObservationPartition& obs1;
    const ObservationPartition& obs2;
    const Arena& arena;
    int num_a1() const { return g.n1(); }
    int num_a2() const { return g.n2(); }
    int state_of(int pos) const { return arena.flagged ? pos / 2 : pos; }
    int branches_at(int) const { return g.n3(); }
    bool conj_at(int) const { return false; }
    int step(int pos, int a1, int a2, int br, const Objective& obj) const {
        StateId q2 = g.step(state_of(pos), a1, a2, br);
        return arena.flagged ? q2 * 2 + flag_after(obj, pos % 2, q2) : q2;
    }
    int cell1(int pos) const { return obs1.obs(state_of(pos)); }
    int cell2(int pos) const { return obs2.obs(state_of(pos)); }
};

struct FourView {
    const FourPlayerGame& g;
    const ObservationPartition& obs1;
    const ObservationPartition& obs2;
    const Arena& arena;
    int num_a1() const { return g.n1(); }
    int num_a2() const { return g.n2(); }
    int state_of(int pos) const { return arena.flagged ? pos / 2 : pos; }
    int branches_at(int pos) const { return g.turn[state_of(pos)] == 3 ? g.n3() : g.n4(); }
    bool conj_at(int pos) const { return g.turn[state_of(pos)] == 4; }
    int step(int pos, int a1, int a2, int br, const Objective& obj) const {
        StateId q = state_of(pos);
        StateId q2 = g.turn[q] == 3 ? g.step3(q, a1, a2, br) : g.step4(q, a1, a2, br);
        return arena.flagged ? q2 * 2 + flag_after(obj, pos % 2, q2) : q2;
    }
    int cell1(int pos) const { return obs1.obs(state_of(pos)); }
    int cell2(int pos) const { return obs2.obs(state_of(pos)); }
};

template <class View>
struct Enumerator {
    const View& view;
    const Objective& obj;
    const Arena& arena;
    int horizon;
    long long budget;
    long long used = 0;
    Trie t1, t2;
    std::map<int, int> s1, s2; // trie node -> assigned action
    long long sigma1_candidates = 0, evaluations = 0;
    // eval decides the fixed (s1, s2) pair
    std::function<bool(Enumerator&)> eval;

    Enumerator(const View& v, const Objective& o, const Arena& a, int h, long long b)
        : view(v), obj(o), arena(a), horizon(h), budget(b) {}

    void charge(long long amount) {
        used += amount;
        if (used > budget) throw BudgetError("oracle enumeration budget exceeded");
    }

    P initial_prefix() {
        int pos = arena.initial;
        return {pos, t1.step(0, view.cell1(pos)), t2.step(0, view.cell2(pos))};
    }

    bool decide() {
        if (arena.det[arena.initial] != -1) return arena.det[arena.initial] == 1;
        std::vector<P> fr{initial_prefix()};
        return exists1(fr, 0);
    }

    bool exists1(const std::vector<P>& fr, int depth) {
        if (fr.empty() || depth == horizon) {
            ++sigma1_candidates;
            return forall2();
        }
        std::vector<int> classes;
        for (const P& p : fr) classes.push_back(p.n1);
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        std::vector<int> combo(classes.size(), 0);
        while (true) {
            charge(1);
            for (size_t i = 0; i < classes.size(); ++i) s1[classes[i]] = combo[i];
            std::vector<P> next;
            for (const P& p : fr) {
                int a1 = s1[p.n1];
                for (int a2 = 0; a2 < view.num_a2(); ++a2)
                    for (int br = 0; br < view.branches_at(p.pos); ++br) {
                        charge(1);
                        int pos2 = view.step(p.pos, a1, a2, br, obj);
                        if (arena.det[pos2] != -1) continue;
                        next.push_back({pos2, t1.step(p.n1, view.cell1(pos2)),
                                        t2.step(p.n2, view.cell2(pos2))});
                    }
            }
            dedup(next);
            if (exists1(next, depth + 1)) return true;
            for (int c : classes) s1.erase(c);
            // odometer over the class assignments
            size_t i = 0;
            while (i < combo.size()) {
                if (++combo[i] < view.num_a1()) break;
                combo[i++] = 0;
            }
            if (i == combo.size()) break;
        }
        return false;
    }

    bool forall2() {
        std::vector<P> fr{initial_prefix()};
        return forall2_rec(fr, 0);
    }

    bool forall2_rec(const std::vector<P>& fr, int depth) {
        if (fr.empty() || depth == horizon) {
            ++evaluations;
            charge(8);
            return eval(*this);
        }
        std::vector<int> classes;
        for (const P& p : fr) classes.push_back(p.n2);
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        std::vector<int> combo(classes.size(), 0);
        while (true) {
            charge(1);
            for (size_t i = 0; i < classes.size(); ++i) s2[classes[i]] = combo[i];
            std::vector<P> next;
            for (const P& p : fr) {
                int a1 = s1.at(p.n1);
                int a2 = s2[p.n2];
                for (int br = 0; br < view.branches_at(p.pos); ++br) {
                    charge(1);
                    int pos2 = view.step(p.pos, a1, a2, br, obj);
                    if (arena.det[pos2] != -1) continue;
                    next.push_back(
                        {pos2, t1.step(p.n1, view.cell1(pos2)), t2.step(p.n2, view.cell2(pos2))});
                }
            }
            dedup(next);
            bool ok = forall2_rec(next, depth + 1);
            for (int c : classes) s2.erase(c);
            if (!ok) return false;
            size_t i = 0;
            while (i < combo.size()) {
                if (++combo[i] < view.num_a2()) break;
                combo[i++] = 0;
            }
            if (i == combo.size()) break;
        }
        return true;
    }
};

// exists a satisfying play of the fixed pair: develop the branching tree,
// looking for a determined-YES prefix
template <class View>
bool eval_play_search(Enumerator<View>& e) {
    std::vector<P> fr{e.initial_prefix()};
    for (int depth = 0; depth <= e.horizon; ++depth) {
        if (fr.empty()) return false;
        assert(depth < e.horizon);
        std::vector<P> next;
        for (const P& p : fr) {
            int a1 = e.s1.at(p.n1);
            int a2 = e.s2.at(p.n2);
            for (int br = 0; br < e.view.branches_at(p.pos); ++br) {
                e.charge(1);
                int pos2 = e.view.step(p.pos, a1, a2, br, e.obj);
                if (e.arena.det[pos2] == 1) return true;
                if (e.arena.det[pos2] == 0) continue;
                next.push_back({pos2, e.t1.step(p.n1, e.view.cell1(pos2)),
                                e.t2.step(p.n2, e.view.cell2(pos2))});
            }
        }
        dedup(next);
        fr = std::move(next);
    }
    return false;
}

// minimax over the developed prefix graph: existential branching at player-3
// turns, universal at player-4 turns
template <class View>
bool eval_minimax(Enumerator<View>& e) {
    std::map<std::tuple<int, int, int>, char> memo;
    auto rec = [&](auto&& self, P p, int depth) -> bool {
        assert(depth <= e.horizon);
        auto key = std::make_tuple(p.pos, p.n1, p.n2);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        int a1 = e.s1.at(p.n1);
        int a2 = e.s2.at(p.n2);
        bool conj = e.view.conj_at(p.pos);
        bool value = conj;
        for (int br = 0; br < e.view.branches_at(p.pos); ++br) {
            e.charge(1);
            int pos2 = e.view.step(p.pos, a1, a2, br, e.obj);
            bool v;
            if (e.arena.det[pos2] != -1) {
                v = e.arena.det[pos2] == 1;
            } else {
                v = self(self, {pos2, e.t1.step(p.n1, e.view.cell1(pos2)),
                                e.t2.step(p.n2, e.view.cell2(pos2))},
                         depth + 1);
            }
            if (conj) {
                value = value && v;
                if (!value) break;
            } else {
                value = value || v;
                if (value) break;
            }
        }
        memo[key] = (char)value;
        return value;
    };
    return rec(rec, e.initial_prefix(), 0);
}

} // namespace

// -------------------------------------------------------------- public API --

std::optional<HorizonCertificate> horizon_certificate(const ThreePlayerGame& g, const Objective& obj) {
    return arena_three(g, obj).cert;
}

std::optional<HorizonCertificate> horizon_certificate(const FourPlayerGame& g, const Objective& obj) {
    return arena_four(g, obj).cert;
}

Verdict brute_force_three(const ThreePlayerGame& g, const ObservationPartition& obs1,
                          const ObservationPartition& obs2, const Objective& obj, int h,
                          long long budget) {
    g.validate();
    Arena arena = arena_three(g, obj);
    if (!arena.cert)
        throw OracleError("no horizon certificate: some play stays undetermined forever");
    if (arena.cert->horizon > h)
        throw OracleError("horizon certificate needs " + std::to_string(arena.cert->horizon) +
                          " steps, caller allowed " + std::to_string(h));
    ThreeView view{g, obs1, obs2, arena};
    Enumerator<ThreeView> e(view, obj, arena, arena.cert->horizon, budget);
    e.eval = [](Enumerator<ThreeView>& en) { return eval_play_search(en); };
    bool yes = e.decide();
    Verdict v;
    v.answer = yes ? Answer::Yes : Answer::No;
    v.method = "brute-force-three";
    v.complete = true;
    v.diagnostics["horizon"] = arena.cert->horizon;
    v.diagnostics["sigma1_candidates"] = e.sigma1_candidates;
    v.diagnostics["pair_evaluations"] = e.evaluations;
    return v;
}

Verdict brute_force_four(const FourPlayerGame& g, const ObservationPartition& obs1,
                         const ObservationPartition& obs2, const Objective& obj, int h,
                         long long budget) {
    g.validate();
    Arena arena = arena_four(g, obj);
    if (!arena.cert)
        throw OracleError("no horizon certificate: some play stays undetermined forever");
    if (arena.cert->horizon > h)
        throw OracleError("horizon certificate needs " + std::to_string(arena.cert->horizon) +
                          " steps, caller allowed " + std::to_string(h));
    FourView view{g, obs1, obs2, arena};
    Enumerator<FourView> e(view, obj, arena, arena.cert->horizon, budget);
    e.eval = [](Enumerator<FourView>& en) { return eval_minimax(en); };
    bool yes = e.decide();
    Verdict v;
    v.answer = yes ? Answer::Yes : Answer::No;
    v.method = "brute-force-four";
    v.complete = true;
    v.diagnostics["horizon"] = arena.cert->horizon;
    v.diagnostics["sigma1_candidates"] = e.sigma1_candidates;
    v.diagnostics["pair_evaluations"] = e.evaluations;
    return v;
}

void MarkovChain::validate() const {
    if ((int)rows.size() != num_states) throw ValidationError("chain rows not total");
    for (const auto& row : rows) {
        Rat sum;
        for (const auto& [t, p] : row) {
            if (t < 0 || t >= num_states) throw ValidationError("chain target out of range");
            if (p.num < 0) throw ValidationError("negative probability");
            sum = sum + p;
        }
        if (!(sum == Rat::one())) throw ValidationError("chain row sums to " + sum.str());
    }
}

Qualitative markov_qualitative(const MarkovChain& mc, const std::vector<char>& target) {
    mc.validate();
    int n = mc.num_states;
    // support graph with the target made absorbing (reach verdicts invariant)
    std::vector<std::vector<int>> succ(n);
    for (int q = 0; q < n; ++q) {
        if (target[q]) {
            succ[q] = {q};
            continue;
        }
        for (const auto& [t, p] : mc.rows[q])
            if (p.positive()) succ[q].push_back(t);
    }
    std::vector<char> reachable(n, 0);
    std::vector<int> queue{mc.initial};
    reachable[mc.initial] = 1;
    for (size_t i = 0; i < queue.size(); ++i)
        for (int w : succ[queue[i]])
            if (!reachable[w]) {
                reachable[w] = 1;
                queue.push_back(w);
            }
    bool positive = false;
    for (int q = 0; q < n; ++q)
        if (reachable[q] && target[q]) positive = true;
    if (!positive) return Qualitative::Zero;
    // probability one iff every reachable bottom SCC lies inside the target
    std::vector<int> comp = scc_of(succ, reachable);
    int comps = 0;
    for (int q = 0; q < n; ++q)
        if (reachable[q]) comps = std::max(comps, comp[q] + 1);
    std::vector<char> bottom(comps, 1);
    for (int q = 0; q < n; ++q) {
        if (!reachable[q]) continue;
        for (int w : succ[q])
            if (comp[w] != comp[q]) bottom[comp[q]] = 0;
    }
    for (int q = 0; q < n; ++q)
        if (reachable[q] && bottom[comp[q]] && !target[q]) return Qualitative::Positive;
    return Qualitative::One;
}

bool check_lemma_uniform(const ThreePlayerGame& g, const ObservationPartition& obs1,
                         const ObservationPartition& obs2, const std::vector<char>& target, int h,
                         long long budget) {
    Objective obj = Objective::reach(target);
    Verdict lhs = brute_force_three(g, obs1, obs2, obj, h, budget);

    Arena arena = arena_three(g, obj);
    // same certificate governs the uniform game: its support graph per
    // action pair is exactly the player-3 fold
    ThreeView view{g, obs1, obs2, arena};
    Enumerator<ThreeView> e(view, obj, arena, arena.cert->horizon, budget);
    e.eval = [](Enumerator<ThreeView>& en) {
        // chain over developed prefixes, uniform over player-3 branches;
        // sentinel 0 = determined NO, sentinel 1 = determined YES
        std::map<std::tuple<int, int, int>, int> index;
        std::vector<P> nodes;
        std::vector<P> queue{en.initial_prefix()};
        index[{queue[0].pos, queue[0].n1, queue[0].n2}] = 2;
        nodes.push_back(queue[0]);
        MarkovChain mc;
        mc.rows.push_back({{0, Rat::one()}});
        mc.rows.push_back({{1, Rat::one()}});
        mc.rows.emplace_back(); // row of the initial node
        while (!queue.empty()) {
            P p = queue.back();
            queue.pop_back();
            int branches = en.view.branches_at(p.pos);
            std::map<int, int> weight; // chain node -> branch count
            int a1 = en.s1.at(p.n1);
            int a2 = en.s2.at(p.n2);
            for (int br = 0; br < branches; ++br) {
                en.charge(1);
                int pos2 = en.view.step(p.pos, a1, a2, br, en.obj);
                int node;
                if (en.arena.det[pos2] != -1) {
                    node = en.arena.det[pos2] == 1 ? 1 : 0;
                } else {
                    P p2{pos2, en.t1.step(p.n1, en.view.cell1(pos2)),
                         en.t2.step(p.n2, en.view.cell2(pos2))};
                    auto [it, inserted] = index.try_emplace({p2.pos, p2.n1, p2.n2},
                                                            (int)nodes.size() + 2);
                    if (inserted) {
                        nodes.push_back(p2);
                        queue.push_back(p2);
                        mc.rows.emplace_back();
                    }
                    node = it->second;
                }
                ++weight[node];
            }
            auto key = index.at({p.pos, p.n1, p.n2});
            auto& row = mc.rows[key];
            for (const auto& [node, w] : weight) row.emplace_back(node, Rat(w, branches));
        }
        mc.num_states = (int)nodes.size() + 2;
        mc.initial = 2;
        std::vector<char> tgt(mc.num_states, 0);
        tgt[1] = 1;
        return markov_qualitative(mc, tgt) != Qualitative::Zero;
    };
    bool rhs;
    if (arena.det[arena.initial] != -1) {
        rhs = arena.det[arena.initial] == 1;
    } else {
        rhs = e.decide();
    }
    return (lhs.answer == Answer::Yes) == rhs;
}

ClassCounts strategy_class_counts(const ThreePlayerGame& g, const ObservationPartition& obs1,
                                  const ObservationPartition& obs2, const Objective& obj, int h) {
    Arena arena = arena_three(g, obj);
    if (!arena.cert || arena.cert->horizon > h)
        throw OracleError("strategy_class_counts requires a horizon certificate");
    ThreeView view{g, obs1, obs2, arena};
    Trie t1, t2;
    std::set<int> c1, c2;
    if (arena.det[arena.initial] != -1) return {0, 0};
    std::vector<P> fr{{arena.initial, t1.step(0, view.cell1(arena.initial)),
                       t2.step(0, view.cell2(arena.initial))}};
    for (int depth = 0; depth < arena.cert->horizon && !fr.empty(); ++depth) {
        for (const P& p : fr) {
            c1.insert(p.n1);
            c2.insert(p.n2);
        }
        std::vector<P> next;
        for (const P& p : fr)
            for (int a1 = 0; a1 < g.n1(); ++a1)
                for (int a2 = 0; a2 < g.n2(); ++a2)
                    for (int br = 0; br < g.n3(); ++br) {
                        int pos2 = view.step(p.pos, a1, a2, br, obj);
                        if (arena.det[pos2] != -1) continue;
                        next.push_back({pos2, t1.step(p.n1, view.cell1(pos2)),
                                        t2.step(p.n2, view.cell2(pos2))});
                    }
        dedup(next);
        fr = std::move(next);
    }
    return {(long long)c1.size(), (long long)c2.size()};
}

} // namespace wag
