#include "wag/reductions.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace wag {

VisibleProduct make_visible(const ThreePlayerGame& g, const ObservationPartition& obs1,
                            const ObservationPartition& obs2, const Objective& obj) {
    if (obj.kind == ObjectiveKind::Parity)
        throw PreconditionError("make_visible expects a reachability or safety objective");
    bool reach = obj.kind == ObjectiveKind::Reach;
    int n = g.num_states();

    VisibleProduct vp;
    ThreePlayerGame& p = vp.game;
    p.a1_names = g.a1_names;
    p.a2_names = g.a2_names;
    p.a3_names = g.a3_names;
    // full product in document order: (q, 0), (q, 1)
    for (int q = 0; q < n; ++q)
        for (int flag = 0; flag < 2; ++flag) {
            p.state_names.push_back(g.state_names[q] + (flag ? "#1" : "#0"));
            vp.factors.push_back({q, flag});
        }
    auto flips = [&](StateId q) { return reach ? (bool)obj.target[q] : !obj.target[q]; };
    auto pidx = [&](StateId q, int flag) { return q * 2 + flag; };
    p.initial = pidx(g.initial, flips(g.initial) ? 1 : 0);
    p.table.assign((long long)2 * n * g.n1() * g.n2() * g.n3(), 0);
    for (int q = 0; q < n; ++q)
        for (int flag = 0; flag < 2; ++flag)
            for (int a1 = 0; a1 < g.n1(); ++a1)
                for (int a2 = 0; a2 < g.n2(); ++a2)
                    for (int a3 = 0; a3 < g.n3(); ++a3) {
                        StateId to;
                        if (flag == 1) {
                            to = pidx(q, 1); // flag-1 states are absorbing
                        } else {
                            StateId q2 = g.step(q, a1, a2, a3);
                            to = pidx(q2, flips(q2) ? 1 : 0);
                        }
                        p.at(pidx(q, flag), a1, a2, a3) = to;
                    }

    auto refine = [&](const ObservationPartition& base) {
        std::vector<std::vector<StateId>> cells;
        for (const auto& cell : base.cells)
            for (int flag = 0; flag < 2; ++flag) {
                std::vector<StateId> c;
                for (StateId q : cell) c.push_back(pidx(q, flag));
                cells.push_back(c);
            }
        return ObservationPartition::from_cells(2 * n, cells);
    };
    vp.obs1 = refine(obs1);
    vp.obs2 = refine(obs2);

    // reach: flagged states get the good priority; safe: unflagged ones
    std::vector<int> prio(2 * n);
    for (int q = 0; q < n; ++q)
        for (int flag = 0; flag < 2; ++flag)
            prio[pidx(q, flag)] = reach ? (flag ? 0 : 1) : (flag ? 1 : 0);
    vp.parity = Objective::parity(std::move(prio));
    return vp;
}

int lift_priority(const Objective& parity, const std::vector<StateId>& knowledge) {
    if (parity.kind != ObjectiveKind::Parity)
        throw PreconditionError("lift_priority expects a parity objective");
    if (knowledge.empty()) throw PreconditionError("lift_priority of an empty knowledge");
    int p = parity.priority[knowledge[0]];
    for (StateId q : knowledge)
        if (parity.priority[q] != p)
            throw VisibilityError("mixed priorities inside a knowledge state: objective not "
                                  "visible for player 2");
    return p;
}

std::vector<StateId> knowledge_step(const ThreePlayerGame& g, const std::vector<StateId>& s,
                                    ActionId a1, ActionId a2, const std::vector<StateId>& cell) {
    std::vector<StateId> p = post(g, s, a1, a2);
    std::vector<StateId> out;
    std::set_intersection(p.begin(), p.end(), cell.begin(), cell.end(), std::back_inserter(out));
    return out;
}

int KnowledgeGame::delta(int s, ActionId a1, ActionId a2, CellId announced_cell,
                         const ThreePlayerGame& base, const ObservationPartition& obs2) const {
    std::vector<StateId> next = knowledge_step(base, states[s], a1, a2, obs2.cells[announced_cell]);
    if (next.empty()) return sink_index();
    for (int i = 0; i < num_states(); ++i)
        if (states[i] == next) return i;
    // reachable closure contains every non-empty update of a materialized state
    throw std::logic_error("knowledge update left the materialized state space");
}

KnowledgeGame build_knowledge_game(const ThreePlayerGame& g, const ObservationPartition& obs1,
                                   const ObservationPartition& obs2, const Objective& parity,
                                   long long budget) {
    g.validate();
    if (parity.kind != ObjectiveKind::Parity)
        throw PreconditionError("knowledge construction expects a parity objective");
    if (!less_informed(obs1, obs2))
        throw PreconditionError("player 1 must be less informed than player 2");
    for (const auto& cell : obs2.cells) lift_priority(parity, cell); // obs2-visibility

    KnowledgeGame h;
    h.a1_count = g.n1();
    h.a2_count = g.n2();
    h.num_obs1_cells = obs1.num_cells();
    for (const auto& cell : obs2.cells) {
        if (cell.size() >= 62 || h.candidate_count >= (1ll << 62)) {
            h.candidate_count = std::numeric_limits<long long>::max(); // saturated
            break;
        }
        h.candidate_count += (1ll << cell.size()) - 1;
    }

    std::map<std::vector<StateId>, int> index;
    std::vector<StateId> init{g.initial};
    index[init] = 0;
    h.states.push_back(init);
    std::vector<int> queue{0};
    while (!queue.empty()) {
        int s = queue.back();
        queue.pop_back();
        if ((int)h.menus.size() <= s) h.menus.resize(h.states.size());
        auto& menu = h.menus[s];
        menu.assign(g.n1(), {});
        for (int a1 = 0; a1 < g.n1(); ++a1) {
            menu[a1].assign(g.n2(), {});
            for (int a2 = 0; a2 < g.n2(); ++a2) {
                std::vector<StateId> p = post(g, h.states[s], a1, a2);
                for (CellId c = 0; c < obs2.num_cells(); ++c) {
                    std::vector<StateId> next;
                    std::set_intersection(p.begin(), p.end(), obs2.cells[c].begin(),
                                          obs2.cells[c].end(), std::back_inserter(next));
                    if (next.empty()) continue;
                    auto [it, inserted] = index.try_emplace(next, (int)h.states.size());
                    if (inserted) {
                        if ((long long)h.states.size() >= budget)
                            throw BudgetError("knowledge construction exceeded the vertex budget");
                        h.states.push_back(next);
                        queue.push_back(it->second);
                    }
                    menu[a1][a2].push_back({c, it->second});
                }
            }
        }
    }
    h.menus.resize(h.states.size());

    h.obs1_cell.resize(h.num_states());
    h.priority.resize(h.num_states());
    for (int s = 0; s < h.num_states(); ++s) {
        CellId c = obs1.obs(h.states[s][0]);
        for (StateId q : h.states[s])
            if (obs1.obs(q) != c)
                throw std::logic_error("knowledge state crosses an obs1 cell");
        h.obs1_cell[s] = c;
        h.priority[s] = lift_priority(parity, h.states[s]);
    }
    h.sink_obs1_cell = h.obs1_cell[h.initial];
    return h;
}

MergedGame four_to_three(const FourPlayerGame& g, const ObservationPartition& obs1,
                         const ObservationPartition& obs2, const Objective& obj,
                         long long budget) {
    g.validate();
    if (!less_informed(obs1, obs2))
        throw PreconditionError("player 1 must be less informed than player 2");

    MergedGame m;
    m.obs1 = obs1;
    m.obs2 = obs2;
    m.objective = obj;
    for (int q = 0; q < g.num_states(); ++q)
        if (g.turn[q] == 4) m.q4_states.push_back(q);

    long long combos = 1;
    for (size_t i = 0; i < m.q4_states.size(); ++i) {
        combos *= g.n4();
        if (combos > budget) throw BudgetError("resolver table space exceeds the budget");
    }
    // composite actions in lexicographic order: base action, then resolver
    // entries in Q4 document order
    for (int a2 = 0; a2 < g.n2(); ++a2) {
        std::vector<ActionId> resolver(m.q4_states.size(), 0);
        while (true) {
            m.actions24.push_back({a2, resolver});
            size_t i = resolver.size();
            while (i > 0) {
                if (++resolver[i - 1] < g.n4()) break;
                resolver[--i] = 0;
            }
            if (i == 0) break;
        }
    }

    ThreePlayerGame& out = m.game;
    out.state_names = g.state_names;
    out.initial = g.initial;
    out.a1_names = g.a1_names;
    out.a3_names = g.a3_names;
    std::vector<int> q4_pos(g.num_states(), -1);
    for (size_t i = 0; i < m.q4_states.size(); ++i) q4_pos[m.q4_states[i]] = (int)i;
    for (const auto& act : m.actions24) {
        std::string name = g.a2_names[act.base];
        for (size_t i = 0; i < act.resolver.size(); ++i)
            name += "|" + g.state_names[m.q4_states[i]] + ":" + g.a4_names[act.resolver[i]];
        out.a2_names.push_back(name);
    }
    out.table.assign((long long)g.num_states() * g.n1() * m.actions24.size() * g.n3(), 0);
    for (int q = 0; q < g.num_states(); ++q)
        for (int a1 = 0; a1 < g.n1(); ++a1)
            for (size_t c = 0; c < m.actions24.size(); ++c) {
                const auto& act = m.actions24[c];
                for (int a3 = 0; a3 < g.n3(); ++a3) {
                    StateId to = g.turn[q] == 3 ? g.step3(q, a1, act.base, a3)
                                                : g.step4(q, a1, act.base, act.resolver[q4_pos[q]]);
                    out.at(q, a1, (ActionId)c, a3) = to;
                }
            }
    out.validate();
    return m;
}

StochasticGame uniform(const ThreePlayerGame& g) {
    g.validate();
    StochasticGame sg;
    sg.state_names = g.state_names;
    sg.a1_names = g.a1_names;
    sg.a2_names = g.a2_names;
    sg.initial = g.initial;
    sg.dists.resize((long long)g.num_states() * g.n1() * g.n2());
    for (int q = 0; q < g.num_states(); ++q)
        for (int a1 = 0; a1 < g.n1(); ++a1)
            for (int a2 = 0; a2 < g.n2(); ++a2) {
                std::map<StateId, int> counts;
                for (int a3 = 0; a3 < g.n3(); ++a3) ++counts[g.step(q, a1, a2, a3)];
                auto& d = sg.dists[(q * g.n1() + a1) * g.n2() + a2];
                for (const auto& [t, c] : counts) d.emplace_back(t, Rat(c, g.n3()));
            }
    sg.validate();
    return sg;
}

ThreePlayerGame support_game(const StochasticGame& sg) {
    sg.validate();
    size_t max_support = 1;
    for (const auto& d : sg.dists) {
        size_t s = 0;
        for (const auto& [t, p] : d)
            if (p.positive()) ++s;
        max_support = std::max(max_support, s);
    }
    ThreePlayerGame g;
    g.state_names = sg.state_names;
    g.a1_names = sg.a1_names;
    g.a2_names = sg.a2_names;
    g.initial = sg.initial;
    for (size_t i = 1; i <= max_support; ++i) g.a3_names.push_back("c" + std::to_string(i));
    g.table.assign((long long)sg.num_states() * sg.n1() * sg.n2() * max_support, 0);
    for (int q = 0; q < sg.num_states(); ++q)
        for (int a1 = 0; a1 < sg.n1(); ++a1)
            for (int a2 = 0; a2 < sg.n2(); ++a2) {
                std::vector<StateId> support;
                for (const auto& [t, p] : sg.dist(q, a1, a2))
                    if (p.positive()) support.push_back(t); // already in state order
                for (size_t i = 0; i < max_support; ++i)
                    g.at(q, a1, a2, (ActionId)i) = support[std::min(i, support.size() - 1)];
            }
    g.validate();
    return g;
}

// Almost-sure equivalence needs the parity form, visible for the partial
// players. Reach/safe enter through the one-bit flag product. When any
// genuine coin exists, every transition is routed through the gadget so the
// step rhythm carries no information, and observation cells are refined by
// gadget stage (entry / coin pass-through / other resolution) so the lifted
// priorities stay constant per cell. Only coin pass-throughs take the even
// floor: a demon resolving a recurring coin adversarially forever concedes
// the luck the chain delivers almost surely.
GadgetResult gadget(const StochasticGame& sg_in, const ObservationPartition& obs1_in,
                    const ObservationPartition& obs2_in, const Objective& obj) {
    sg_in.validate();

    bool has_coin = false;
    for (const auto& d : sg_in.dists) {
        int supp = 0;
        for (const auto& [t, p] : d)
            if (p.positive()) ++supp;
        has_coin = has_coin || supp > 1;
    }
    if (!has_coin) {
        // nothing to resolve: a copy with dummy chooser players
        GadgetResult r;
        FourPlayerGame& g = r.game;
        g.state_names = sg_in.state_names;
        g.initial = sg_in.initial;
        g.a1_names = sg_in.a1_names;
        g.a2_names = sg_in.a2_names;
        g.a3_names = {"c1"};
        g.a4_names = {"d1"};
        int n = sg_in.num_states();
        g.turn.assign(n, 3);
        g.table3.assign((long long)n * g.n1() * g.n2(), 0);
        g.table4.assign((long long)n * g.n1() * g.n2(), 0);
        for (int q = 0; q < n; ++q)
            for (int a1 = 0; a1 < g.n1(); ++a1)
                for (int a2 = 0; a2 < g.n2(); ++a2)
                    for (const auto& [t, p] : sg_in.dist(q, a1, a2))
                        if (p.positive())
                            g.table3[(q * g.n1() + a1) * g.n2() + a2] = t;
        g.validate();
        r.obs1 = obs1_in;
        r.obs2 = obs2_in;
        r.objective = obj;
        r.gadget_states = 0;
        return r;
    }

    // flag product for reach/safe: decided states absorbing, partitions
    // refined by the flag, priorities in {0, 1}
    StochasticGame sg;
    ObservationPartition obs1 = obs1_in, obs2 = obs2_in;
    std::vector<int> base_priority;
    if (obj.kind == ObjectiveKind::Parity) {
        sg = sg_in;
        base_priority = obj.priority;
        for (const auto& cell : obs2.cells)
            lift_priority(obj, cell); // visibility for player 2
    } else {
        bool reach = obj.kind == ObjectiveKind::Reach;
        int n0 = sg_in.num_states();
        auto flips = [&](StateId q) { return reach ? (bool)obj.target[q] : !obj.target[q]; };
        auto pidx = [&](StateId q, int flag) { return q * 2 + flag; };
        sg.a1_names = sg_in.a1_names;
        sg.a2_names = sg_in.a2_names;
        for (int q = 0; q < n0; ++q)
            for (int flag = 0; flag < 2; ++flag)
                sg.state_names.push_back(sg_in.state_names[q] + (flag ? "#1" : "#0"));
        sg.initial = pidx(sg_in.initial, flips(sg_in.initial) ? 1 : 0);
        sg.dists.resize((long long)2 * n0 * sg.n1() * sg.n2());
        for (int q = 0; q < n0; ++q)
            for (int flag = 0; flag < 2; ++flag)
                for (int a1 = 0; a1 < sg.n1(); ++a1)
                    for (int a2 = 0; a2 < sg.n2(); ++a2) {
                        auto& d = sg.dists[((pidx(q, flag) * sg.n1()) + a1) * sg.n2() + a2];
                        if (flag == 1) {
                            d = {{pidx(q, 1), Rat::one()}};
                            continue;
                        }
                        for (const auto& [t, p] : sg_in.dist(q, a1, a2))
                            d.emplace_back(pidx(t, flips(t) ? 1 : 0), p);
                    }
        auto refine = [&](const ObservationPartition& base) {
            std::vector<std::vector<StateId>> cells;
            for (const auto& cell : base.cells)
                for (int flag = 0; flag < 2; ++flag) {
                    std::vector<StateId> c;
                    for (StateId q : cell) c.push_back(pidx(q, flag));
                    cells.push_back(c);
                }
            return ObservationPartition::from_cells(2 * n0, cells);
        };
        obs1 = refine(obs1_in);
        obs2 = refine(obs2_in);
        base_priority.assign(2 * n0, 0);
        for (int q = 0; q < n0; ++q)
            for (int flag = 0; flag < 2; ++flag)
                base_priority[pidx(q, flag)] = reach ? (flag ? 0 : 1) : (flag ? 1 : 0);
        sg.validate();
    }
    int n = sg.num_states();

    struct Move {
        StateId q;
        ActionId a1, a2;
        std::vector<StateId> support;
    };
    std::vector<Move> moves;
    size_t max_support = 1;
    for (int q = 0; q < n; ++q)
        for (int a1 = 0; a1 < sg.n1(); ++a1)
            for (int a2 = 0; a2 < sg.n2(); ++a2) {
                std::vector<StateId> support;
                for (const auto& [t, p] : sg.dist(q, a1, a2))
                    if (p.positive()) support.push_back(t);
                max_support = std::max(max_support, support.size());
                moves.push_back({q, a1, a2, support});
            }

    GadgetResult r;
    FourPlayerGame& g = r.game;
    g.state_names = sg.state_names;
    g.initial = sg.initial;
    g.a1_names = sg.a1_names;
    g.a2_names = sg.a2_names;
    for (size_t i = 1; i <= max_support; ++i) g.a3_names.push_back("c" + std::to_string(i));
    for (size_t i = 1; i <= max_support + 1; ++i) g.a4_names.push_back("d" + std::to_string(i));

    // stage states per move: entry, then per support element a pass-through,
    // plus a delegate stage for genuine coins
    enum Tag { TagEntry = 0, TagCoinPass = 1, TagOther = 2 };
    std::vector<int> stage_tag;  // per gadget state
    std::vector<StateId> source; // per gadget state
    std::vector<int> entry(moves.size());
    std::vector<int> delegate(moves.size(), -1);
    std::vector<std::vector<int>> passes(moves.size());
    auto add_state = [&](const std::string& name, StateId src, int tag) {
        int id = (int)g.state_names.size();
        g.state_names.push_back(name);
        source.push_back(src);
        stage_tag.push_back(tag);
        return id;
    };
    for (size_t i = 0; i < moves.size(); ++i) {
        const Move& mv = moves[i];
        std::string tag =
            sg.state_names[mv.q] + "/" + sg.a1_names[mv.a1] + "/" + sg.a2_names[mv.a2];
        bool coin = mv.support.size() > 1;
        entry[i] = add_state("g!" + tag, mv.q, TagEntry);
        for (StateId s : mv.support)
            passes[i].push_back(add_state("gr" + tag + "/" + sg.state_names[s], mv.q,
                                          coin ? TagCoinPass : TagOther));
        if (coin) delegate[i] = add_state("g?" + tag, mv.q, TagOther);
    }
    int total = (int)g.state_names.size();
    r.gadget_states = total - n;

    g.turn.assign(total, 3);
    for (size_t i = 0; i < moves.size(); ++i)
        if (delegate[i] != -1) g.turn[entry[i]] = 4; // demon turns only at coins

    g.table3.assign((long long)total * g.n1() * g.n2() * g.n3(), 0);
    g.table4.assign((long long)total * g.n1() * g.n2() * g.n4(), 0);
    auto set3_all = [&](StateId q, StateId to) {
        for (int a1 = 0; a1 < g.n1(); ++a1)
            for (int a2 = 0; a2 < g.n2(); ++a2)
                for (int a3 = 0; a3 < g.n3(); ++a3)
                    g.table3[((q * g.n1() + a1) * g.n2() + a2) * g.n3() + a3] = to;
    };
    for (size_t i = 0; i < moves.size(); ++i) {
        const Move& mv = moves[i];
        int k = (int)mv.support.size();
        // base state enters the gadget on this action profile
        for (int a3 = 0; a3 < g.n3(); ++a3)
            g.table3[((mv.q * g.n1() + mv.a1) * g.n2() + mv.a2) * g.n3() + a3] = entry[i];
        if (delegate[i] == -1) {
            set3_all(entry[i], passes[i][0]);
        } else {
            for (int a1 = 0; a1 < g.n1(); ++a1)
                for (int a2 = 0; a2 < g.n2(); ++a2)
                    for (int a4 = 0; a4 < g.n4(); ++a4) {
                        StateId to = a4 < k ? passes[i][a4] : delegate[i];
                        g.table4[((entry[i] * g.n1() + a1) * g.n2() + a2) * g.n4() + a4] = to;
                    }
            for (int a1 = 0; a1 < g.n1(); ++a1)
                for (int a2 = 0; a2 < g.n2(); ++a2)
                    for (int a3 = 0; a3 < g.n3(); ++a3)
                        g.table3[((delegate[i] * g.n1() + a1) * g.n2() + a2) * g.n3() + a3] =
                            mv.support[std::min(a3, k - 1)];
        }
        for (int j = 0; j < k; ++j) set3_all(passes[i][j], mv.support[j]);
    }
    g.validate();

    // cells refined by gadget stage so the lifted priorities remain visible
    auto extend = [&](const ObservationPartition& base) {
        std::vector<std::vector<StateId>> cells(base.cells.begin(), base.cells.end());
        std::map<std::pair<CellId, int>, std::vector<StateId>> staged;
        for (int s = n; s < total; ++s)
            staged[{base.obs(source[s - n]), stage_tag[s - n]}].push_back(s);
        for (auto& [key, cell] : staged) cells.push_back(std::move(cell));
        return ObservationPartition::from_cells(total, cells);
    };
    r.obs1 = extend(obs1);
    r.obs2 = extend(obs2);

    std::vector<int> p(total, 0);
    for (int q = 0; q < n; ++q) p[q] = base_priority[q];
    for (int s = n; s < total; ++s) {
        int src = base_priority[source[s - n]];
        p[s] = stage_tag[s - n] == TagCoinPass ? (src / 2) * 2 : src;
    }
    r.objective = Objective::parity(std::move(p));
    return r;
}

} // namespace wag
