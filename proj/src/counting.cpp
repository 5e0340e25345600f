#include "wag/counting.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace wag {

namespace {

constexpr long long kSaturation = 1'000'000'000'000'000'000ll;

long long add_counts(long long a, long long b) {
    if (a == CountingFunction::omega || b == CountingFunction::omega)
        return CountingFunction::omega;
    long long s = a + b;
    return s > kSaturation ? kSaturation : s;
}

// per-state action maps generalize the single-action step; phi[i] is the
// action of the i-th support state
CountingFunction step_phi(const CountingFunction& c, const std::vector<StateId>& supp,
                          const std::vector<ActionId>& phi, ActionId a2,
                          const std::vector<StateId>& cell, const ThreePlayerGame& g) {
    CountingFunction out;
    out.count.assign(g.num_states(), 0);
    std::vector<char> in_cell(g.num_states(), 0);
    for (StateId q : cell) in_cell[q] = 1;
    for (size_t i = 0; i < supp.size(); ++i) {
        StateId q = supp[i];
        for (int a3 = 0; a3 < g.n3(); ++a3) {
            StateId q2 = g.step(q, phi[i], a2, a3);
            if (in_cell[q2]) out.count[q2] = add_counts(out.count[q2], c.count[q]);
        }
    }
    return out;
}

} // namespace

CountingFunction counting_root(const ThreePlayerGame& g) {
    CountingFunction c;
    c.count.assign(g.num_states(), 0);
    c.count[g.initial] = 1;
    return c;
}

CountingFunction counting_step(const CountingFunction& c, ActionId a1, ActionId a2,
                               const std::vector<StateId>& cell, const ThreePlayerGame& g) {
    std::vector<StateId> supp = c.support();
    std::vector<ActionId> phi(supp.size(), a1);
    return step_phi(c, supp, phi, a2, cell, g);
}

CountingTree unravel(const ThreePlayerGame& g, const ObservationPartition& obs2,
                     const std::vector<char>& safe, long long budget) {
    g.validate();
    CountingTree tree;
    auto restrict_safe = [&](CountingFunction c) {
        for (int q = 0; q < g.num_states(); ++q)
            if (!safe[q]) c.count[q] = 0;
        return c;
    };

    CountingTree::Node root;
    root.counting = restrict_safe(counting_root(g));
    root.dead = root.counting.empty();
    tree.nodes.push_back(std::move(root));

    std::vector<int> queue{0};
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (tree.nodes[v].dead || tree.nodes[v].covering_ancestor != -1) continue;

        const CountingFunction counting = tree.nodes[v].counting;
        const std::vector<StateId> supp = counting.support();
        std::vector<ActionId> phi(supp.size(), 0);
        while (true) {
            std::vector<std::vector<std::pair<CellId, int>>> per_a2(g.n2());
            for (int a2 = 0; a2 < g.n2(); ++a2) {
                for (CellId cidx = 0; cidx < obs2.num_cells(); ++cidx) {
                    CountingFunction child =
                        restrict_safe(step_phi(counting, supp, phi, a2, obs2.cells[cidx], g));
                    if (child.empty()) continue;
                    // accelerate strictly grown coordinates against dominated
                    // ancestors, then check covering
                    bool changed = true;
                    while (changed) {
                        changed = false;
                        for (int anc = v; anc != -1; anc = tree.nodes[anc].parent) {
                            const auto& ac = tree.nodes[anc].counting;
                            if (!ac.leq(child) || ac == child) continue;
                            for (int q = 0; q < g.num_states(); ++q)
                                if (ac.count[q] < child.count[q] &&
                                    child.count[q] != CountingFunction::omega) {
                                    child.count[q] = CountingFunction::omega;
                                    ++tree.accelerated_coordinates;
                                    changed = true;
                                }
                        }
                    }
                    int cover = -1;
                    for (int anc = v; anc != -1; anc = tree.nodes[anc].parent)
                        if (tree.nodes[anc].counting.leq(child)) {
                            cover = anc;
                            break;
                        }
                    if ((long long)tree.nodes.size() >= budget)
                        throw BudgetError("counting tree exceeded the node budget");
                    CountingTree::Node c;
                    c.counting = std::move(child);
                    c.parent = v;
                    c.depth = tree.nodes[v].depth + 1;
                    c.covering_ancestor = cover;
                    int id = (int)tree.nodes.size();
                    tree.nodes.push_back(std::move(c));
                    if (cover == -1) queue.push_back(id);
                    per_a2[a2].push_back({cidx, id});
                }
            }
            tree.nodes[v].phis.push_back(phi);
            tree.nodes[v].branches.push_back(std::move(per_a2));
            size_t i = 0;
            while (i < phi.size()) {
                if (++phi[i] < g.n1()) break;
                phi[i++] = 0;
            }
            if (i == phi.size()) break;
        }
    }
    return tree;
}

namespace {

void solve_tree(CountingTree& tree) {
    // greatest fixpoint: a node survives if some action map answers every a2
    // with a surviving branch; covered leaves survive with their ancestor
    for (auto& n : tree.nodes) n.winning = !n.dead;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = (int)tree.nodes.size() - 1; v >= 0; --v) {
            auto& n = tree.nodes[v];
            if (!n.winning) continue;
            bool win;
            if (n.covering_ancestor != -1) {
                win = tree.nodes[n.covering_ancestor].winning;
                n.chosen_phi = -1;
            } else {
                win = false;
                for (size_t phi = 0; phi < n.phis.size() && !win; ++phi) {
                    bool all_a2 = true;
                    for (const auto& branches : n.branches[phi]) {
                        bool some = false;
                        for (const auto& [cell, child] : branches)
                            if (tree.nodes[child].winning) {
                                some = true;
                                break;
                            }
                        if (!some) {
                            all_a2 = false;
                            break;
                        }
                    }
                    if (all_a2) {
                        win = true;
                        n.chosen_phi = (int)phi;
                    }
                }
            }
            if (!win) {
                n.winning = false;
                changed = true;
            }
        }
    }
}

int representative(const CountingTree& tree, int v) {
    while (tree.nodes[v].covering_ancestor != -1) v = tree.nodes[v].covering_ancestor;
    return v;
}

// Witness memory = (expanded winning node, observed state); player 1 has
// perfect observation here, so observation cells are single states. The
// update follows the branch whose support contains the observed state,
// smallest a2 first; covered children are replayed from their covering
// ancestor.
MooreStrategy extract_counting_witness(const CountingTree& tree, const ThreePlayerGame& g,
                                       const ObservationPartition& obs1,
                                       const ObservationPartition& obs2) {
    std::map<std::pair<int, StateId>, int> mem_index;
    std::vector<std::pair<int, StateId>> mems;
    auto mem_of = [&](int node, StateId q) {
        auto [it, inserted] = mem_index.try_emplace({node, q}, (int)mems.size() + 2);
        if (inserted) mems.push_back({node, q});
        return it->second;
    };

    // discover reachable (node, state) pairs
    int root = representative(tree, 0);
    std::vector<std::pair<int, StateId>> queue;
    mem_of(root, g.initial);
    queue.push_back({root, g.initial});
    std::map<std::pair<int, StateId>, std::map<StateId, int>> updates;
    while (!queue.empty()) {
        auto [node, q] = queue.back();
        queue.pop_back();
        const auto& n = tree.nodes[node];
        assert(n.winning && n.chosen_phi != -1);
        std::vector<StateId> supp = n.counting.support();
        size_t qi = std::find(supp.begin(), supp.end(), q) - supp.begin();
        assert(qi < supp.size());
        ActionId a1 = n.phis[n.chosen_phi][qi];
        auto& upd = updates[{node, q}];
        for (int a2 = 0; a2 < g.n2(); ++a2)
            for (int a3 = 0; a3 < g.n3(); ++a3) {
                StateId q2 = g.step(q, a1, a2, a3);
                if (upd.count(q2)) continue;
                // smallest a2 whose branch at obs2(q2) keeps q2 alive
                int next_mem = 1; // dead
                for (int b = 0; b < g.n2() && next_mem == 1; ++b)
                    for (const auto& [cell, child] : n.branches[n.chosen_phi][b]) {
                        if (cell != obs2.obs(q2)) continue;
                        if (!tree.nodes[child].winning) continue;
                        int rep = representative(tree, child);
                        if (!tree.nodes[rep].winning) continue;
                        if (tree.nodes[rep].counting.count[q2] > 0) {
                            bool fresh = !mem_index.count({rep, q2});
                            next_mem = mem_of(rep, q2);
                            if (fresh) queue.push_back({rep, q2});
                            break;
                        }
                    }
                upd[q2] = next_mem;
            }
    }

    MooreStrategy s;
    s.owner = 1;
    s.num_obs_cells = obs1.num_cells(); // perfect: one cell per state
    s.memory_count = 2 + (int)mems.size();
    s.initial_memory = 0;
    s.update.assign(s.memory_count * s.num_obs_cells, 1);
    s.output.assign(s.memory_count, 0);
    for (int c = 0; c < s.num_obs_cells; ++c) s.update[1 * s.num_obs_cells + c] = 1;
    s.update[0 * s.num_obs_cells + obs1.obs(g.initial)] = mem_of(root, g.initial);
    for (size_t i = 0; i < mems.size(); ++i) {
        auto [node, q] = mems[i];
        const auto& n = tree.nodes[node];
        std::vector<StateId> supp = n.counting.support();
        size_t qi = std::find(supp.begin(), supp.end(), q) - supp.begin();
        s.output[2 + i] = n.phis[n.chosen_phi][qi];
        for (const auto& [q2, mem] : updates[{node, q}])
            s.update[(2 + i) * s.num_obs_cells + obs1.obs(q2)] = mem;
    }
    return s;
}

} // namespace

Verdict solve_counting_safety(const ThreePlayerGame& g, const ObservationPartition& obs1,
                              const ObservationPartition& obs2, const Objective& obj,
                              long long budget) {
    if (obj.kind != ObjectiveKind::Safe)
        throw PreconditionError(
            "the counting abstraction decides safety only; reachability with a perfectly "
            "informed player 1 needs the knowledge pipeline or bounded enumeration");
    if (!obs1.is_perfect())
        throw PreconditionError("counting abstraction requires perfect observation for player 1");

    CountingTree tree = unravel(g, obs2, obj.target, budget);
    solve_tree(tree);
    bool yes = tree.nodes[0].winning;

    Verdict v;
    v.answer = yes ? Answer::Yes : Answer::No;
    v.method = "counting";
    v.complete = true;
    v.diagnostics["tree_nodes"] = (long long)tree.nodes.size();
    v.diagnostics["accelerations"] = tree.accelerated_coordinates;
    if (yes) v.witness = extract_counting_witness(tree, g, obs1, obs2);
    return v;
}

std::string counting_tree_dot(const CountingTree& tree, const ThreePlayerGame& g) {
    std::ostringstream out;
    out << "digraph counting_tree {\n";
    for (size_t v = 0; v < tree.nodes.size(); ++v) {
        const auto& n = tree.nodes[v];
        out << "  n" << v << " [label=\"";
        bool first = true;
        for (int q = 0; q < g.num_states(); ++q) {
            if (n.counting.count[q] == 0) continue;
            if (!first) out << " ";
            first = false;
            out << g.state_names[q] << ":";
            if (n.counting.count[q] == CountingFunction::omega) out << "w";
            else out << n.counting.count[q];
        }
        if (n.dead) out << "dead";
        out << "\"";
        if (!n.winning) out << " color=red";
        if (n.covering_ancestor != -1) out << " shape=box";
        out << "];\n";
        if (n.parent != -1) out << "  n" << n.parent << " -> n" << v << ";\n";
        if (n.covering_ancestor != -1)
            out << "  n" << v << " -> n" << n.covering_ancestor << " [style=dashed];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace wag
