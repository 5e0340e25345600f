#include "wag/dot.hpp"

#include <map>
#include <set>
#include <sstream>

namespace wag {

namespace {

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

// (state, memory) pairs reachable when player 1 follows the witness; used to
// highlight the edges the witness can actually take.
std::set<std::pair<StateId, ActionId>> witness_moves(const GameDoc& doc, const MooreStrategy& s) {
    std::set<std::pair<StateId, ActionId>> moves;
    if (doc.kind != GameKind::Three) return moves;
    const auto& g = doc.three;
    std::set<std::pair<StateId, int>> seen;
    std::vector<std::pair<StateId, int>> queue;
    int m0 = s.next(s.initial_memory, doc.obs1.obs(g.initial));
    queue.push_back({g.initial, m0});
    seen.insert(queue[0]);
    while (!queue.empty()) {
        auto [q, m] = queue.back();
        queue.pop_back();
        ActionId a1 = s.act(m);
        moves.insert({q, a1});
        for (int a2 = 0; a2 < g.n2(); ++a2)
            for (int a3 = 0; a3 < g.n3(); ++a3) {
                StateId q2 = g.step(q, a1, a2, a3);
                int m2 = s.next(m, doc.obs1.obs(q2));
                if (seen.insert({q2, m2}).second) queue.push_back({q2, m2});
            }
    }
    return moves;
}

} // namespace

std::string export_dot(const GameDoc& doc, const Verdict* verdict) {
    const auto& names = doc.state_names();
    int n = doc.num_states();
    std::ostringstream out;
    out << "digraph game {\n  rankdir=LR;\n";

    std::set<std::pair<StateId, ActionId>> hl;
    if (verdict && verdict->witness) hl = witness_moves(doc, *verdict->witness);

    for (int c = 0; c < doc.obs2.num_cells(); ++c) {
        out << "  subgraph cluster_obs2_" << c << " {\n    label=\"obs2 " << c << "\";\n";
        for (StateId q : doc.obs2.cells[c]) {
            out << "    \"" << esc(names[q]) << "\" [label=\"" << esc(names[q]) << "\\nobs1:"
                << doc.obs1.obs(q) << "\"";
            if (q == (doc.kind == GameKind::Three  ? doc.three.initial
                      : doc.kind == GameKind::Four ? doc.four.initial
                                                   : doc.stoch.initial))
                out << " shape=box";
            if ((doc.objective.kind == ObjectiveKind::Reach ||
                 doc.objective.kind == ObjectiveKind::Safe) &&
                doc.objective.target[q])
                out << " peripheries=2";
            out << "];\n";
        }
        out << "  }\n";
    }

    // merge edges by (from, to); stack the action labels
    std::map<std::pair<StateId, StateId>, std::vector<std::string>> edges;
    std::map<std::pair<StateId, StateId>, bool> bold;
    switch (doc.kind) {
        case GameKind::Three: {
            const auto& g = doc.three;
            for (StateId q = 0; q < n; ++q)
                for (int a1 = 0; a1 < g.n1(); ++a1)
                    for (int a2 = 0; a2 < g.n2(); ++a2)
                        for (int a3 = 0; a3 < g.n3(); ++a3) {
                            StateId t = g.step(q, a1, a2, a3);
                            edges[{q, t}].push_back(g.a1_names[a1] + "," + g.a2_names[a2] + "," +
                                                    g.a3_names[a3]);
                            if (hl.count({q, a1})) bold[{q, t}] = true;
                        }
            break;
        }
        case GameKind::Four: {
            const auto& g = doc.four;
            for (StateId q = 0; q < n; ++q)
                for (int a1 = 0; a1 < g.n1(); ++a1)
                    for (int a2 = 0; a2 < g.n2(); ++a2) {
                        if (g.turn[q] == 3) {
                            for (int a3 = 0; a3 < g.n3(); ++a3)
                                edges[{q, g.step3(q, a1, a2, a3)}].push_back(
                                    g.a1_names[a1] + "," + g.a2_names[a2] + "," + g.a3_names[a3]);
                        } else {
                            for (int a4 = 0; a4 < g.n4(); ++a4)
                                edges[{q, g.step4(q, a1, a2, a4)}].push_back(
                                    g.a1_names[a1] + "," + g.a2_names[a2] + ",p4:" + g.a4_names[a4]);
                        }
                    }
            break;
        }
        case GameKind::Stochastic: {
            const auto& g = doc.stoch;
            for (StateId q = 0; q < n; ++q)
                for (int a1 = 0; a1 < g.n1(); ++a1)
                    for (int a2 = 0; a2 < g.n2(); ++a2)
                        for (const auto& [t, p] : g.dist(q, a1, a2))
                            edges[{q, t}].push_back(g.a1_names[a1] + "," + g.a2_names[a2] + ":" +
                                                    p.str());
            break;
        }
    }
    for (const auto& [e, labels] : edges) {
        out << "  \"" << esc(names[e.first]) << "\" -> \"" << esc(names[e.second]) << "\" [label=\"";
        for (size_t i = 0; i < labels.size(); ++i) {
            if (i) out << "\\n";
            out << esc(labels[i]);
        }
        out << "\"";
        if (bold.count(e)) out << " color=blue penwidth=2";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace wag
