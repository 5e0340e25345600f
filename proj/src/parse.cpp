#include "wag/parse.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace wag {

using nlohmann::json;

namespace {

std::map<std::string, StateId> name_index(const std::vector<std::string>& names, const char* what) {
    std::map<std::string, StateId> idx;
    for (int i = 0; i < (int)names.size(); ++i) {
        if (names[i].empty()) throw ValidationError(std::string(what) + " name must be non-empty");
        if (names[i] == "*") throw ValidationError(std::string(what) + " name '*' is reserved");
        if (!idx.emplace(names[i], i).second)
            throw ValidationError(std::string("duplicate ") + what + " name '" + names[i] + "'");
    }
    return idx;
}

std::vector<std::string> string_array(const json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw ValidationError(std::string(what) + " entries must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

StateId lookup(const std::map<std::string, StateId>& idx, const std::string& name, const char* what) {
    auto it = idx.find(name);
    if (it == idx.end()) throw ValidationError(std::string("unknown ") + what + " '" + name + "'");
    return it->second;
}

// Action field: a concrete name or '*'. Returns the list of indices covered.
std::vector<int> action_range(const json& row, const char* key,
                              const std::map<std::string, StateId>& idx, int count) {
    if (!row.contains(key))
        throw ValidationError(std::string("transition entry missing field '") + key + "'");
    std::string v = row.at(key).get<std::string>();
    if (v == "*") {
        std::vector<int> all(count);
        for (int i = 0; i < count; ++i) all[i] = i;
        return all;
    }
    return {lookup(idx, v, key)};
}

ObservationPartition parse_obs(const json& doc, const char* key,
                               const std::map<std::string, StateId>& states, int n) {
    if (!doc.contains(key)) return ObservationPartition::perfect(n);
    const json& j = doc.at(key);
    if (!j.is_array()) throw ValidationError(std::string(key) + " must be an array of cells");
    // ["*"] means blind
    if (j.size() == 1 && j[0].is_string() && j[0].get<std::string>() == "*")
        return ObservationPartition::blind(n);
    std::vector<std::vector<StateId>> cells;
    for (const auto& cj : j) {
        std::vector<StateId> cell;
        for (const auto& name : string_array(cj, key))
            cell.push_back(lookup(states, name, "state"));
        cells.push_back(std::move(cell));
    }
    try {
        return ObservationPartition::from_cells(n, cells);
    } catch (const ValidationError& e) {
        // name the state rather than its index
        std::string msg = e.what();
        for (const auto& [name, q] : states) {
            std::string needle = "'" + std::to_string(q) + "'";
            auto pos = msg.find(needle);
            if (pos != std::string::npos) msg.replace(pos, needle.size(), "'" + name + "'");
        }
        throw ValidationError(std::string(key) + ": " + msg);
    }
}

Objective parse_objective(const json& doc, const std::map<std::string, StateId>& states,
                          const std::vector<std::string>& names) {
    if (!doc.contains("objective")) throw ValidationError("document missing 'objective'");
    const json& j = doc.at("objective");
    std::string type = j.at("type").get<std::string>();
    int n = (int)names.size();
    if (type == "reach" || type == "safe") {
        std::vector<char> t(n, 0);
        for (const auto& name : string_array(j.at("target"), "objective target"))
            t[lookup(states, name, "state")] = 1;
        return type == "reach" ? Objective::reach(std::move(t)) : Objective::safe(std::move(t));
    }
    if (type == "parity") {
        std::vector<int> p(n, -1);
        const json& pj = j.at("priorities");
        if (!pj.is_object()) throw ValidationError("parity priorities must be an object");
        for (auto it = pj.begin(); it != pj.end(); ++it)
            p[lookup(states, it.key(), "state")] = it.value().get<int>();
        for (int q = 0; q < n; ++q)
            if (p[q] < 0)
                throw ValidationError("priority missing for state '" + names[q] + "'");
        return Objective::parity(std::move(p));
    }
    throw ValidationError("unknown objective type '" + type + "'");
}

void fill_entry(std::vector<StateId>& table, std::vector<char>& set, long long pos, StateId to,
                const std::string& desc) {
    if (set[pos] && table[pos] != to)
        throw ValidationError("conflicting transition entries for " + desc);
    table[pos] = to;
    set[pos] = 1;
}

std::string tuple_desc(const std::vector<std::string>& sn, StateId q,
                       const std::vector<std::pair<std::string, std::string>>& actions) {
    std::string d = "(" + sn[q];
    for (const auto& [k, v] : actions) d += ", " + k + "=" + v;
    return d + ")";
}

} // namespace

GameDoc parse_game(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("syntax error at byte ") + std::to_string(e.byte) + ": " +
                              e.what());
    }
    if (!doc.is_object()) throw ValidationError("top level must be an object");
    if (doc.contains("obs3"))
        throw ValidationError("player 3 has perfect observation; 'obs3' is not accepted");

    GameDoc out;
    std::string kind = doc.at("kind").get<std::string>();
    auto names = string_array(doc.at("states"), "states");
    auto states = name_index(names, "state");
    int n = (int)names.size();
    StateId initial = lookup(states, doc.at("initial").get<std::string>(), "state");

    const json& actions = doc.at("actions");
    auto a1 = string_array(actions.at("a1"), "actions.a1");
    auto a2 = string_array(actions.at("a2"), "actions.a2");
    auto i1 = name_index(a1, "a1 action");
    auto i2 = name_index(a2, "a2 action");

    out.obs1 = parse_obs(doc, "obs1", states, n);
    out.obs2 = parse_obs(doc, "obs2", states, n);
    out.objective = parse_objective(doc, states, names);

    const json& trans = doc.at("transitions");
    if (!trans.is_array()) throw ValidationError("transitions must be an array");

    if (kind == "three-player") {
        out.kind = GameKind::Three;
        auto a3 = string_array(actions.at("a3"), "actions.a3");
        auto i3 = name_index(a3, "a3 action");
        ThreePlayerGame& g = out.three;
        g.state_names = names;
        g.a1_names = a1;
        g.a2_names = a2;
        g.a3_names = a3;
        g.initial = initial;
        long long total = (long long)n * a1.size() * a2.size() * a3.size();
        g.table.assign(total, -1);
        std::vector<char> set(total, 0);
        for (const auto& row : trans) {
            StateId from = lookup(states, row.at("from").get<std::string>(), "state");
            StateId to = lookup(states, row.at("to").get<std::string>(), "state");
            for (int x1 : action_range(row, "a1", i1, (int)a1.size()))
                for (int x2 : action_range(row, "a2", i2, (int)a2.size()))
                    for (int x3 : action_range(row, "a3", i3, (int)a3.size())) {
                        long long pos = (((long long)from * a1.size() + x1) * a2.size() + x2) * a3.size() + x3;
                        fill_entry(g.table, set, pos, to,
                                   tuple_desc(names, from, {{"a1", a1[x1]}, {"a2", a2[x2]}, {"a3", a3[x3]}}));
                    }
        }
        for (long long i = 0; i < total; ++i)
            if (!set[i]) {
                int a3i = (int)(i % a3.size());
                long long r = i / a3.size();
                int a2i = (int)(r % a2.size());
                r /= a2.size();
                int a1i = (int)(r % a1.size());
                StateId q = (StateId)(r / a1.size());
                throw ValidationError("transition table not total: missing " +
                                      tuple_desc(names, q, {{"a1", a1[a1i]}, {"a2", a2[a2i]}, {"a3", a3[a3i]}}));
            }
    } else if (kind == "four-player") {
        out.kind = GameKind::Four;
        auto a3 = string_array(actions.at("a3"), "actions.a3");
        auto a4 = string_array(actions.at("a4"), "actions.a4");
        auto i3 = name_index(a3, "a3 action");
        auto i4 = name_index(a4, "a4 action");
        FourPlayerGame& g = out.four;
        g.state_names = names;
        g.a1_names = a1;
        g.a2_names = a2;
        g.a3_names = a3;
        g.a4_names = a4;
        g.initial = initial;
        g.turn.assign(n, 0);
        const json& tj = doc.at("turn");
        for (int q = 0; q < n; ++q) {
            if (!tj.contains(names[q]))
                throw ValidationError("turn missing for state '" + names[q] + "'");
            g.turn[q] = tj.at(names[q]).get<int>();
        }
        long long t3 = (long long)n * a1.size() * a2.size() * a3.size();
        long long t4 = (long long)n * a1.size() * a2.size() * a4.size();
        g.table3.assign(t3, 0);
        g.table4.assign(t4, 0);
        std::vector<char> set3(t3, 0), set4(t4, 0);
        for (const auto& row : trans) {
            StateId from = lookup(states, row.at("from").get<std::string>(), "state");
            StateId to = lookup(states, row.at("to").get<std::string>(), "state");
            bool is3 = g.turn[from] == 3;
            if (is3 && row.contains("a4"))
                throw ValidationError("turn-3 state '" + names[from] + "' entry carries a4");
            if (!is3 && row.contains("a3"))
                throw ValidationError("turn-4 state '" + names[from] + "' entry carries a3");
            for (int x1 : action_range(row, "a1", i1, (int)a1.size()))
                for (int x2 : action_range(row, "a2", i2, (int)a2.size())) {
                    if (is3) {
                        for (int x3 : action_range(row, "a3", i3, (int)a3.size())) {
                            long long pos = (((long long)from * a1.size() + x1) * a2.size() + x2) * a3.size() + x3;
                            fill_entry(g.table3, set3, pos, to,
                                       tuple_desc(names, from, {{"a1", a1[x1]}, {"a2", a2[x2]}, {"a3", a3[x3]}}));
                        }
                    } else {
                        for (int x4 : action_range(row, "a4", i4, (int)a4.size())) {
                            long long pos = (((long long)from * a1.size() + x1) * a2.size() + x2) * a4.size() + x4;
                            fill_entry(g.table4, set4, pos, to,
                                       tuple_desc(names, from, {{"a1", a1[x1]}, {"a2", a2[x2]}, {"a4", a4[x4]}}));
                        }
                    }
                }
        }
        for (int q = 0; q < n; ++q)
            for (size_t x1 = 0; x1 < a1.size(); ++x1)
                for (size_t x2 = 0; x2 < a2.size(); ++x2) {
                    if (g.turn[q] == 3) {
                        for (size_t x3 = 0; x3 < a3.size(); ++x3) {
                            long long pos = (((long long)q * a1.size() + x1) * a2.size() + x2) * a3.size() + x3;
                            if (!set3[pos])
                                throw ValidationError("transition table not total: missing " +
                                                      tuple_desc(names, q, {{"a1", a1[x1]}, {"a2", a2[x2]}, {"a3", a3[x3]}}));
                        }
                    } else {
                        for (size_t x4 = 0; x4 < a4.size(); ++x4) {
                            long long pos = (((long long)q * a1.size() + x1) * a2.size() + x2) * a4.size() + x4;
                            if (!set4[pos])
                                throw ValidationError("transition table not total: missing " +
                                                      tuple_desc(names, q, {{"a1", a1[x1]}, {"a2", a2[x2]}, {"a4", a4[x4]}}));
                        }
                    }
                }
    } else if (kind == "stochastic") {
        out.kind = GameKind::Stochastic;
        StochasticGame& g = out.stoch;
        g.state_names = names;
        g.a1_names = a1;
        g.a2_names = a2;
        g.initial = initial;
        long long total = (long long)n * a1.size() * a2.size();
        g.dists.assign(total, {});
        for (const auto& row : trans) {
            StateId from = lookup(states, row.at("from").get<std::string>(), "state");
            std::vector<std::pair<StateId, Rat>> d;
            for (const auto& e : row.at("dist")) {
                StateId to = lookup(states, e.at("to").get<std::string>(), "state");
                d.emplace_back(to, parse_rat(e.at("p").get<std::string>()));
            }
            std::sort(d.begin(), d.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (int x1 : action_range(row, "a1", i1, (int)a1.size()))
                for (int x2 : action_range(row, "a2", i2, (int)a2.size())) {
                    long long pos = ((long long)from * a1.size() + x1) * a2.size() + x2;
                    if (!g.dists[pos].empty())
                        throw ValidationError("conflicting transition entries for " +
                                              tuple_desc(names, from, {{"a1", a1[x1]}, {"a2", a2[x2]}}));
                    g.dists[pos] = d;
                }
        }
        for (long long i = 0; i < total; ++i)
            if (g.dists[i].empty()) {
                int a2i = (int)(i % a2.size());
                long long r = i / a2.size();
                int a1i = (int)(r % a1.size());
                StateId q = (StateId)(r / a1.size());
                throw ValidationError("transition table not total: missing " +
                                      tuple_desc(names, q, {{"a1", a1[a1i]}, {"a2", a2[a2i]}}));
            }
    } else {
        throw ValidationError("unknown game kind '" + kind + "'");
    }

    out.validate();
    return out;
}

namespace {

json obs_json(const ObservationPartition& p, const std::vector<std::string>& names) {
    json cells = json::array();
    for (const auto& cell : p.cells) {
        json c = json::array();
        for (StateId q : cell) c.push_back(names[q]);
        cells.push_back(c);
    }
    return cells;
}

json objective_json(const Objective& obj, const std::vector<std::string>& names) {
    json j;
    switch (obj.kind) {
        case ObjectiveKind::Reach:
        case ObjectiveKind::Safe: {
            j["type"] = obj.kind == ObjectiveKind::Reach ? "reach" : "safe";
            json t = json::array();
            for (size_t q = 0; q < names.size(); ++q)
                if (obj.target[q]) t.push_back(names[q]);
            j["target"] = t;
            break;
        }
        case ObjectiveKind::Parity: {
            j["type"] = "parity";
            json p = json::object();
            for (size_t q = 0; q < names.size(); ++q) p[names[q]] = obj.priority[q];
            j["priorities"] = p;
            break;
        }
    }
    return j;
}

} // namespace

std::string serialize_game(const GameDoc& doc) {
    json j;
    const auto& names = doc.state_names();
    j["states"] = names;
    json acts;
    json trans = json::array();
    switch (doc.kind) {
        case GameKind::Three: {
            const auto& g = doc.three;
            j["kind"] = "three-player";
            j["initial"] = names[g.initial];
            acts["a1"] = g.a1_names;
            acts["a2"] = g.a2_names;
            acts["a3"] = g.a3_names;
            for (int q = 0; q < g.num_states(); ++q)
                for (int x1 = 0; x1 < g.n1(); ++x1)
                    for (int x2 = 0; x2 < g.n2(); ++x2)
                        for (int x3 = 0; x3 < g.n3(); ++x3)
                            trans.push_back({{"from", names[q]},
                                             {"a1", g.a1_names[x1]},
                                             {"a2", g.a2_names[x2]},
                                             {"a3", g.a3_names[x3]},
                                             {"to", names[g.step(q, x1, x2, x3)]}});
            break;
        }
        case GameKind::Four: {
            const auto& g = doc.four;
            j["kind"] = "four-player";
            j["initial"] = names[g.initial];
            acts["a1"] = g.a1_names;
            acts["a2"] = g.a2_names;
            acts["a3"] = g.a3_names;
            acts["a4"] = g.a4_names;
            json turn = json::object();
            for (int q = 0; q < g.num_states(); ++q) turn[names[q]] = g.turn[q];
            j["turn"] = turn;
            for (int q = 0; q < g.num_states(); ++q)
                for (int x1 = 0; x1 < g.n1(); ++x1)
                    for (int x2 = 0; x2 < g.n2(); ++x2) {
                        if (g.turn[q] == 3) {
                            for (int x3 = 0; x3 < g.n3(); ++x3)
                                trans.push_back({{"from", names[q]},
                                                 {"a1", g.a1_names[x1]},
                                                 {"a2", g.a2_names[x2]},
                                                 {"a3", g.a3_names[x3]},
                                                 {"to", names[g.step3(q, x1, x2, x3)]}});
                        } else {
                            for (int x4 = 0; x4 < g.n4(); ++x4)
                                trans.push_back({{"from", names[q]},
                                                 {"a1", g.a1_names[x1]},
                                                 {"a2", g.a2_names[x2]},
                                                 {"a4", g.a4_names[x4]},
                                                 {"to", names[g.step4(q, x1, x2, x4)]}});
                        }
                    }
            break;
        }
        case GameKind::Stochastic: {
            const auto& g = doc.stoch;
            j["kind"] = "stochastic";
            j["initial"] = names[g.initial];
            acts["a1"] = g.a1_names;
            acts["a2"] = g.a2_names;
            for (int q = 0; q < g.num_states(); ++q)
                for (int x1 = 0; x1 < g.n1(); ++x1)
                    for (int x2 = 0; x2 < g.n2(); ++x2) {
                        json d = json::array();
                        for (const auto& [t, p] : g.dist(q, x1, x2))
                            d.push_back({{"to", names[t]}, {"p", p.str()}});
                        trans.push_back({{"from", names[q]},
                                         {"a1", g.a1_names[x1]},
                                         {"a2", g.a2_names[x2]},
                                         {"dist", d}});
                    }
            break;
        }
    }
    j["actions"] = acts;
    j["obs1"] = obs_json(doc.obs1, names);
    j["obs2"] = obs_json(doc.obs2, names);
    j["objective"] = objective_json(doc.objective, names);
    j["transitions"] = trans;
    return j.dump(2) + "\n";
}

} // namespace wag
