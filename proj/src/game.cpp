#include "wag/game.hpp"

#include <algorithm>
#include <set>

namespace wag {

Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(std::stoll(s), 1);
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw ValidationError("malformed rational '" + s + "'");
    }
}

ObservationPartition ObservationPartition::blind(int n) {
    ObservationPartition p;
    p.num_states = n;
    p.cell_of.assign(n, 0);
    p.cells.emplace_back();
    for (int q = 0; q < n; ++q) p.cells[0].push_back(q);
    return p;
}

ObservationPartition ObservationPartition::perfect(int n) {
    ObservationPartition p;
    p.num_states = n;
    p.cell_of.resize(n);
    p.cells.resize(n);
    for (int q = 0; q < n; ++q) {
        p.cell_of[q] = q;
        p.cells[q] = {q};
    }
    return p;
}

ObservationPartition ObservationPartition::from_cells(int n, const std::vector<std::vector<StateId>>& cells) {
    ObservationPartition p;
    p.num_states = n;
    p.cell_of.assign(n, -1);
    for (const auto& cell : cells) {
        if (cell.empty()) throw ValidationError("partition violation: empty observation cell");
        std::vector<StateId> sorted = cell;
        std::sort(sorted.begin(), sorted.end());
        for (StateId q : sorted) {
            if (q < 0 || q >= n) throw ValidationError("partition violation: state index out of range");
            if (p.cell_of[q] != -1)
                throw ValidationError("partition violation: state '" + std::to_string(q) +
                                      "' appears in two cells");
            p.cell_of[q] = (CellId)p.cells.size();
        }
        p.cells.push_back(std::move(sorted));
    }
    for (int q = 0; q < n; ++q)
        if (p.cell_of[q] == -1)
            throw ValidationError("partition violation: state '" + std::to_string(q) +
                                  "' missing from every cell");
    return p;
}

bool less_informed(const ObservationPartition& coarse, const ObservationPartition& fine) {
    if (coarse.num_states != fine.num_states)
        throw PreconditionError("less_informed: partitions over different state sets");
    // every fine cell must sit inside a single coarse cell
    for (const auto& cell : fine.cells) {
        CellId c = coarse.cell_of[cell[0]];
        for (StateId q : cell)
            if (coarse.cell_of[q] != c) return false;
    }
    return true;
}

void ThreePlayerGame::validate() const {
    int n = num_states();
    if (n == 0) throw ValidationError("game has no states");
    if (initial < 0 || initial >= n) throw ValidationError("initial state out of range");
    if (n1() == 0 || n2() == 0 || n3() == 0) throw ValidationError("empty action alphabet");
    if ((long long)table.size() != (long long)n * n1() * n2() * n3())
        throw ValidationError("transition table is not total");
    for (StateId t : table)
        if (t < 0 || t >= n) throw ValidationError("transition target out of range");
}

void FourPlayerGame::validate() const {
    int n = num_states();
    if (n == 0) throw ValidationError("game has no states");
    if (initial < 0 || initial >= n) throw ValidationError("initial state out of range");
    if (n1() == 0 || n2() == 0 || n3() == 0 || n4() == 0)
        throw ValidationError("empty action alphabet");
    if ((int)turn.size() != n) throw ValidationError("turn map is not total");
    for (int q = 0; q < n; ++q) {
        if (turn[q] != 3 && turn[q] != 4)
            throw ValidationError("turn of state '" + state_names[q] + "' must be 3 or 4");
        for (int a1 = 0; a1 < n1(); ++a1)
            for (int a2 = 0; a2 < n2(); ++a2) {
                if (turn[q] == 3) {
                    for (int a3 = 0; a3 < n3(); ++a3) {
                        StateId t = step3(q, a1, a2, a3);
                        if (t < 0 || t >= n) throw ValidationError("transition target out of range");
                    }
                } else {
                    for (int a4 = 0; a4 < n4(); ++a4) {
                        StateId t = step4(q, a1, a2, a4);
                        if (t < 0 || t >= n) throw ValidationError("transition target out of range");
                    }
                }
            }
    }
}

void StochasticGame::validate() const {
    int n = num_states();
    if (n == 0) throw ValidationError("game has no states");
    if (initial < 0 || initial >= n) throw ValidationError("initial state out of range");
    if ((long long)dists.size() != (long long)n * n1() * n2())
        throw ValidationError("transition table is not total");
    for (const auto& d : dists) {
        if (d.empty()) throw ValidationError("empty distribution");
        Rat sum;
        std::set<StateId> seen;
        for (const auto& [t, p] : d) {
            if (t < 0 || t >= n) throw ValidationError("distribution target out of range");
            if (!seen.insert(t).second)
                throw ValidationError("distribution lists state '" + state_names[t] + "' twice");
            if (p.num < 0) throw ValidationError("negative probability");
            sum = sum + p;
        }
        if (!(sum == Rat::one()))
            throw ValidationError("distribution sums to " + sum.str() + ", not 1");
    }
}

void MooreStrategy::validate(int expected_cells, int num_actions) const {
    if (num_obs_cells != expected_cells)
        throw PreconditionError("strategy/partition mismatch: strategy has " +
                                std::to_string(num_obs_cells) + " observation cells, partition has " +
                                std::to_string(expected_cells));
    if (memory_count <= 0) throw ValidationError("strategy has no memory states");
    if (initial_memory < 0 || initial_memory >= memory_count)
        throw ValidationError("strategy initial memory out of range");
    if ((int)update.size() != memory_count * num_obs_cells)
        throw ValidationError("strategy update table is not total");
    for (int m : update)
        if (m < 0 || m >= memory_count) throw ValidationError("strategy update target out of range");
    if ((int)output.size() != memory_count)
        throw ValidationError("strategy output table is not total");
    for (ActionId a : output)
        if (a < 0 || a >= num_actions) throw ValidationError("strategy output action out of range");
}

std::vector<StateId> post(const ThreePlayerGame& g, const std::vector<StateId>& s,
                          ActionId a1, ActionId a2) {
    std::vector<char> mark(g.num_states(), 0);
    for (StateId q : s)
        for (int a3 = 0; a3 < g.n3(); ++a3) mark[g.step(q, a1, a2, a3)] = 1;
    std::vector<StateId> out;
    for (int q = 0; q < g.num_states(); ++q)
        if (mark[q]) out.push_back(q);
    return out;
}

bool eval_lasso(const std::vector<StateId>& stem, const std::vector<StateId>& cycle,
                const Objective& obj) {
    if (cycle.empty()) throw PreconditionError("eval_lasso: empty cycle");
    switch (obj.kind) {
        case ObjectiveKind::Reach: {
            for (StateId q : stem)
                if (obj.target[q]) return true;
            for (StateId q : cycle)
                if (obj.target[q]) return true;
            return false;
        }
        case ObjectiveKind::Safe: {
            for (StateId q : stem)
                if (!obj.target[q]) return false;
            for (StateId q : cycle)
                if (!obj.target[q]) return false;
            return true;
        }
        case ObjectiveKind::Parity: {
            int mn = obj.priority[cycle[0]];
            for (StateId q : cycle) mn = std::min(mn, obj.priority[q]);
            return mn % 2 == 0;
        }
    }
    return false;
}

int GameDoc::num_states() const {
    switch (kind) {
        case GameKind::Three: return three.num_states();
        case GameKind::Four: return four.num_states();
        case GameKind::Stochastic: return stoch.num_states();
    }
    return 0;
}

const std::vector<std::string>& GameDoc::state_names() const {
    switch (kind) {
        case GameKind::Three: return three.state_names;
        case GameKind::Four: return four.state_names;
        default: return stoch.state_names;
    }
}

void GameDoc::validate() const {
    int n = num_states();
    switch (kind) {
        case GameKind::Three: three.validate(); break;
        case GameKind::Four: four.validate(); break;
        case GameKind::Stochastic: stoch.validate(); break;
    }
    if (obs1.num_states != n || obs2.num_states != n)
        throw ValidationError("observation partition over wrong state set");
    // re-check the partition law so every transformation output goes through
    // one shared validator
    ObservationPartition::from_cells(n, obs1.cells);
    ObservationPartition::from_cells(n, obs2.cells);
    switch (objective.kind) {
        case ObjectiveKind::Reach:
        case ObjectiveKind::Safe:
            if ((int)objective.target.size() != n)
                throw ValidationError("objective target over wrong state set");
            break;
        case ObjectiveKind::Parity:
            if ((int)objective.priority.size() != n)
                throw ValidationError("priority map is not total");
            for (int p : objective.priority)
                if (p < 0) throw ValidationError("negative priority");
            break;
    }
}

} // namespace wag
