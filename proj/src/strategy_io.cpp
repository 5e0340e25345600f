#include "wag/strategy_io.hpp"

#include <map>
#include <sstream>

namespace wag {

std::vector<std::string> obs_cell_names(const ObservationPartition& p,
                                        const std::vector<std::string>& state_names) {
    std::vector<std::string> names;
    for (const auto& cell : p.cells) {
        std::string n = "{";
        for (size_t i = 0; i < cell.size(); ++i) {
            if (i) n += ",";
            n += state_names[cell[i]];
        }
        names.push_back(n + "}");
    }
    return names;
}

std::string write_strategy(const MooreStrategy& s, const std::vector<std::string>& cell_names,
                           const std::vector<std::string>& action_names) {
    std::ostringstream out;
    out << "moore-strategy v1\n";
    out << "owner " << s.owner << "\n";
    out << "memory";
    for (int m = 0; m < s.memory_count; ++m) out << " m" << m;
    out << "\n";
    out << "init m" << s.initial_memory << "\n";
    for (int m = 0; m < s.memory_count; ++m)
        out << "output m" << m << " " << action_names[s.output[m]] << "\n";
    for (int m = 0; m < s.memory_count; ++m)
        for (int c = 0; c < s.num_obs_cells; ++c)
            out << "update m" << m << " " << cell_names[c] << " m" << s.next(m, c) << "\n";
    return out.str();
}

MooreStrategy read_strategy(const std::string& text, const std::vector<std::string>& cell_names,
                            const std::vector<std::string>& action_names) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "moore-strategy v1")
        throw ValidationError("strategy file must start with 'moore-strategy v1'");

    std::map<std::string, int> cell_idx, action_idx, mem_idx;
    for (size_t i = 0; i < cell_names.size(); ++i) cell_idx[cell_names[i]] = (int)i;
    for (size_t i = 0; i < action_names.size(); ++i) action_idx[action_names[i]] = (int)i;

    MooreStrategy s;
    s.num_obs_cells = (int)cell_names.size();
    auto mem_of = [&](const std::string& name) {
        auto it = mem_idx.find(name);
        if (it == mem_idx.end()) throw ValidationError("unknown memory state '" + name + "'");
        return it->second;
    };
    std::vector<std::string> pending_updates;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "owner") {
            ls >> s.owner;
        } else if (kw == "memory") {
            std::string name;
            while (ls >> name) mem_idx[name] = s.memory_count++;
            s.update.assign((size_t)s.memory_count * s.num_obs_cells, -1);
            s.output.assign(s.memory_count, -1);
        } else if (kw == "init") {
            std::string name;
            ls >> name;
            s.initial_memory = mem_of(name);
        } else if (kw == "output") {
            std::string mem, act;
            ls >> mem >> act;
            auto it = action_idx.find(act);
            if (it == action_idx.end()) throw ValidationError("unknown action '" + act + "'");
            s.output[mem_of(mem)] = it->second;
        } else if (kw == "update") {
            std::string mem, cell, to;
            ls >> mem >> cell >> to;
            auto it = cell_idx.find(cell);
            if (it == cell_idx.end())
                throw ValidationError("unknown observation cell '" + cell + "'");
            s.update[(size_t)mem_of(mem) * s.num_obs_cells + it->second] = mem_of(to);
        } else {
            throw ValidationError("unknown strategy directive '" + kw + "'");
        }
    }
    for (int v : s.update)
        if (v < 0) throw ValidationError("strategy update table incomplete");
    for (int v : s.output)
        if (v < 0) throw ValidationError("strategy output table incomplete");
    return s;
}

} // namespace wag
