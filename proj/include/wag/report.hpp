#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wag/game.hpp"

namespace wag {

// Machine-readable run summary. Reports are reproducible: identical inputs
// and flags yield identical reports up to the timing field.
struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> args;
    std::vector<std::pair<std::string, std::uint64_t>> inputs; // path, fnv1a64
    std::string verdict; // YES | NO | INCOMPLETE | OK | ERROR
    std::string method;
    bool complete = true;
    std::map<std::string, long long> sizes;
    std::string detail;
    long long wall_ms = 0;

    std::string to_json(bool include_timing = true) const;
};

// report text with the timing fields removed, for determinism comparisons
std::string strip_timing(const std::string& report_json);

} // namespace wag
