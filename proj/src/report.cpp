#include "wag/report.hpp"

#include <json.hpp>

namespace wag {

using nlohmann::json;

std::string RunReport::to_json(bool include_timing) const {
    json j;
    j["schema"] = "wag-report-v1";
    j["command"] = command;
    json a = json::object();
    for (const auto& [k, v] : args) a[k] = v;
    j["args"] = a;
    json ins = json::array();
    for (const auto& [path, hash] : inputs) {
        char buf[17];
        snprintf(buf, sizeof buf, "%016llx", (unsigned long long)hash);
        ins.push_back({{"path", path}, {"fnv1a64", buf}});
    }
    j["inputs"] = ins;
    j["verdict"] = verdict;
    if (!method.empty()) j["method"] = method;
    j["complete"] = complete;
    json s = json::object();
    for (const auto& [k, v] : sizes) s[k] = v;
    j["sizes"] = s;
    if (!detail.empty()) j["detail"] = detail;
    if (include_timing) j["wall_ms"] = wall_ms;
    return j.dump(2) + "\n";
}

std::string strip_timing(const std::string& report_json) {
    json j = json::parse(report_json);
    j.erase("wall_ms");
    return j.dump(2) + "\n";
}

} // namespace wag
