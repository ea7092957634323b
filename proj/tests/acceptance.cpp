// One PASS/FAIL line per acceptance criterion, details indented below it.
// Exit status is nonzero iff any criterion fails.
#include "icoh/verify.hpp"

#include <cstdio>
#include <map>

int main() {
    using namespace icoh;
    // Wall-clock limits in seconds; criteria without an entry have none.
    const std::map<int, double> limit = {{1, 60.0}, {7, 120.0}};
    int failed = 0;
    for (int id = 1; id <= 8; ++id) {
        CriterionResult r = run_criterion(id);
        bool ok = r.passed;
        std::string timing = std::to_string(r.seconds).substr(0, 6) + "s";
        if (auto it = limit.find(id); it != limit.end()) {
            bool in_time = r.seconds < it->second;
            timing += in_time ? " (limit " : " EXCEEDS limit ";
            timing += std::to_string(static_cast<int>(it->second)) + "s" + (in_time ? ")" : "");
            ok = ok && in_time;
        }
        std::printf("[%s] criterion %d: %s  %s\n", ok ? "PASS" : "FAIL", id, r.name.c_str(), timing.c_str());
        for (const auto& d : r.details) std::printf("       %s\n", d.c_str());
        std::fflush(stdout);
        failed += !ok;
    }
    std::printf("%d of 8 criteria pass\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}
