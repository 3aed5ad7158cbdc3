// Acceptance gate: one line per criterion, exit 1 if any fails.
#include <cstdio>

#include "ks/selftest.hpp"

int main() {
    ks::RunConfig cfg;
    auto results = ks::run_selftest(cfg);
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%s  %d. %s (%.2fs)%s%s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.detail.empty() ? "" : " — ", r.detail.c_str());
        ok = ok && r.pass;
    }
    std::printf("%s\n", ok ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT");
    return ok ? 0 : 1;
}
