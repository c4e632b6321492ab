// One line per acceptance criterion, in registry order.  Exit status 1 if any fails.

#include <cstdio>
#include <exception>

#include "gkq/verify.hpp"

int main() {
    gkq::VerifyOptions opt;
    int failed = 0, idx = 0;
    for (const auto& s : gkq::suite_registry()) {
        ++idx;
        try {
            gkq::VerifyReport r = gkq::run_suite(s, opt);
            std::printf("criterion %d [%s] %s: %s (%ld cases, %zu failures, %.1fs)\n", idx, s.name.c_str(),
                        s.summary.c_str(), r.passed() ? "PASS" : "FAIL", r.cases, r.failures.size(), r.seconds);
            for (size_t i = 0; i < r.failures.size() && i < 5; ++i)
                std::printf("    %s: expected %s, got %s\n", r.failures[i].key.c_str(),
                            r.failures[i].expected.c_str(), r.failures[i].actual.c_str());
            failed += !r.passed();
        } catch (const std::exception& e) {
            std::printf("criterion %d [%s] %s: FAIL (%s)\n", idx, s.name.c_str(), s.summary.c_str(), e.what());
            ++failed;
        }
    }
    std::printf("%d of %d criteria passed\n", idx - failed, idx);
    return failed ? 1 : 0;
}
