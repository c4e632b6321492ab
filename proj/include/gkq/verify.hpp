#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gkq/siegel.hpp"

namespace gkq {

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::string modpoly_db;  // empty: MODPOLY_DB or the bundled file
    std::uint64_t budget = kDefaultBudget;
};

struct CaseFailure {
    std::string key, expected, actual;
};

struct VerifyReport {
    std::string suite;
    long cases = 0;
    std::vector<CaseFailure> failures;  // sorted by key
    double seconds = 0;
    bool passed() const { return failures.empty() && cases > 0; }
};

class CaseLog {
public:
    void check(const std::string& key, bool ok, const std::string& expected = "true",
               const std::string& actual = "false");
    void equal(const std::string& key, const std::string& expected, const std::string& actual) {
        check(key, expected == actual, expected, actual);
    }
    // Runs body, turning exceptions into a failure of key.  InfeasibleBudget propagates.
    void guard(const std::string& key, const std::function<void()>& body);

    long cases = 0;
    std::vector<CaseFailure> failures;
};

struct Suite {
    std::string name;
    std::string summary;
    std::function<void(const VerifyOptions&, CaseLog&)> run;
};

// One suite per acceptance criterion, in criterion order.
const std::vector<Suite>& suite_registry();
VerifyReport run_suite(const Suite& s, const VerifyOptions& opt);
// name of one suite or "all"; throws std::invalid_argument for unknown names
std::vector<VerifyReport> run_suites(const std::string& name, const VerifyOptions& opt);

// Tabulated (m1, m2, d(m1, m2)) at the psi level, 26 pairs.
struct TableEntry {
    int m1, m2;
    long d;
};
const std::vector<TableEntry>& psi_table();

}  // namespace gkq
