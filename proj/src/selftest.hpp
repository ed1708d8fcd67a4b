#ifndef QCB_SELFTEST_HPP
#define QCB_SELFTEST_HPP

#include <string>
#include <vector>

// Invariant suites and the numbered acceptance checks, shared by the CLI
// `selftest` subcommand and the acceptance runner.

namespace qcb::selftest {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;       // computed values, 12 significant digits
    bool informational = false;  // reported, never counted as a failure
};

/// Per-module invariant suites (symplectic core, entropic functionals, Fock
/// oracle, channels, teleportation simulation, bounds, QKD).
std::vector<CheckResult> run_module_suites();

/// Sub-clauses of acceptance criterion k (1..9).
std::vector<CheckResult> run_criterion(int k);

/// Module suites followed by criteria 1..9.
std::vector<CheckResult> run_all();

/// Number of non-informational failures.
int count_failures(const std::vector<CheckResult>& results);

} // namespace qcb::selftest

#endif // QCB_SELFTEST_HPP
