#pragma once

// End-to-end verification suite. Each check evaluates one acceptance
// criterion at its pinned tolerance and reports the worst deviation seen.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace relcov {

struct CheckResult {
    int id{0};
    std::string name;
    bool passed{false};
    double worst{0.0};      ///< largest observed deviation (or violation)
    double tolerance{0.0};
    double seconds{0.0};
    std::string detail;
    /// Set on a failure that follows from the closed form itself rather than the code.
    std::string unattainable;
};

struct AcceptanceOptions {
    unsigned workers{1};
};

CheckResult check_wigner_closed_form(const AcceptanceOptions& opts = {});
CheckResult check_wigner_special_cases();
CheckResult check_lab_frame();
CheckResult check_boosted_frame(const AcceptanceOptions& opts = {});
CheckResult check_invariant(const AcceptanceOptions& opts = {});
CheckResult check_combinatorics();
CheckResult check_lower_bound_and_expansion(const AcceptanceOptions& opts = {});
CheckResult check_structural_separability();
CheckResult check_fig2(const AcceptanceOptions& opts = {});
CheckResult check_property_suites();

/// Runs every check in order; `on_result` sees each result as it completes.
std::vector<CheckResult> run_acceptance(
    const AcceptanceOptions& opts = {},
    const std::function<void(const CheckResult&)>& on_result = {});

/// "[PASS] 1  name  worst=... tol=... (0.12 s)  detail"
std::string format_check(const CheckResult& r);

/// Prints one line per check and a summary; returns true when all passed.
bool print_checks(std::ostream& os, const std::vector<CheckResult>& results);

/// Prints only the "N/M checks passed" line; returns true when all passed.
bool print_summary(std::ostream& os, const std::vector<CheckResult>& results);

/// True when every check passed or failed with an `unattainable` analysis.
bool only_documented_failures(const std::vector<CheckResult>& results);

}  // namespace relcov
