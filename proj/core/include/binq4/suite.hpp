#ifndef BINQ4_SUITE_HPP
#define BINQ4_SUITE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace binq4 {

/// One acceptance check: a stable name, the verdict, and a deterministic
/// detail line (no timings; wall time goes to the log stream only).
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    long identity_instances = 20; ///< random (q, Q) instances for the identity
    long identity_pairs = 1000;   ///< representation pairs for the identity
    long curve_samples = 200;     ///< random curves for the determinant method
    long family_size = 56;        ///< balanced forms in the trend report
    unsigned long long seed = 20240817;
    bool check_determinism = true; ///< rerun everything and compare bytes
};

struct SuiteReport {
    std::vector<CheckResult> checks;
    std::string trend_table; ///< TSV emitted by the trend check
    bool all_pass = false;
};

/// Renders the deterministic report: one line per check plus the trend
/// table. Repeated runs with the same options are byte-identical.
std::string render_report(const SuiteReport& report);

/// Runs the full acceptance suite. Progress and timings are written to log;
/// the returned report is deterministic for a fixed options value.
SuiteReport run_suite(const SuiteOptions& options, std::ostream& log);

} // namespace binq4

#endif
