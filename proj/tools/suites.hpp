#ifndef PVI_TOOLS_SUITES_HPP
#define PVI_TOOLS_SUITES_HPP

#include <string>
#include <string_view>
#include <vector>

namespace pvi::cli {

struct CheckRecord {
    std::string name;
    /// The identity the check exercises, in words.
    std::string anchor;
    double residual = 0.0;
    double threshold = 0.0;
    /// The check passes when residual >= threshold instead of <=.
    bool at_least = false;
    bool pass = false;
    /// Set when the check could not run (numerical failure).
    std::string error;
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckRecord> records;

    bool passed() const;
    bool infrastructure_error() const;
    std::string to_json() const;
};

struct SuiteOptions {
    bool quick = false;
    unsigned long seed = 20240601;
};

const std::vector<std::string>& suite_names();
bool is_suite(std::string_view name);

/// Runs one suite, or every suite for "all". Records are sorted by name.
VerificationReport run_suite(std::string_view name, const SuiteOptions& opts = {});

} // namespace pvi::cli

#endif
