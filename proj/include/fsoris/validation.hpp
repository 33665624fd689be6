#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsoris {

// quick trims Monte Carlo sample counts to keep the battery in the minutes
// range; full runs the statistical checks at ten million samples
enum class ValidationLevel { quick, full };

struct CheckResult {
    std::string name;
    std::string detail;
    double measured = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;  // informational; never rendered into the report
    bool passed = false;
};

struct ValidationReport {
    ValidationLevel level = ValidationLevel::quick;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

inline constexpr int kCheckCount = 9;

// index runs 1..kCheckCount; throws std::out_of_range otherwise
CheckResult run_check(int index, ValidationLevel level, std::uint64_t seed);

ValidationReport run_validation(ValidationLevel level, std::uint64_t seed);

// stable text rendering: no timestamps or timings, so a seeded rerun is
// byte-identical
std::string format_report(const ValidationReport& report);

// test hook: FSORIS_TOLERANCE_SCALE multiplies every comparison tolerance;
// unset, non-numeric, or non-positive values read as 1
double tolerance_scale();

}  // namespace fsoris
