#pragma once

#include <string>
#include <vector>

namespace nlsv {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct CheckOptions {
    /// Replace the conserved energy by the 1/2 |V u|^2 variant in the drift check.
    bool inject_energy_fault = false;
};

/// Fast invariant suite: transforms, mass and energy conservation, splitting order,
/// time reversal, scattering unitarity, reflectionless and bound-state oracles,
/// resonance detection and the weighted exponential bound. Deterministic.
std::vector<CheckResult> run_invariant_suite(const CheckOptions& opts = {});

/// One line per check, fixed formatting.
std::string format_check_table(const std::vector<CheckResult>& results);

}  // namespace nlsv
