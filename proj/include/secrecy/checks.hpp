#pragma once

#include <functional>
#include <string>
#include <vector>

#include "secrecy/config.hpp"

namespace secrecy {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;           // measured numbers backing the verdict
    double seconds = 0.0;         // wall-clock time of this check
    double budget_seconds = 0.0;  // cap the check must finish within
};

// Runs the complete oracle suite: transcription checks against independent
// quadrature, brute-force optimizer agreement, asymptotic laws, scheme
// orderings, constraint attainment, Monte Carlo agreement, quantized
// achievability, and determinism. A check passes only if its content holds
// AND it finishes inside its runtime budget. on_result, when set, fires
// after each check completes (streaming progress for CLIs).
std::vector<CheckResult> run_check_suite(
    const SolverConfig& cfg,
    const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace secrecy
