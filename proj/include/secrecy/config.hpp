#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "secrecy/errors.hpp"

namespace secrecy {

enum class Unit { nats, bits };

Unit unit_from_string(std::string_view s);
std::string_view to_string(Unit u);

// All rates are computed in nats internally; Unit only affects presentation
// (bits = nats / ln 2).
struct SolverConfig {
    double quad_rel_tol = 1e-8;
    double quad_abs_tol = 1e-12;
    double lambda_tol = 1e-6;        // relative tolerance on the power constraint
    int grid_points = 512;           // nodes of tabulated per-state policies
    double tail_quantile = 1.0 - 1e-10;  // truncation point for semi-infinite integrals
    std::uint64_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 42;
    Unit unit = Unit::nats;
    int jobs = 1;

    // Throws DomainError naming the first offending field.
    void validate() const;

    // Assigns one field by config-file key ("quad_rel_tol", "mc_seed", ...).
    // Throws DomainError for unknown keys or unparsable values.
    void set_option(std::string_view key, std::string_view value);
};

// Parses a flat key-value file ("key = value" lines, '#' comments, blank
// lines ignored) on top of the given defaults, then validates the result.
SolverConfig load_config_file(const std::string& path, SolverConfig base = {});

}  // namespace secrecy
