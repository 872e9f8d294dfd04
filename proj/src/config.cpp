#include "secrecy/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace secrecy {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view key, std::string_view value) {
    // std::from_chars<double> is missing in some libstdc++ builds; strtod is
    // enough here since values were trimmed already.
    const std::string buf(value);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty())
        throw DomainError("config: cannot parse value for " + std::string(key));
    return v;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw DomainError("config: cannot parse value for " + std::string(key));
    return v;
}

int parse_int(std::string_view key, std::string_view value) {
    int v = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw DomainError("config: cannot parse value for " + std::string(key));
    return v;
}

}  // namespace

Unit unit_from_string(std::string_view s) {
    if (s == "nats") return Unit::nats;
    if (s == "bits") return Unit::bits;
    throw DomainError("config: unit must be 'nats' or 'bits'");
}

std::string_view to_string(Unit u) {
    return u == Unit::nats ? "nats" : "bits";
}

void SolverConfig::validate() const {
    auto bad = [](const std::string& field) {
        throw DomainError("config: invalid " + field);
    };
    if (!(quad_rel_tol > 0.0) || !(quad_rel_tol < 1.0)) bad("quad_rel_tol");
    if (!(quad_abs_tol >= 0.0) || !(quad_abs_tol < 1.0)) bad("quad_abs_tol");
    if (!(lambda_tol > 0.0) || !(lambda_tol < 1.0)) bad("lambda_tol");
    if (grid_points < 16 || grid_points > 1'000'000) bad("grid_points");
    if (!(tail_quantile > 0.5) || !(tail_quantile < 1.0)) bad("tail_quantile");
    if (mc_samples == 0) bad("mc_samples");
    if (jobs < 1 || jobs > 4096) bad("jobs");
}

void SolverConfig::set_option(std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "quad_rel_tol")
        quad_rel_tol = parse_double(key, value);
    else if (key == "quad_abs_tol")
        quad_abs_tol = parse_double(key, value);
    else if (key == "lambda_tol")
        lambda_tol = parse_double(key, value);
    else if (key == "grid_points")
        grid_points = parse_int(key, value);
    else if (key == "tail_quantile")
        tail_quantile = parse_double(key, value);
    else if (key == "mc_samples")
        mc_samples = parse_u64(key, value);
    else if (key == "mc_seed")
        mc_seed = parse_u64(key, value);
    else if (key == "unit")
        unit = unit_from_string(value);
    else if (key == "jobs")
        jobs = parse_int(key, value);
    else
        throw DomainError("config: unknown option '" + std::string(key) + "'");
}

SolverConfig load_config_file(const std::string& path, SolverConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw DomainError("config: " + path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        base.set_option(s.substr(0, eq), s.substr(eq + 1));
    }
    base.validate();
    return base;
}

}  // namespace secrecy
