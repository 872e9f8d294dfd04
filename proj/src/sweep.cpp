#include "secrecy/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "secrecy/errors.hpp"

namespace secrecy {

namespace {

constexpr Scheme kCanonical[] = {Scheme::full_csi, Scheme::main_csi, Scheme::onoff,
                                 Scheme::constant_rate, Scheme::receiver_only};

std::vector<Scheme> normalize_schemes(const std::vector<Scheme>& requested) {
    std::vector<Scheme> out;
    for (Scheme s : kCanonical) {
        if (requested.empty() || std::find(requested.begin(), requested.end(), s) != requested.end())
            out.push_back(s);
    }
    return out;
}

void append_num(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out += buf;
}

bool has(const std::vector<Scheme>& schemes, Scheme s) {
    return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

}  // namespace

bool SweepResult::all_converged() const {
    for (const SweepRow& row : rows)
        for (const SchemeEvaluation& ev : row.evaluations)
            if (!ev.converged) return false;
    return true;
}

SweepResult run_sweep(const SweepRequest& req, const SolverConfig& cfg) {
    cfg.validate();
    if (!(req.gamma_m > 0.0) || !(req.gamma_e > 0.0))
        throw DomainError("run_sweep: average gains must be positive");
    if (!(req.db_step > 0.0)) throw DomainError("run_sweep: db_step must be positive");
    if (req.db_stop < req.db_start) throw DomainError("run_sweep: empty dB range");

    SweepResult result;
    result.schemes = normalize_schemes(req.schemes);
    const RayleighFadingPair model(req.gamma_m, req.gamma_e);
    result.high_snr = high_snr_limit(model);

    std::vector<double> grid;
    for (double db = req.db_start; db <= req.db_stop + 1e-9 * req.db_step; db += req.db_step)
        grid.push_back(db);
    result.rows.resize(grid.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= grid.size()) return;
            try {
                SweepRow row;
                row.p_bar_db = grid[k];
                row.p_bar = std::pow(10.0, grid[k] / 10.0);
                for (Scheme s : result.schemes)
                    row.evaluations.push_back(evaluate_scheme(s, model, {row.p_bar}, cfg));
                result.rows[k] = std::move(row);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    const int jobs = std::clamp(cfg.jobs, 1, static_cast<int>(grid.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::string sweep_to_csv(const SweepResult& result, Unit unit) {
    const double scale = unit == Unit::bits ? 1.0 / std::log(2.0) : 1.0;
    const bool with_onoff = has(result.schemes, Scheme::onoff);
    const bool with_const = has(result.schemes, Scheme::constant_rate);

    std::string out = "pbar_db";
    for (Scheme s : result.schemes) out += "," + scheme_to_string(s);
    out += ",high_snr_limit";
    for (Scheme s : result.schemes) out += ",realized_" + scheme_to_string(s);
    if (with_onoff) out += ",tau_onoff";
    for (Scheme s : {Scheme::full_csi, Scheme::main_csi, Scheme::constant_rate})
        if (has(result.schemes, s)) out += ",lambda_" + scheme_to_string(s);
    if (with_const) out += ",kkt_constant_rate,converged_constant_rate";
    out += "\n";

    for (const SweepRow& row : result.rows) {
        append_num(out, row.p_bar_db);
        for (const SchemeEvaluation& ev : row.evaluations) {
            out += ',';
            append_num(out, ev.rate_nats * scale);
        }
        out += ',';
        append_num(out, result.high_snr * scale);
        for (const SchemeEvaluation& ev : row.evaluations) {
            out += ',';
            append_num(out, ev.realized_power);
        }
        auto find = [&](Scheme s) -> const SchemeEvaluation& {
            for (std::size_t i = 0; i < result.schemes.size(); ++i)
                if (result.schemes[i] == s) return row.evaluations[i];
            throw DomainError("sweep_to_csv: scheme column missing");
        };
        if (with_onoff) {
            out += ',';
            append_num(out, find(Scheme::onoff).tau);
        }
        for (Scheme s : {Scheme::full_csi, Scheme::main_csi, Scheme::constant_rate}) {
            if (has(result.schemes, s)) {
                out += ',';
                append_num(out, find(s).lambda);
            }
        }
        if (with_const) {
            const SchemeEvaluation& ev = find(Scheme::constant_rate);
            out += ',';
            append_num(out, ev.kkt_residual);
            out += ',';
            out += ev.converged ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

}  // namespace secrecy
