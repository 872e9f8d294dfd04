#pragma once

#include <string>
#include <vector>

#include "secrecy/config.hpp"
#include "secrecy/fading.hpp"
#include "secrecy/rates.hpp"

namespace secrecy {

// A power sweep over a dB grid: p_bar = 10^(db/10) with unit noise variance,
// so p_bar is the average SNR.
struct SweepRequest {
    double gamma_m = 1.0;
    double gamma_e = 1.0;
    double db_start = -10.0;
    double db_stop = 40.0;
    double db_step = 2.0;
    std::vector<Scheme> schemes;  // empty selects every scheme
};

struct SweepRow {
    double p_bar_db = 0.0;
    double p_bar = 0.0;
    std::vector<SchemeEvaluation> evaluations;  // matches SweepResult::schemes order
};

struct SweepResult {
    std::vector<Scheme> schemes;  // canonical order, duplicates removed
    std::vector<SweepRow> rows;   // ascending p_bar_db
    double high_snr = 0.0;        // model asymptote, common to all rows

    bool all_converged() const;
};

// Evaluates every requested scheme at each grid point. Rows are independent
// and are distributed over cfg.jobs worker threads; results land in
// grid-index order, so output is deterministic regardless of scheduling.
SweepResult run_sweep(const SweepRequest& req, const SolverConfig& cfg);

// Canonical CSV encoding: header row, then one data row per grid point,
// '\n' endings, every number formatted with %.12g. Columns:
//   pbar_db,
//   <one rate column per scheme, named by scheme id>,
//   high_snr_limit,
//   realized_<scheme> for each scheme,
//   tau_onoff                      (when onoff is included),
//   lambda_<scheme>                (full_csi, main_csi, constant_rate),
//   kkt_constant_rate, converged_constant_rate (when constant_rate included).
// Rate columns and high_snr_limit are divided by ln 2 when unit is bits;
// powers, duals, and thresholds are never converted.
std::string sweep_to_csv(const SweepResult& result, Unit unit);

}  // namespace secrecy
