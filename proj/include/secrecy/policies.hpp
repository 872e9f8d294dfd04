#pragma once

#include <functional>
#include <vector>

#include "secrecy/config.hpp"
#include "secrecy/fading.hpp"
#include "secrecy/numerics.hpp"

namespace secrecy {

struct PowerConstraint {
    double p_bar = 1.0;  // long-term average transmit power, noise variance 1
};

// Power map when the transmitter sees both gains: positive only on the wedge
// h_m - h_e > lambda, where it equals the closed-form Lagrangian maximizer of
// log(1 + h_m P) - log(1 + h_e P) - lambda P. h_e = 0 is handled as a limit
// (clamped to 1e-300; the map tends to 1/lambda - 1/h_m there).
double full_csi_power(const ChannelState& state, double lambda);

struct FullCsiPolicy {
    RayleighFadingPair model;
    double p_bar = 0.0;
    double lambda = 0.0;
    double realized_power = 0.0;
    long iterations = 0;

    double power(const ChannelState& state) const { return full_csi_power(state, lambda); }
};

// Chooses lambda so the wedge-averaged power equals p_bar (average power is
// strictly decreasing in lambda). Throws ConvergenceError if no bracket is
// found within the expansion limits.
FullCsiPolicy solve_full_csi(const RayleighFadingPair& model, const PowerConstraint& constraint,
                             const SolverConfig& cfg);

// Per-state optimum when only h_m is known: the positive root in (0, p_max]
// of the stationarity condition of the per-state concave objective
//   Phi(P) = (1 - e^{-h_m/ge}) log(1 + h_m P) - int_0^{h_m} log(1 + x P) f_e(x) dx,
// or 0 when the derivative at P = 0+ does not exceed lambda (no positive
// root). Multiple-root guard: the largest root <= p_max is taken.
double main_csi_power(double h_m, double lambda, const RayleighFadingPair& model,
                      double p_max = 1e9);

struct MainCsiPolicy {
    RayleighFadingPair model;
    double p_bar = 0.0;
    double lambda = 0.0;
    double cutoff = 0.0;  // largest grid gain with zero power
    double realized_power = 0.0;
    long iterations = 0;
    std::vector<double> grid_h;  // log-spaced nodes
    std::vector<double> grid_p;
    MonotoneCubic interp;

    double power(double h_m) const;
};

MainCsiPolicy solve_main_csi(const RayleighFadingPair& model, const PowerConstraint& constraint,
                             const SolverConfig& cfg);

// Constant-power transmission gated on h_m > tau. The constant level
// p_bar * e^{tau/gamma_m} makes the consumed average exactly p_bar.
struct OnOffPolicy {
    double tau = 0.0;
    double p_bar = 0.0;
    double p_const = 0.0;

    double power(double h_m) const { return h_m > tau ? p_const : 0.0; }
};

OnOffPolicy make_onoff(const RayleighFadingPair& model, const PowerConstraint& constraint,
                       double tau);

struct OnOffOptimum {
    OnOffPolicy policy;
    double rate_nats = 0.0;
    long iterations = 0;
};

// Maximizes the on/off closed-form rate over tau in [0, quantile(1 - 1e-8)].
OnOffOptimum optimize_onoff_threshold(const RayleighFadingPair& model,
                                      const PowerConstraint& constraint, const SolverConfig& cfg);

// Candidate stationary point of the non-concave constant-rate problem. The
// KKT conditions are necessary only; the solver reports its residuals instead
// of claiming optimality, and non-convergence is a returned state.
struct ConstantRatePolicy {
    RayleighFadingPair model;
    double p_bar = 0.0;
    double lambda = 0.0;
    double cutoff = 0.0;  // exact activation gain; power is 0 at or below it
    double realized_power = 0.0;
    double kkt_residual = 0.0;
    bool converged = false;
    long iterations = 0;
    std::vector<double> grid_h;  // starts at the activation gain
    std::vector<double> grid_p;
    MonotoneCubic interp;

    double power(double h_m) const;
};

ConstantRatePolicy solve_constant_rate(const RayleighFadingPair& model,
                                       const PowerConstraint& constraint,
                                       const SolverConfig& cfg);

// Fixed-power baseline (transmitter ignores all CSI).
struct ReceiverOnlyPolicy {
    double p_bar = 0.0;

    double power(double) const { return p_bar; }
};

// E{ f(h, power(h)) } under the main-channel density for a grid-tabulated
// policy, truncated at cfg.tail_quantile. Requires f(h, 0) == 0: grid cells
// where the policy is identically zero are skipped exactly.
double grid_expectation(const std::vector<double>& grid_h,
                        const std::function<double(double)>& power,
                        const RayleighFadingPair& model, const SolverConfig& cfg,
                        const std::function<double(double, double)>& f);

// E{ g(state, P(state)) } over the active wedge h_m > h_e + lambda of a
// full-CSI power map, against the joint density truncated at
// cfg.tail_quantile. Requires g(state, 0) == 0.
double full_csi_wedge_expectation(
    const RayleighFadingPair& model, double lambda, const SolverConfig& cfg,
    const std::function<double(const ChannelState&, double)>& g);

}  // namespace secrecy
