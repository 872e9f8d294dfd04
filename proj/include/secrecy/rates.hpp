#pragma once

#include <string>

#include "secrecy/policies.hpp"

namespace secrecy {

enum class Scheme { full_csi, main_csi, onoff, constant_rate, receiver_only };

Scheme scheme_from_string(const std::string& name);  // DomainError on unknown id
std::string scheme_to_string(Scheme scheme);

struct SchemeEvaluation {
    Scheme scheme = Scheme::receiver_only;
    double p_bar = 0.0;
    double rate_nats = 0.0;
    double realized_power = 0.0;
    double lambda = 0.0;        // dual variable (0 when the scheme has none)
    double tau = 0.0;           // on/off threshold (0 otherwise)
    double kkt_residual = 0.0;  // constant-rate stationarity residual
    bool converged = true;
    bool clamped = false;       // signed objective was negative and clamped to 0
    long iterations = 0;
};

// Ergodic secrecy rate of a full-CSI policy: adaptive 2D quadrature of
// log(1 + h_m P) - log(1 + h_e P) against the joint density over the active
// wedge. The positive part is automatic: power is zero off the wedge.
double full_csi_rate(const FullCsiPolicy& policy, const SolverConfig& cfg);

// The two independent evaluation paths for a main-CSI policy's rate: the
// one-dimensional E1 reduction and the generic positive-part double integral.
// They share only the power map, so they serve as mutual oracles.
struct MainCsiRateForms {
    double e1_form = 0.0;
    double quadrature_form = 0.0;
};
MainCsiRateForms main_csi_rate_forms(const MainCsiPolicy& policy, const SolverConfig& cfg);

// Rate of a main-CSI policy. Evaluates both forms, returns the E1 form, and
// throws ConsistencyError if they disagree beyond 1e-4 relative.
double main_csi_rate(const MainCsiPolicy& policy, const SolverConfig& cfg);

// On/off rate in closed form (threshold gating, constant power, positive
// part inside the average). Exact up to E1 evaluation; no quadrature.
double onoff_rate_closed_form(const RayleighFadingPair& model, const PowerConstraint& constraint,
                              double tau);

// Fixed-power baseline, positive part outside the average:
// [s(1/(gm p)) - s(1/(ge p))]^+ with s(x) = e^x E1(x). Zero when ge >= gm.
double receiver_only_rate(const RayleighFadingPair& model, const PowerConstraint& constraint);
double receiver_only_rate_signed(const RayleighFadingPair& model,
                                 const PowerConstraint& constraint);

// Signed ergodic objective of a constant-rate policy (no inner positive
// part). The returned value is clamped at zero only at top level; *clamped
// reports when that happened. MC comparisons use the signed value.
double constant_rate_objective(const ConstantRatePolicy& policy, const SolverConfig& cfg,
                               bool* clamped = nullptr);
double constant_rate_objective_signed(const ConstantRatePolicy& policy, const SolverConfig& cfg);

// E{ log(h_m/h_e) ; h_m > h_e }: the common large-power limit of the
// transmitter-CSI schemes. The inner integral is analytic (an entire
// function of h_m/gamma_e), leaving one smooth semi-infinite quadrature.
double high_snr_limit(const RayleighFadingPair& model);

// Solves the scheme at the given constraint and evaluates its rate.
SchemeEvaluation evaluate_scheme(Scheme scheme, const RayleighFadingPair& model,
                                 const PowerConstraint& constraint, const SolverConfig& cfg);

// On/off with a caller-fixed threshold instead of the optimized one.
SchemeEvaluation evaluate_onoff_fixed_tau(const RayleighFadingPair& model,
                                          const PowerConstraint& constraint, double tau,
                                          const SolverConfig& cfg);

}  // namespace secrecy
