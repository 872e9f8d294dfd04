#include "secrecy/rates.hpp"

#include <cmath>

#include "secrecy/errors.hpp"

namespace secrecy {

namespace {

// Per-state secrecy rate of a positive-power state when only h_m is known,
// reduced to scaled exponential integrals s(x) = e^x E1(x):
//   E_{h_e}[log(1+hP) - log(1+h_e P)]^+ =
//       log(1+hP) - s(1/(ge P)) + e^{-h/ge} s(1/(ge P) + h/ge).
double e1_state_rate(double h, double power, double ge) {
    if (power <= 0.0) return 0.0;
    const double a = 1.0 / (ge * power);
    return std::log1p(h * power) - exp_integral_e1_scaled(a) +
           std::exp(-h / ge) * exp_integral_e1_scaled(a + h / ge);
}

// Same quantity by direct quadrature over the eavesdropper gain. The
// positive part restricts the inner integral to h_e < h.
double quadrature_state_rate(double h, double power, const RayleighFadingPair& model,
                             const Tolerance& tol) {
    if (power <= 0.0) return 0.0;
    const double top = std::log1p(h * power);
    auto inner = [&](double he) { return (top - std::log1p(he * power)) * model.pdf_e(he); };
    return integrate_1d(inner, 0.0, h, tol).value;
}

}  // namespace

Scheme scheme_from_string(const std::string& name) {
    if (name == "full_csi") return Scheme::full_csi;
    if (name == "main_csi") return Scheme::main_csi;
    if (name == "onoff") return Scheme::onoff;
    if (name == "constant_rate") return Scheme::constant_rate;
    if (name == "receiver_only") return Scheme::receiver_only;
    throw DomainError("unknown scheme '" + name +
                      "' (expected full_csi, main_csi, onoff, constant_rate, receiver_only)");
}

std::string scheme_to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::full_csi: return "full_csi";
        case Scheme::main_csi: return "main_csi";
        case Scheme::onoff: return "onoff";
        case Scheme::constant_rate: return "constant_rate";
        case Scheme::receiver_only: return "receiver_only";
    }
    throw DomainError("scheme_to_string: invalid scheme value");
}

double full_csi_rate(const FullCsiPolicy& policy, const SolverConfig& cfg) {
    cfg.validate();
    auto integrand = [](const ChannelState& s, double p) {
        if (p <= 0.0) return 0.0;
        return std::log1p(s.h_m * p) - std::log1p(s.h_e * p);
    };
    return full_csi_wedge_expectation(policy.model, policy.lambda, cfg, integrand);
}

MainCsiRateForms main_csi_rate_forms(const MainCsiPolicy& policy, const SolverConfig& cfg) {
    cfg.validate();
    const double ge = policy.model.gamma_e();
    auto power = [&](double h) { return policy.power(h); };
    auto via_e1 = [&](double h, double p) { return e1_state_rate(h, p, ge); };
    const double rate_e1 = grid_expectation(policy.grid_h, power, policy.model, cfg, via_e1);

    const Tolerance inner_tol{cfg.quad_rel_tol, 0.01 * cfg.quad_abs_tol, 20000};
    auto via_quad = [&](double h, double p) {
        return quadrature_state_rate(h, p, policy.model, inner_tol);
    };
    const double rate_2d = grid_expectation(policy.grid_h, power, policy.model, cfg, via_quad);
    return MainCsiRateForms{rate_e1, rate_2d};
}

double main_csi_rate(const MainCsiPolicy& policy, const SolverConfig& cfg) {
    const MainCsiRateForms forms = main_csi_rate_forms(policy, cfg);
    const double scale =
        std::max({std::fabs(forms.e1_form), std::fabs(forms.quadrature_form), 1e-12});
    if (std::fabs(forms.e1_form - forms.quadrature_form) > 1e-4 * scale) {
        throw ConsistencyError("main_csi_rate: E1 form and direct quadrature disagree: " +
                               std::to_string(forms.e1_form) + " vs " +
                               std::to_string(forms.quadrature_form));
    }
    return forms.e1_form;
}

double onoff_rate_closed_form(const RayleighFadingPair& model, const PowerConstraint& constraint,
                              double tau) {
    if (!(constraint.p_bar > 0.0) || !std::isfinite(constraint.p_bar)) {
        throw DomainError("onoff_rate_closed_form: p_bar must be finite and > 0");
    }
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw DomainError("onoff_rate_closed_form: tau must be finite and >= 0");
    }
    const double gm = model.gamma_m();
    const double ge = model.gamma_e();
    const double p = constraint.p_bar * std::exp(tau / gm);
    const double a_m = 1.0 / (gm * p);
    const double a_e = 1.0 / (ge * p);
    const double c = 1.0 / gm + 1.0 / ge;
    // Scaled-E1 rearrangement of the closed form: every e^x E1(y) pair is
    // combined into decaying exponentials times s(x) = e^x E1(x), so nothing
    // overflows for large tau or p.
    const double gated = std::log1p(tau * p) + exp_integral_e1_scaled(tau / gm + a_m) +
                         std::exp(-tau / ge) * exp_integral_e1_scaled(tau / ge + a_e) -
                         exp_integral_e1_scaled(a_e);
    return std::exp(-tau / gm) * gated -
           std::exp(-c * tau) * exp_integral_e1_scaled(c * (tau + 1.0 / p));
}

double receiver_only_rate_signed(const RayleighFadingPair& model,
                                 const PowerConstraint& constraint) {
    if (!(constraint.p_bar > 0.0) || !std::isfinite(constraint.p_bar)) {
        throw DomainError("receiver_only_rate: p_bar must be finite and > 0");
    }
    const double p = constraint.p_bar;
    return exp_integral_e1_scaled(1.0 / (model.gamma_m() * p)) -
           exp_integral_e1_scaled(1.0 / (model.gamma_e() * p));
}

double receiver_only_rate(const RayleighFadingPair& model, const PowerConstraint& constraint) {
    return std::max(0.0, receiver_only_rate_signed(model, constraint));
}

double constant_rate_objective_signed(const ConstantRatePolicy& policy, const SolverConfig& cfg) {
    cfg.validate();
    const double ge = policy.model.gamma_e();
    // No inner positive part: the eavesdropper average runs over all gains,
    // E[log(1+h_e P)] = s(1/(ge P)).
    auto power = [&](double h) { return policy.power(h); };
    auto signed_rate = [&](double h, double p) {
        if (p <= 0.0) return 0.0;
        return std::log1p(h * p) - exp_integral_e1_scaled(1.0 / (ge * p));
    };
    return grid_expectation(policy.grid_h, power, policy.model, cfg, signed_rate);
}

double constant_rate_objective(const ConstantRatePolicy& policy, const SolverConfig& cfg,
                               bool* clamped) {
    const double value = constant_rate_objective_signed(policy, cfg);
    if (clamped != nullptr) *clamped = value < 0.0;
    return std::max(0.0, value);
}

double high_snr_limit(const RayleighFadingPair& model) {
    // Inner integral over h_e < h of log(h/h_e) f_e(h_e) dh_e is Ein(h/ge),
    // an entire function, so the log singularity never reaches the quadrature.
    const double ge = model.gamma_e();
    auto integrand = [&](double h) { return exp_integral_ein(h / ge) * model.pdf_m(h); };
    const double hi = model.quantile_m(1.0 - 1e-12);
    return integrate_1d(integrand, 0.0, hi, Tolerance{1e-10, 1e-14, 20000}).value;
}

SchemeEvaluation evaluate_scheme(Scheme scheme, const RayleighFadingPair& model,
                                 const PowerConstraint& constraint, const SolverConfig& cfg) {
    cfg.validate();
    SchemeEvaluation ev;
    ev.scheme = scheme;
    ev.p_bar = constraint.p_bar;
    switch (scheme) {
        case Scheme::full_csi: {
            const FullCsiPolicy policy = solve_full_csi(model, constraint, cfg);
            ev.rate_nats = full_csi_rate(policy, cfg);
            ev.lambda = policy.lambda;
            ev.realized_power = policy.realized_power;
            ev.iterations = policy.iterations;
            break;
        }
        case Scheme::main_csi: {
            const MainCsiPolicy policy = solve_main_csi(model, constraint, cfg);
            ev.rate_nats = main_csi_rate(policy, cfg);
            ev.lambda = policy.lambda;
            ev.realized_power = policy.realized_power;
            ev.iterations = policy.iterations;
            break;
        }
        case Scheme::onoff: {
            const OnOffOptimum best = optimize_onoff_threshold(model, constraint, cfg);
            ev.rate_nats = best.rate_nats;
            ev.tau = best.policy.tau;
            ev.realized_power = constraint.p_bar;  // exact by the gating identity
            ev.iterations = best.iterations;
            break;
        }
        case Scheme::constant_rate: {
            const ConstantRatePolicy policy = solve_constant_rate(model, constraint, cfg);
            ev.rate_nats = constant_rate_objective(policy, cfg, &ev.clamped);
            ev.lambda = policy.lambda;
            ev.realized_power = policy.realized_power;
            ev.kkt_residual = policy.kkt_residual;
            ev.converged = policy.converged;
            ev.iterations = policy.iterations;
            break;
        }
        case Scheme::receiver_only: {
            const double signed_rate = receiver_only_rate_signed(model, constraint);
            ev.rate_nats = std::max(0.0, signed_rate);
            ev.clamped = signed_rate < 0.0;
            ev.realized_power = constraint.p_bar;
            break;
        }
    }
    return ev;
}

SchemeEvaluation evaluate_onoff_fixed_tau(const RayleighFadingPair& model,
                                          const PowerConstraint& constraint, double tau,
                                          const SolverConfig& cfg) {
    cfg.validate();
    SchemeEvaluation ev;
    ev.scheme = Scheme::onoff;
    ev.p_bar = constraint.p_bar;
    ev.tau = tau;
    ev.rate_nats = onoff_rate_closed_form(model, constraint, tau);
    ev.realized_power = constraint.p_bar;
    return ev;
}

}  // namespace secrecy
