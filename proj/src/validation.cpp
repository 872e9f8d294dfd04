#include "secrecy/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "secrecy/errors.hpp"
#include "secrecy/numerics.hpp"

namespace secrecy {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// 53-bit uniform in [0, 1); portable across standard library versions, which
// std::uniform_real_distribution is not.
double canonical53(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

bool clamps_inside(Scheme s) {
    switch (s) {
        case Scheme::full_csi:
        case Scheme::main_csi:
        case Scheme::onoff:
            return true;
        case Scheme::constant_rate:
        case Scheme::receiver_only:
            return false;
    }
    throw DomainError("mc_rate: unknown scheme identifier");
}

void check_spec(const QuantizationSpec& spec) {
    if (spec.q1 < 1 || spec.q2 < 1) throw DomainError("quantization bin counts must be >= 1");
    if (!(spec.m1 > 0.0) || !(spec.m2 > 0.0))
        throw DomainError("quantization truncation bounds must be positive");
}

// Integral of the positive-part capacity integrand over
// {hm in [hm_lo, hm_hi], he in [he_lo, min(he_hi, hm - lambda)]}.
double wedge_panel(const RayleighFadingPair& model, double lambda, const SolverConfig& cfg,
                   double hm_lo, double hm_hi, double he_lo, double he_hi) {
    hm_lo = std::max(hm_lo, he_lo + lambda);
    if (!(hm_hi > hm_lo)) return 0.0;
    const Tolerance outer_tol{cfg.quad_rel_tol, cfg.quad_abs_tol, 20000};
    const Tolerance inner_tol{0.5 * cfg.quad_rel_tol, 0.01 * cfg.quad_abs_tol, 20000};
    auto outer = [&](double hm) {
        const double top = std::min(he_hi, hm - lambda);
        if (!(top > he_lo)) return 0.0;
        auto inner = [&](double he) {
            const double p = full_csi_power({hm, he}, lambda);
            const double r = std::log1p(hm * p) - std::log1p(he * p);
            return (r > 0.0 ? r : 0.0) * model.pdf_e(he);
        };
        return integrate_1d(inner, he_lo, top, inner_tol).value * model.pdf_m(hm);
    };
    return integrate_1d(outer, hm_lo, hm_hi, outer_tol).value;
}

}  // namespace

McEstimate mc_rate(Scheme scheme, const RayleighFadingPair& model,
                   const std::function<double(const ChannelState&)>& power, long n,
                   std::uint64_t seed) {
    if (n < 1000) throw DomainError("mc_rate: n must be at least 1000");
    if (!power) throw DomainError("mc_rate: power map must be callable");
    const bool inside = clamps_inside(scheme);

    constexpr long kChunk = 65536;
    double sum = 0.0, sumsq = 0.0, sum_p = 0.0;
    long done = 0;
    for (std::uint64_t chunk = 0; done < n; ++chunk) {
        const long m = std::min(kChunk, n - done);
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(chunk)));
        double cs = 0.0, csq = 0.0, cp = 0.0;  // chunk partials keep reduction order fixed
        for (long i = 0; i < m; ++i) {
            const double u1 = canonical53(rng());
            const double u2 = canonical53(rng());
            const ChannelState state{model.quantile_m(u1), model.quantile_e(u2)};
            const double p = std::max(0.0, power(state));
            double v = std::log1p(state.h_m * p) - std::log1p(state.h_e * p);
            if (inside && v < 0.0) v = 0.0;
            cs += v;
            csq += v * v;
            cp += p;
        }
        sum += cs;
        sumsq += csq;
        sum_p += cp;
        done += m;
    }

    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    double var = sumsq / nn - mean * mean;
    if (n > 1) var = std::max(0.0, var) * nn / (nn - 1.0);
    return McEstimate{mean, std::sqrt(std::max(0.0, var) / nn), sum_p / nn, n, seed};
}

double quantized_achievable_rate(const FullCsiPolicy& policy, const QuantizationSpec& spec) {
    check_spec(spec);
    const RayleighFadingPair& model = policy.model;
    const double w1 = spec.m1 / spec.q1;
    const double w2 = spec.m2 / spec.q2;

    std::vector<double> cm(static_cast<std::size_t>(spec.q1) + 1);
    std::vector<double> ce(static_cast<std::size_t>(spec.q2) + 1);
    for (int i = 0; i <= spec.q1; ++i) cm[static_cast<std::size_t>(i)] = model.cdf_m(i * w1);
    for (int j = 0; j <= spec.q2; ++j) ce[static_cast<std::size_t>(j)] = model.cdf_e(j * w2);

    double total = 0.0;
    for (int i = 0; i < spec.q1; ++i) {
        const double hm = i * w1;  // lower edge: the worst-case main gain
        const double pm = cm[static_cast<std::size_t>(i) + 1] - cm[static_cast<std::size_t>(i)];
        for (int j = 0; j < spec.q2; ++j) {
            const double he = (j + 1) * w2;  // upper edge: the worst-case eavesdropper gain
            // the power map is increasing in hm and decreasing in he, so the
            // bin infimum sits at this corner; scan the others as a guard
            if (hm <= he + policy.lambda) continue;
            double p = full_csi_power({hm, he}, policy.lambda);
            p = std::min(p, full_csi_power({hm, j * w2}, policy.lambda));
            p = std::min(p, full_csi_power({(i + 1) * w1, he}, policy.lambda));
            p = std::min(p, full_csi_power({(i + 1) * w1, j * w2}, policy.lambda));
            if (p <= 0.0) continue;
            const double r = std::log1p(hm * p) - std::log1p(he * p);
            if (r <= 0.0) continue;
            total += r * pm * (ce[static_cast<std::size_t>(j) + 1] - ce[static_cast<std::size_t>(j)]);
        }
    }
    return total;
}

double truncated_box_rate(const FullCsiPolicy& policy, const QuantizationSpec& spec,
                          const SolverConfig& cfg) {
    check_spec(spec);
    return wedge_panel(policy.model, policy.lambda, cfg, 0.0, spec.m1, 0.0, spec.m2);
}

double truncation_mass(const FullCsiPolicy& policy, const QuantizationSpec& spec,
                       const SolverConfig& cfg) {
    check_spec(spec);
    const RayleighFadingPair& model = policy.model;
    const double lambda = policy.lambda;
    const double hm_top = model.quantile_m(cfg.tail_quantile);
    // main gain inside the box, eavesdropper gain beyond it (the wedge caps
    // he below hm, so m1 bounds the inner range)
    const double t1 = wedge_panel(model, lambda, cfg, 0.0, spec.m1, spec.m2, spec.m1);
    // main gain beyond the box, eavesdropper gain inside it
    const double t2 = wedge_panel(model, lambda, cfg, spec.m1, hm_top, 0.0, spec.m2);
    // both gains beyond the box
    const double t3 = wedge_panel(model, lambda, cfg, spec.m1, hm_top, spec.m2, hm_top);
    return t1 + t2 + t3;
}

}  // namespace secrecy
