#pragma once

#include <cstdint>
#include <random>

#include "secrecy/errors.hpp"

namespace secrecy {

// One realization of the pair of channel power gains: h_m toward the
// intended receiver, h_e toward the eavesdropper.
struct ChannelState {
    double h_m = 0.0;
    double h_e = 0.0;
};

// Exponential density (1/gamma) e^{-h/gamma} for h >= 0, i.e. the power-gain
// law of Rayleigh fading with mean gain gamma.
double exponential_pdf(double h, double gamma);
double exponential_cdf(double h, double gamma);

// Inverse CDF: -gamma * ln(1 - p) for p in [0, 1). Throws DomainError outside.
double exponential_quantile(double p, double gamma);

// Independent Rayleigh block-fading model for the two links. Gains are
// mutually independent exponentials with means gamma_m and gamma_e; noise
// variance is normalized to one on both links.
class RayleighFadingPair {
public:
    RayleighFadingPair(double gamma_m, double gamma_e);

    double gamma_m() const { return gamma_m_; }
    double gamma_e() const { return gamma_e_; }

    double pdf_m(double h) const { return exponential_pdf(h, gamma_m_); }
    double pdf_e(double h) const { return exponential_pdf(h, gamma_e_); }
    double cdf_m(double h) const { return exponential_cdf(h, gamma_m_); }
    double cdf_e(double h) const { return exponential_cdf(h, gamma_e_); }
    double quantile_m(double p) const { return exponential_quantile(p, gamma_m_); }
    double quantile_e(double p) const { return exponential_quantile(p, gamma_e_); }

private:
    double gamma_m_;
    double gamma_e_;
};

// Deterministic sampler: inverse-CDF draws from a seeded mt19937_64, h_m
// before h_e within each state, so identical seeds reproduce identical
// sequences on any platform.
class FadingSampler {
public:
    FadingSampler(const RayleighFadingPair& model, std::uint64_t seed);
    ChannelState next();

private:
    double draw(double gamma);
    std::mt19937_64 rng_;
    double gamma_m_;
    double gamma_e_;
};

}  // namespace secrecy
