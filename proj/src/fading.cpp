#include "secrecy/fading.hpp"

#include <cmath>

namespace secrecy {
namespace {

void require_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("fading: average gain must be finite and > 0");
}

}  // namespace

double exponential_pdf(double h, double gamma) {
    require_gamma(gamma);
    if (h < 0.0) return 0.0;
    return std::exp(-h / gamma) / gamma;
}

double exponential_cdf(double h, double gamma) {
    require_gamma(gamma);
    if (h <= 0.0) return 0.0;
    return -std::expm1(-h / gamma);
}

double exponential_quantile(double p, double gamma) {
    require_gamma(gamma);
    if (!(p >= 0.0) || !(p < 1.0))
        throw DomainError("exponential_quantile: require p in [0, 1)");
    return -gamma * std::log1p(-p);
}

RayleighFadingPair::RayleighFadingPair(double gamma_m, double gamma_e)
    : gamma_m_(gamma_m), gamma_e_(gamma_e) {
    require_gamma(gamma_m);
    require_gamma(gamma_e);
}

FadingSampler::FadingSampler(const RayleighFadingPair& model, std::uint64_t seed)
    : rng_(seed), gamma_m_(model.gamma_m()), gamma_e_(model.gamma_e()) {}

double FadingSampler::draw(double gamma) {
    // 53-bit uniform in [0, 1); log1p keeps the inverse CDF finite at u = 0.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return -gamma * std::log1p(-u);
}

ChannelState FadingSampler::next() {
    ChannelState s;
    s.h_m = draw(gamma_m_);
    s.h_e = draw(gamma_e_);
    return s;
}

}  // namespace secrecy
