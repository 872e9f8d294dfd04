#pragma once

#include <cstdint>
#include <functional>

#include "secrecy/config.hpp"
#include "secrecy/fading.hpp"
#include "secrecy/policies.hpp"
#include "secrecy/rates.hpp"

namespace secrecy {

// Uniform-bin quantization of the truncated gain box [0, m1] x [0, m2].
struct QuantizationSpec {
    int q1 = 1;       // main-channel bin count
    int q2 = 1;       // eavesdropper bin count
    double m1 = 1.0;  // main-gain truncation bound
    double m2 = 1.0;  // eavesdropper-gain truncation bound
};

struct McEstimate {
    double mean = 0.0;       // rate estimate, nats per channel use
    double std_err = 0.0;
    double avg_power = 0.0;  // empirical average transmit power
    long n = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of a scheme's ergodic rate under the given power map.
// power sees the full state; schemes that cannot react to h_e simply ignore
// it. The per-sample value keeps the positive part inside the expectation for
// full_csi / main_csi / onoff and stays signed for constant_rate /
// receiver_only, mirroring where each rate formula places its clamp. Sampling
// is chunked with per-chunk seeds derived from (seed, chunk index) and the
// reduction runs in chunk order, so a given seed is bit-reproducible no
// matter how chunks would be scheduled. Requires n >= 1000.
McEstimate mc_rate(Scheme scheme, const RayleighFadingPair& model,
                   const std::function<double(const ChannelState&)>& power, long n,
                   std::uint64_t seed);

// Rate of the quantized achievability construction: per bin, the worst-case
// gain pair (lower main edge, upper eavesdropper edge) and the infimum of the
// full-CSI power map over the bin, weighted by exact CDF bin probabilities.
// Lower-bounds full_csi_rate for every valid spec.
double quantized_achievable_rate(const FullCsiPolicy& policy, const QuantizationSpec& spec);

// Capacity integrand restricted to the truncated box [0, m1] x [0, m2]: the
// limit the bin sums approach under refinement. Exposed for sandwich
// diagnostics (capacity - quantized <= box gap + truncation mass).
double truncated_box_rate(const FullCsiPolicy& policy, const QuantizationSpec& spec,
                          const SolverConfig& cfg);

// Sum of the three tail integrals of the capacity integrand outside the box:
// the achievability gap attributable to truncation alone. Monotonically
// shrinks as the box grows.
double truncation_mass(const FullCsiPolicy& policy, const QuantizationSpec& spec,
                       const SolverConfig& cfg);

}  // namespace secrecy
