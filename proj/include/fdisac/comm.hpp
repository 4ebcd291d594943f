#pragma once

#include <cstddef>

#include "fdisac/types.hpp"
#include "fdisac/waveform.hpp"

namespace fdisac {

/// Downlink seen by the dedicated communication receiver.
struct CommLink {
    cplx h{0.0, 0.0};        // complex channel coefficient
    double noise_psd = 0.0;  // N0, W/Hz
    std::size_t psk_order = 2;
};

struct EmbeddedDecision {
    std::size_t symbol_index = 0;  // m in exp(j*2*pi*m/M)
    cplx statistic{0.0, 0.0};      // matched-filter output before the slicer
};

/**
 * Demodulates one embedded PSK symbol from the pulse-segment chips
 * y[0..N-1] by code matched filtering: y_c = (1/sqrt(N)) sum c*[l] y[l]
 * = h*sqrt(Pr*Tc*N)*w + CN(0, N0); the factor N is the code processing
 * gain. Coherent: h is known, its phase is removed before slicing.
 */
EmbeddedDecision demod_embedded(const cplx* pulse_chips_rx, const FastTimeCode& code,
                                const CommLink& link);

/// Union-bound M-PSK symbol error rate 2*Q(sqrt(2*|h|^2*Pr*N/(N0*B)) * sin(pi/M)),
/// clamped to [0, 1]. Overestimates BPSK by exactly 2x.
double ser_embedded_analytic(double h_gain_sq, double radar_power_w, std::size_t pulse_chips,
                             double noise_psd, double bandwidth_hz, std::size_t psk_order);

/// (1 - rho) * log2(1 + |h|^2 * Pc / (N0 * B)).
double spectrum_efficiency_dedicated(double h_gain_sq, double comm_power_w, double noise_psd,
                                     double bandwidth_hz, double duty_cycle);

}  // namespace fdisac
