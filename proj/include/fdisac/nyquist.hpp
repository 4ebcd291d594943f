#pragma once

#include <cstddef>
#include <vector>

#include "fdisac/types.hpp"
#include "fdisac/waveform.hpp"

namespace fdisac {

/**
 * Sampled Nyquist shaping pulse for the continuous-time projection oracle.
 * The main processing chain never touches this; it exists so that the
 * chip-rate closed forms can be cross-checked against genuine numerical
 * integration of <x(t - tau), psi(t - l*Tc)>.
 *
 * samples holds psi on a uniform grid of step Tc/oversampling_factor,
 * centred at index support_chips*oversampling_factor, normalized so the
 * Riemann-sum energy is 1.
 */
struct NyquistPulse {
    std::size_t oversampling_factor = 0;
    std::size_t support_chips = 0;  // half-support, in chips
    double rolloff = 0.0;
    std::vector<double> samples;    // length 2*support_chips*oversampling + 1

    std::size_t centre() const { return support_chips * oversampling_factor; }
};

/**
 * Truncated root-raised-cosine, then orthogonalized with a zero-phase
 * chip-rate corrector (spectral 1/sqrt factorization) so the *truncated*
 * pulse keeps the Nyquist property: its Riemann-sum autocorrelation at
 * nonzero integer chip lags sits at numerical noise instead of at the
 * truncation floor.
 *
 * rrc_half_support/corrector_half_support are in chips; the returned pulse
 * has support_chips = rrc_half_support + corrector_half_support.
 */
NyquistPulse make_nyquist_pulse(std::size_t oversampling_factor, double rolloff = 0.5,
                                std::size_t rrc_half_support = 32,
                                std::size_t corrector_half_support = 128);

/// max_m |R_psi(m*Tc)| over nonzero integer chip lags (Riemann sums);
/// the pulse quality figure the oracle tolerance rests on.
double max_offpeak_chip_autocorr(const NyquistPulse& pulse);

/**
 * Numerically integrates the projections <x_k(t - n_tau*Tc), psi(t - l*Tc)>
 * for one CPI and returns the K x (N+J) matrix. n_tau = 0 projects the
 * undelayed waveform (the direct/SI sequence); 1..J are the echo delays.
 * Neighbouring PRIs contribute through the pulse tails; rows outside the CPI
 * are treated as silent except for the frame's warm-up row before PRI 0.
 *
 * Throws DelayOutOfRange for n_tau > J.
 */
CMat continuous_projection_oracle(const BasebandFrame& frame, const NyquistPulse& pulse,
                                  std::size_t n_tau);

}  // namespace fdisac
