#pragma once

#include <cstdint>

#include "fdisac/types.hpp"
#include "fdisac/waveform.hpp"

namespace fdisac {

/// Geometry and antenna parameters behind the radar and communication gains.
struct LinkBudget {
    double carrier_freq_hz = 3.5e9;
    double tx_gain = 1.0;        // G_t, linear
    double rx_gain = 1.0;        // G_r, linear
    double comm_rx_gain = 1.0;   // G_c, linear
    double rcs_m2 = 1.0;         // sigma
    double target_range_m = 1.0; // R
    double comm_range_m = 1.0;   // R_com
    double pathloss_exponent = 2.0;

    double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
};

/// |alpha|^2 = Gt*Gr*lambda^2*sigma / ((4*pi)^3 * R^4).
double radar_two_way_gain(const LinkBudget& lb);

/// |h|^2 = Gt*Gc*lambda^2 / ((4*pi)^2 * R_com^gamma).
double comm_gain(const LinkBudget& lb);

/// f_d = 2*v/lambda, sign preserved (negative = receding).
double doppler_from_velocity(double radial_velocity_mps, double wavelength_m);

/// Monostatic echo parameters for one CPI.
struct ChannelState {
    cplx alpha{0.0, 0.0};          // two-way target coefficient
    std::size_t delay_bin = 1;     // n_tau in [1, J]
    int doppler_bin = 0;           // q, 0 = static
    double doppler_hz = 0.0;       // f_d
    cplx si_gain{0.0, 0.0};        // beta
    double sic_factor = 0.0;       // eps, residual-to-input SI power ratio
    double noise_psd = 0.0;        // N0, W/Hz
    bool target_present = true;
};

/// Bin-aligned Doppler for bin q: f_d = q / (K*T).
double doppler_bin_frequency(int q, std::size_t pris_per_cpi, double pri_s);

/// The per-PRI phase-rotation model needs |f_d * T| << 1; false means the
/// configuration leaves that regime (treated as a warning, not an error).
bool doppler_approximation_ok(const ChannelState& ch, double pri_s);

/**
 * y_k = alpha * e^{j*2*pi*f_d*k*T} * x^r_{k,n_tau} + beta * x^d_k + n_k,
 * with n_k i.i.d. CN(0, N0) per sample. The k = 0 echo tail reads the
 * frame's warm-up row. target_present = false drops the alpha term.
 */
CMat apply_channel(const BasebandFrame& frame, const ChannelState& ch, double pri_s,
                   std::uint64_t seed);

}  // namespace fdisac
