#pragma once

#include <cstddef>
#include <vector>

#include "fdisac/channel.hpp"
#include "fdisac/types.hpp"
#include "fdisac/waveform.hpp"

namespace fdisac {

enum class RangeBranch { Near, Far };

/// Per-PRI SINR decomposition at the matched-filter output.
struct SinrBreakdown {
    double signal_power_w = 0.0;       // |alpha|^2 * (Pc*J + Pr*N)
    double residual_si_power_w = 0.0;  // E|z_k|^2 / Tc
    double noise_power_w = 0.0;        // N0 * B
    double sinr_1 = 0.0;
    double sinr_k = 0.0;               // K * sinr_1
    RangeBranch branch = RangeBranch::Far;
};

/**
 * Residual self-interference power E|z_k|^2 after matched filtering
 * (Tc-scaled, same units as N0). Near branch (1 <= n_tau <= N): the echo
 * overlaps the node's own pulse transmission; far branch (N < n_tau <= J):
 * it overlaps the dedicated comm transmission. The two branches agree at
 * n_tau = N.
 */
double residual_si_power(double radar_power_w, double comm_power_w, std::size_t n_tau,
                         std::size_t pulse_chips, std::size_t comm_chips, double chip_duration_s,
                         double si_gain_sq, double sic_factor);

/// Unified per-PRI SINR; Pc = 0, Pr = Pc, and Pr = 0 collapse to the pulsed,
/// constant-envelope CW, and comm-only closed forms.
SinrBreakdown sinr1(double radar_power_w, double comm_power_w, std::size_t n_tau,
                    const ChannelState& ch, const WaveformConfig& cfg);

/// sigma_phi^2 = E|z_k|^2 + N0 for every range bin 1..J (threshold input).
std::vector<double> sigma_phi_sq_per_bin(const WaveformConfig& cfg, const ChannelState& ch);

/// First-order Marcum Q. Absolute error <= 1e-10 on [0, 12]^2; Q1(a,0) = 1,
/// Q1(0,b) = exp(-b^2/2).
double marcum_q1(double a, double b);

/// Gaussian tail Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

/// P_D = Q1(sqrt(2*SINR_K), sqrt(-2 ln P_FA)).
double prob_detection(double sinr_k, double p_fa);

double blind_range_m(double pulse_duration_s, double recovery_time_s);
double unambiguous_range_m(double pri_s, double pulse_duration_s);
double range_resolution_m(double bandwidth_hz);

/**
 * Normalized autocorrelation of one PRI of the assembled frame, evaluated at
 * chip resolution (the chip-rate correlation realizes the defining overlap
 * integrals). Correlation magnitude is even in lag, so negative lags mirror
 * the positive ones. components splits each lag into the pulse ACF, the
 * pulse/comm cross term, and the comm-only tail term (magnitudes of the
 * individual complex contributions; they interfere in `values`).
 */
struct AcfCurve {
    std::vector<double> lags_s;
    std::vector<double> values;           // |chi_n|
    double psl_db = 0.0;                  // 10*log10 of the largest |chi_n|, lag != 0
    std::vector<double> pulse_component;  // |Pr * chi_p| / chi(0)
    std::vector<double> cross_component;  // |Phi| / chi(0)
    std::vector<double> tail_component;   // |Psi| / chi(0)
};

/// lags outside [-(T-Tp), T-Tp] throw LagOutOfRange. PRI 0 is correlated
/// against the warm-up row. psl_db always scans every integer chip lag,
/// independent of the requested grid.
AcfCurve acf_curve(const BasebandFrame& frame, const std::vector<double>& lags_s);

/// Normalized ambiguity surface |chi(tau, f_d)| on the given grids; the
/// f_d = 0 row equals acf_curve values on the same lags.
Mat af_surface(const BasebandFrame& frame, const std::vector<double>& lags_s,
               const std::vector<double>& doppler_hz);

/// Spectrum efficiency of slow-time PSK embedding: (rho/N) log2 M.
double rate_embedded(std::size_t psk_order, double duty_cycle, std::size_t pulse_chips);

/// Embedding plus dedicated segment at the same order: (rho/N + 1-rho) log2 M.
double rate_total(std::size_t psk_order, double duty_cycle, std::size_t pulse_chips);

}  // namespace fdisac
