#include "fdisac/comm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fdisac/analysis.hpp"
#include "fdisac/errors.hpp"

namespace fdisac {

EmbeddedDecision demod_embedded(const cplx* pulse_chips_rx, const FastTimeCode& code,
                                const CommLink& link) {
    const std::size_t n = code.chips.size();
    cplx acc{0.0, 0.0};
    for (std::size_t l = 0; l < n; ++l) acc += std::conj(code.chips[l]) * pulse_chips_rx[l];
    acc /= std::sqrt(static_cast<double>(n));

    // Remove the known channel phase, then slice to the nearest PSK point.
    const cplx rotated = acc * std::conj(link.h) / std::abs(link.h);
    const double m = static_cast<double>(link.psk_order);
    double idx = std::round(std::arg(rotated) * m / (2.0 * std::numbers::pi));
    if (idx < 0.0) idx += m;
    if (idx >= m) idx -= m;

    EmbeddedDecision out;
    out.symbol_index = static_cast<std::size_t>(idx);
    out.statistic = acc;
    return out;
}

double ser_embedded_analytic(double h_gain_sq, double radar_power_w, std::size_t pulse_chips,
                             double noise_psd, double bandwidth_hz, std::size_t psk_order) {
    if (psk_order < 2) throw ConfigInvalid("psk_order must be >= 2");
    const double snr = h_gain_sq * radar_power_w * static_cast<double>(pulse_chips) /
                       (noise_psd * bandwidth_hz);
    const double arg = std::sqrt(2.0 * snr) * std::sin(std::numbers::pi / static_cast<double>(psk_order));
    return std::clamp(2.0 * gaussian_q(arg), 0.0, 1.0);
}

double spectrum_efficiency_dedicated(double h_gain_sq, double comm_power_w, double noise_psd,
                                     double bandwidth_hz, double duty_cycle) {
    if (!(duty_cycle >= 0.0 && duty_cycle < 1.0)) throw ConfigInvalid("duty_cycle must be in [0, 1)");
    return (1.0 - duty_cycle) *
           std::log2(1.0 + h_gain_sq * comm_power_w / (noise_psd * bandwidth_hz));
}

}  // namespace fdisac
