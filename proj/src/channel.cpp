#include "fdisac/channel.hpp"

#include <cmath>
#include <numbers>

#include "fdisac/errors.hpp"
#include "fdisac/rng.hpp"

namespace fdisac {

double radar_two_way_gain(const LinkBudget& lb) {
    if (!(lb.target_range_m > 0.0)) throw ConfigInvalid("target_range_m must be > 0");
    const double lam = lb.wavelength_m();
    const double four_pi = 4.0 * std::numbers::pi;
    const double r2 = lb.target_range_m * lb.target_range_m;
    return lb.tx_gain * lb.rx_gain * lam * lam * lb.rcs_m2 /
           (four_pi * four_pi * four_pi * r2 * r2);
}

double comm_gain(const LinkBudget& lb) {
    if (!(lb.comm_range_m > 0.0)) throw ConfigInvalid("comm_range_m must be > 0");
    const double lam = lb.wavelength_m();
    const double four_pi = 4.0 * std::numbers::pi;
    return lb.tx_gain * lb.comm_rx_gain * lam * lam /
           (four_pi * four_pi * std::pow(lb.comm_range_m, lb.pathloss_exponent));
}

double doppler_from_velocity(double radial_velocity_mps, double wavelength_m) {
    if (!(wavelength_m > 0.0)) throw ConfigInvalid("wavelength must be > 0");
    return 2.0 * radial_velocity_mps / wavelength_m;
}

double doppler_bin_frequency(int q, std::size_t pris_per_cpi, double pri_s) {
    return static_cast<double>(q) / (static_cast<double>(pris_per_cpi) * pri_s);
}

bool doppler_approximation_ok(const ChannelState& ch, double pri_s) {
    return std::abs(ch.doppler_hz * pri_s) < 0.05;
}

CMat apply_channel(const BasebandFrame& frame, const ChannelState& ch, double pri_s,
                   std::uint64_t seed) {
    const std::size_t len = frame.chips_per_pri();
    const std::size_t k_total = frame.pris;
    if (ch.delay_bin < 1 || ch.delay_bin > frame.comm_chips)
        throw DelayOutOfRange("delay bin " + std::to_string(ch.delay_bin) + " outside [1, J]");

    auto eng = make_engine(seed, stream::kNoise);
    CMat y(k_total, len);
    std::vector<cplx> echo(len);

    for (std::size_t k = 0; k < k_total; ++k) {
        cplx* out = y.row(k);
        const cplx* direct = frame.pri_samples.row(k);
        if (ch.target_present && ch.alpha != cplx{0.0, 0.0}) {
            frame.echo_reference(k, ch.delay_bin, echo.data());
            const cplx rot = ch.alpha * std::polar(1.0, 2.0 * std::numbers::pi * ch.doppler_hz *
                                                            static_cast<double>(k) * pri_s);
            for (std::size_t l = 0; l < len; ++l) out[l] = rot * echo[l];
        } else {
            std::fill(out, out + len, cplx{0.0, 0.0});
        }
        if (ch.si_gain != cplx{0.0, 0.0}) {
            for (std::size_t l = 0; l < len; ++l) out[l] += ch.si_gain * direct[l];
        }
        if (ch.noise_psd > 0.0) {
            for (std::size_t l = 0; l < len; ++l) out[l] += draw_cn(eng, ch.noise_psd);
        }
    }
    return y;
}

}  // namespace fdisac
