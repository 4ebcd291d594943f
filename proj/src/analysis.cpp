#include "fdisac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fdisac/errors.hpp"

namespace fdisac {

namespace {

// Regularized upper incomplete gamma Q(s, y), s >= 1. Series for the lower
// tail when y < s+1, Lentz continued fraction otherwise.
double regularized_gamma_q(double s, double y) {
    if (y <= 0.0) return 1.0;
    const double log_prefix = -y + s * std::log(y) - std::lgamma(s);
    if (y < s + 1.0) {
        double ap = s;
        double sum = 1.0 / s;
        double del = sum;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= y / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-17) break;
        }
        return 1.0 - sum * std::exp(log_prefix);
    }
    const double tiny = 1e-300;
    double b = y + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-17) break;
    }
    return std::exp(log_prefix) * h;
}

}  // namespace

double marcum_q1(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw ConfigInvalid("marcum_q1 requires finite nonnegative arguments");
    if (b <= 0.0) return 1.0;
    if (a <= 0.0) return std::exp(-0.5 * b * b);

    const double x = 0.5 * a * a;
    const double y = 0.5 * b * b;
    // Complement bound 1 - Q1 <= exp(-(a-b)^2/2) for a > b.
    if (a > b && 0.5 * (a - b) * (a - b) > 60.0) return 1.0;

    // Poisson(x)-weighted sum of upper regularized gammas:
    //   Q1 = sum_n e^{-x} x^n/n! * Q(n+1, y),
    // summed from below the Poisson bulk so nothing underflows.
    const auto n_lo = static_cast<long long>(std::max(0.0, std::floor(x - 9.5 * std::sqrt(x) - 10.0)));
    double p = (n_lo == 0) ? std::exp(-x)
                           : std::exp(-x + static_cast<double>(n_lo) * std::log(x) -
                                      std::lgamma(static_cast<double>(n_lo) + 1.0));
    double big_g = regularized_gamma_q(static_cast<double>(n_lo) + 1.0, y);
    const double ln_y = std::log(y);
    double ln_g = -y + (static_cast<double>(n_lo) + 1.0) * ln_y -
                  std::lgamma(static_cast<double>(n_lo) + 2.0);

    double acc = p * big_g;
    for (long long n = n_lo + 1;; ++n) {
        p *= x / static_cast<double>(n);
        big_g = std::min(1.0, big_g + std::exp(ln_g));
        ln_g += ln_y - std::log(static_cast<double>(n) + 1.0);
        acc += p * big_g;
        if (static_cast<double>(n) > x) {
            const double r = x / (static_cast<double>(n) + 1.0);
            if (p * r / (1.0 - r) < 1e-17) break;
        }
        if (n > n_lo + 100000000LL) break;
    }
    return std::clamp(acc, 0.0, 1.0);
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double prob_detection(double sinr_k, double p_fa) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw InvalidProbability("P_FA must be in (0, 1)");
    if (!(sinr_k >= 0.0)) throw ConfigInvalid("sinr_k must be >= 0");
    return marcum_q1(std::sqrt(2.0 * sinr_k), std::sqrt(-2.0 * std::log(p_fa)));
}

double residual_si_power(double radar_power_w, double comm_power_w, std::size_t n_tau,
                         std::size_t pulse_chips, std::size_t comm_chips, double chip_duration_s,
                         double si_gain_sq, double sic_factor) {
    if (n_tau < 1 || n_tau > comm_chips)
        throw DelayOutOfRange("delay bin " + std::to_string(n_tau) + " outside [1, J]");
    const double pr = radar_power_w;
    const double pc = comm_power_w;
    const double n = static_cast<double>(pulse_chips);
    const double j = static_cast<double>(comm_chips);
    const double denom = pc * j + pr * n;
    const double scale = sic_factor * si_gain_sq * chip_duration_s / denom;
    if (n_tau <= pulse_chips) {
        const double d = pr - pc;
        return scale * (pr * pr * n + pc * pc * j - static_cast<double>(n_tau) * d * d);
    }
    return scale * (pc * pc * (j - n) + 2.0 * pc * pr * n);
}

SinrBreakdown sinr1(double radar_power_w, double comm_power_w, std::size_t n_tau,
                    const ChannelState& ch, const WaveformConfig& cfg) {
    const double n = static_cast<double>(cfg.chips_per_pulse);
    const double j = static_cast<double>(cfg.comm_chips);
    const double combined = comm_power_w * j + radar_power_w * n;
    if (!(combined > 0.0)) throw ConfigInvalid("Pc*J + Pr*N must be > 0");

    const double resid_joule =
        residual_si_power(radar_power_w, comm_power_w, n_tau, cfg.chips_per_pulse, cfg.comm_chips,
                          cfg.chip_duration_s, std::norm(ch.si_gain), ch.sic_factor);

    SinrBreakdown out;
    out.branch = n_tau <= cfg.chips_per_pulse ? RangeBranch::Near : RangeBranch::Far;
    out.signal_power_w = std::norm(ch.alpha) * combined;
    out.residual_si_power_w = resid_joule / cfg.chip_duration_s;
    out.noise_power_w = ch.noise_psd * cfg.bandwidth_hz;
    out.sinr_1 = out.signal_power_w / (out.residual_si_power_w + out.noise_power_w);
    out.sinr_k = static_cast<double>(cfg.pris_per_cpi) * out.sinr_1;
    return out;
}

std::vector<double> sigma_phi_sq_per_bin(const WaveformConfig& cfg, const ChannelState& ch) {
    std::vector<double> out(cfg.comm_chips);
    for (std::size_t bin = 1; bin <= cfg.comm_chips; ++bin) {
        out[bin - 1] = residual_si_power(cfg.radar_power_w, cfg.comm_power_w, bin,
                                         cfg.chips_per_pulse, cfg.comm_chips, cfg.chip_duration_s,
                                         std::norm(ch.si_gain), ch.sic_factor) +
                       ch.noise_psd;
    }
    return out;
}

double blind_range_m(double pulse_duration_s, double recovery_time_s) {
    return kSpeedOfLight * (pulse_duration_s + recovery_time_s) / 2.0;
}

double unambiguous_range_m(double pri_s, double pulse_duration_s) {
    return kSpeedOfLight * (pri_s - pulse_duration_s) / 2.0;
}

double range_resolution_m(double bandwidth_hz) { return kSpeedOfLight / (2.0 * bandwidth_hz); }

namespace {

// chi(m*Tc, f_d) of PRI k as a complex value:
//   sum_l x^d_k[l] * conj(x^r_{k,m}[l]) * e^{-j*2*pi*f_d*l*Tc}.
cplx acf_kernel(const BasebandFrame& frame, std::size_t k, std::size_t m, double doppler_hz,
                std::vector<cplx>& scratch) {
    const std::size_t len = frame.chips_per_pri();
    scratch.resize(len);
    frame.echo_reference(k, m, scratch.data());
    const cplx* direct = frame.pri_samples.row(k);
    cplx acc{0.0, 0.0};
    if (doppler_hz == 0.0) {
        for (std::size_t l = 0; l < len; ++l) acc += direct[l] * std::conj(scratch[l]);
    } else {
        const double step = -2.0 * std::numbers::pi * doppler_hz * frame.chip_duration_s;
        for (std::size_t l = 0; l < len; ++l)
            acc += direct[l] * std::conj(scratch[l]) * std::polar(1.0, step * static_cast<double>(l));
    }
    return acc;
}

// Pulse-on-pulse part of chi(m*Tc, 0): Pr*Tc * sum c[l] conj(c[l-m]).
cplx pulse_acf_part(const BasebandFrame& frame, std::size_t m) {
    if (m >= frame.pulse_chips) return {0.0, 0.0};
    cplx acc{0.0, 0.0};
    for (std::size_t l = m; l < frame.pulse_chips; ++l)
        acc += frame.code[l] * std::conj(frame.code[l - m]);
    return acc * frame.radar_power_w * frame.chip_duration_s;
}

double frame_zero_lag_energy(const BasebandFrame& frame) {
    const cplx* row = frame.pri_samples.row(0);
    double acc = 0.0;
    for (std::size_t l = 0; l < frame.chips_per_pri(); ++l) acc += std::norm(row[l]);
    return acc;
}

std::size_t lag_to_bin(const BasebandFrame& frame, double lag_s) {
    const double max_lag = static_cast<double>(frame.comm_chips) * frame.chip_duration_s;
    if (std::abs(lag_s) > max_lag * (1.0 + 1e-9))
        throw LagOutOfRange("lag outside [-(T-Tp), T-Tp]");
    return static_cast<std::size_t>(std::llround(std::abs(lag_s) / frame.chip_duration_s));
}

}  // namespace

AcfCurve acf_curve(const BasebandFrame& frame, const std::vector<double>& lags_s) {
    AcfCurve curve;
    curve.lags_s = lags_s;
    curve.values.resize(lags_s.size());
    curve.pulse_component.resize(lags_s.size());
    curve.cross_component.resize(lags_s.size());
    curve.tail_component.resize(lags_s.size());

    const double norm0 = frame_zero_lag_energy(frame);
    std::vector<cplx> scratch;
    for (std::size_t i = 0; i < lags_s.size(); ++i) {
        const std::size_t m = lag_to_bin(frame, lags_s[i]);
        const cplx total = acf_kernel(frame, 0, m, 0.0, scratch);
        curve.values[i] = std::abs(total) / norm0;
        if (m <= frame.pulse_chips) {
            const cplx pulse = pulse_acf_part(frame, m);
            curve.pulse_component[i] = std::abs(pulse) / norm0;
            curve.cross_component[i] = std::abs(total - pulse) / norm0;
            curve.tail_component[i] = 0.0;
        } else {
            curve.pulse_component[i] = 0.0;
            curve.cross_component[i] = 0.0;
            curve.tail_component[i] = std::abs(total) / norm0;
        }
    }

    double peak_side = 0.0;
    for (std::size_t m = 1; m <= frame.comm_chips; ++m) {
        peak_side = std::max(peak_side, std::abs(acf_kernel(frame, 0, m, 0.0, scratch)) / norm0);
    }
    curve.psl_db = linear_to_db(peak_side);
    return curve;
}

Mat af_surface(const BasebandFrame& frame, const std::vector<double>& lags_s,
               const std::vector<double>& doppler_hz) {
    const double norm0 = frame_zero_lag_energy(frame);
    Mat out(doppler_hz.size(), lags_s.size());
    std::vector<cplx> scratch;
    for (std::size_t r = 0; r < doppler_hz.size(); ++r) {
        for (std::size_t i = 0; i < lags_s.size(); ++i) {
            const std::size_t m = lag_to_bin(frame, lags_s[i]);
            // |chi(-tau, f)| = |chi(tau, -f)|
            const double fd = lags_s[i] < 0.0 ? -doppler_hz[r] : doppler_hz[r];
            out.at(r, i) = std::abs(acf_kernel(frame, 0, m, fd, scratch)) / norm0;
        }
    }
    return out;
}

double rate_embedded(std::size_t psk_order, double duty_cycle, std::size_t pulse_chips) {
    if (psk_order < 2) throw ConfigInvalid("psk_order must be >= 2");
    return duty_cycle / static_cast<double>(pulse_chips) * std::log2(static_cast<double>(psk_order));
}

double rate_total(std::size_t psk_order, double duty_cycle, std::size_t pulse_chips) {
    return rate_embedded(psk_order, duty_cycle, pulse_chips) +
           (1.0 - duty_cycle) * std::log2(static_cast<double>(psk_order));
}

}  // namespace fdisac
