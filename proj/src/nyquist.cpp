#include "fdisac/nyquist.hpp"

#include <cmath>
#include <numbers>

#include "fdisac/errors.hpp"

namespace fdisac {

namespace {

// Unit-energy root-raised-cosine, time in chips.
double rrc_value(double t, double beta) {
    constexpr double kEps = 1e-12;
    const double pi = std::numbers::pi;
    if (std::abs(t) < kEps) return 1.0 - beta + 4.0 * beta / pi;
    if (beta > 0.0 && std::abs(std::abs(4.0 * beta * t) - 1.0) < kEps) {
        return (beta / std::sqrt(2.0)) *
               ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) +
                (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
    }
    const double num = std::sin(pi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(pi * t * (1.0 + beta));
    const double den = pi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
    return num / den;
}

void normalize_energy(std::vector<double>& p, std::size_t os) {
    double e = 0.0;
    for (double v : p) e += v * v;
    e /= static_cast<double>(os);
    const double s = 1.0 / std::sqrt(e);
    for (double& v : p) v *= s;
}

// Riemann-sum autocorrelation at integer chip lag m >= 0.
double chip_autocorr(const std::vector<double>& p, std::size_t os, std::size_t m) {
    const std::size_t shift = m * os;
    if (shift >= p.size()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = shift; i < p.size(); ++i) acc += p[i] * p[i - shift];
    return acc / static_cast<double>(os);
}

}  // namespace

NyquistPulse make_nyquist_pulse(std::size_t oversampling_factor, double rolloff,
                                std::size_t rrc_half_support, std::size_t corrector_half_support) {
    if (oversampling_factor < 2) throw ConfigInvalid("oversampling_factor must be >= 2");
    if (!(rolloff > 0.0 && rolloff <= 1.0)) throw ConfigInvalid("rolloff must be in (0, 1]");
    if (rrc_half_support < 4) throw ConfigInvalid("rrc_half_support must be >= 4 chips");

    const std::size_t os = oversampling_factor;
    const std::size_t half = rrc_half_support * os;
    std::vector<double> p(2 * half + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(half)) / static_cast<double>(os);
        p[i] = rrc_value(t, rolloff);
    }
    normalize_energy(p, os);

    // Chip-lag autocorrelation of the truncated pulse and its folded spectrum.
    const std::size_t max_lag = 2 * rrc_half_support;
    std::vector<double> r(max_lag + 1);
    for (std::size_t m = 0; m <= max_lag; ++m) r[m] = chip_autocorr(p, os, m);

    const std::size_t nfreq = 8192;
    const double pi = std::numbers::pi;
    std::vector<double> w_inv_sqrt(nfreq);
    for (std::size_t t = 0; t < nfreq; ++t) {
        const double w = pi * (static_cast<double>(t) + 0.5) / static_cast<double>(nfreq);
        double spec = r[0];
        for (std::size_t m = 1; m <= max_lag; ++m) spec += 2.0 * r[m] * std::cos(w * static_cast<double>(m));
        if (spec <= 1e-6) throw ConfigInvalid("pulse folded spectrum not positive; widen support");
        w_inv_sqrt[t] = 1.0 / std::sqrt(spec);
    }

    // Zero-phase corrector taps c[m]; convolving at chip offsets whitens the
    // chip-lag autocorrelation of the truncated pulse.
    const std::size_t wlen = corrector_half_support;
    std::vector<double> c(wlen + 1);
    for (std::size_t m = 0; m <= wlen; ++m) {
        double acc = 0.0;
        for (std::size_t t = 0; t < nfreq; ++t) {
            const double w = pi * (static_cast<double>(t) + 0.5) / static_cast<double>(nfreq);
            acc += w_inv_sqrt[t] * std::cos(w * static_cast<double>(m));
        }
        c[m] = acc / static_cast<double>(nfreq);
    }

    std::vector<double> q(p.size() + 2 * wlen * os, 0.0);
    for (long long m = -static_cast<long long>(wlen); m <= static_cast<long long>(wlen); ++m) {
        const double cm = c[static_cast<std::size_t>(std::llabs(m))];
        const std::size_t off = static_cast<std::size_t>(m + static_cast<long long>(wlen)) * os;
        for (std::size_t i = 0; i < p.size(); ++i) q[off + i] += cm * p[i];
    }
    normalize_energy(q, os);

    NyquistPulse pulse;
    pulse.oversampling_factor = os;
    pulse.support_chips = rrc_half_support + corrector_half_support;
    pulse.rolloff = rolloff;
    pulse.samples = std::move(q);
    return pulse;
}

double max_offpeak_chip_autocorr(const NyquistPulse& pulse) {
    double worst = 0.0;
    for (std::size_t m = 1; m <= 2 * pulse.support_chips; ++m) {
        worst = std::max(worst, std::abs(chip_autocorr(pulse.samples, pulse.oversampling_factor, m)));
    }
    return worst;
}

CMat continuous_projection_oracle(const BasebandFrame& frame, const NyquistPulse& pulse,
                                  std::size_t n_tau) {
    const std::size_t n = frame.pulse_chips;
    const std::size_t j = frame.comm_chips;
    const std::size_t pri_len = n + j;
    const std::size_t k_total = frame.pris;
    if (n_tau > j) throw DelayOutOfRange("delay bin " + std::to_string(n_tau) + " outside [0, J]");

    const std::size_t os = pulse.oversampling_factor;
    const long long supp = static_cast<long long>(pulse.support_chips);
    // The samples are unit-energy in chip-normalized time; integrating in the
    // same variable keeps R_psi(0) = 1 and makes the sqrt(Tc) factors of the
    // physical pulse cancel, so the projection comes out in chip units.
    const double dt = 1.0 / static_cast<double>(os);
    const double ap = std::sqrt(frame.radar_power_w * frame.chip_duration_s);
    const double ac = std::sqrt(frame.comm_power_w * frame.chip_duration_s);

    // Undelayed chip value at global stream position g (PRI p = floor(g / (N+J))).
    // The row before PRI 0 carries only the warm-up comm symbols.
    auto stream_chip = [&](long long g) -> cplx {
        long long p = g >= 0 ? g / static_cast<long long>(pri_len)
                             : -(((-g) + static_cast<long long>(pri_len) - 1) /
                                 static_cast<long long>(pri_len));
        const long long local = g - p * static_cast<long long>(pri_len);
        if (p >= 0 && p < static_cast<long long>(k_total)) {
            if (local < static_cast<long long>(n))
                return ap * frame.embedded_symbols[static_cast<std::size_t>(p)] *
                       frame.code[static_cast<std::size_t>(local)];
            return ac * frame.comm_symbols.at(static_cast<std::size_t>(p),
                                              static_cast<std::size_t>(local - static_cast<long long>(n)));
        }
        if (p == -1 && local >= static_cast<long long>(n))
            return ac * frame.warmup_symbols[static_cast<std::size_t>(local - static_cast<long long>(n))];
        return cplx{0.0, 0.0};
    };

    CMat out(k_total, pri_len);
    // Oversampled reconstruction buffer covering one PRI plus pulse tails.
    const long long buf_chips = static_cast<long long>(pri_len) + 2 * (supp + 1);
    std::vector<cplx> xbuf(static_cast<std::size_t>(buf_chips) * os);

    for (std::size_t k = 0; k < k_total; ++k) {
        std::fill(xbuf.begin(), xbuf.end(), cplx{0.0, 0.0});
        const long long base = static_cast<long long>(k) * static_cast<long long>(pri_len);
        // Grid sample i in xbuf corresponds to t = (base - supp - 1 + i/os) * Tc.
        const long long grid0 = (base - supp - 1) * static_cast<long long>(os);

        // Delayed waveform: chip g of the undelayed stream sits at (g + n_tau)*Tc.
        const long long g_min = base - 2 * supp - 1 - static_cast<long long>(n_tau);
        const long long g_max = base + static_cast<long long>(pri_len) + 2 * supp + 1;
        for (long long g = g_min; g <= g_max; ++g) {
            const cplx v = stream_chip(g);
            if (v == cplx{0.0, 0.0}) continue;
            const long long centre = (g + static_cast<long long>(n_tau)) * static_cast<long long>(os) - grid0;
            const long long start = centre - static_cast<long long>(pulse.centre());
            for (std::size_t i = 0; i < pulse.samples.size(); ++i) {
                const long long idx = start + static_cast<long long>(i);
                if (idx < 0 || idx >= static_cast<long long>(xbuf.size())) continue;
                xbuf[static_cast<std::size_t>(idx)] += v * pulse.samples[i];
            }
        }

        for (std::size_t l = 0; l < pri_len; ++l) {
            const long long centre = (base + static_cast<long long>(l)) * static_cast<long long>(os) - grid0;
            const long long start = centre - static_cast<long long>(pulse.centre());
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < pulse.samples.size(); ++i) {
                const long long idx = start + static_cast<long long>(i);
                if (idx < 0 || idx >= static_cast<long long>(xbuf.size())) continue;
                acc += xbuf[static_cast<std::size_t>(idx)] * pulse.samples[i];
            }
            out.at(k, l) = acc * dt;
        }
    }
    return out;
}

}  // namespace fdisac
