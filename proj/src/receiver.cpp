#include "fdisac/receiver.hpp"

#include <cmath>
#include <numbers>

#include "fdisac/errors.hpp"
#include "fdisac/rng.hpp"

namespace fdisac {

CMat cancel_si(const CMat& received, const BasebandFrame& frame, cplx beta, double eps,
               std::uint64_t seed) {
    const std::size_t len = frame.chips_per_pri();
    if (received.rows != frame.pris || received.cols != len)
        throw DimensionMismatch("received matrix does not match frame dimensions");
    if (eps < 0.0 || eps > 1.0) throw ConfigInvalid("sic factor eps must be in [0, 1]");

    const std::size_t n = frame.pulse_chips;
    const double tc = frame.chip_duration_s;
    const double amp_pulse = std::sqrt(eps) * std::sqrt(tc * frame.radar_power_w);
    const double amp_comm = std::sqrt(eps) * std::sqrt(tc * frame.comm_power_w);

    auto eng = make_engine(seed, stream::kResidualSi);
    CMat out(received.rows, received.cols);
    for (std::size_t k = 0; k < frame.pris; ++k) {
        const cplx* in = received.row(k);
        const cplx* direct = frame.pri_samples.row(k);
        cplx* o = out.row(k);
        for (std::size_t l = 0; l < len; ++l) o[l] = in[l] - beta * direct[l];
        if (eps > 0.0 && beta != cplx{0.0, 0.0}) {
            for (std::size_t l = 0; l < len; ++l) {
                const double amp = l < n ? amp_pulse : amp_comm;
                o[l] += beta * amp * draw_cn(eng, 1.0);
            }
        }
    }
    return out;
}

RangeDopplerMap matched_filter_bank(const CMat& cancelled, const BasebandFrame& frame) {
    const std::size_t len = frame.chips_per_pri();
    if (cancelled.rows != frame.pris || cancelled.cols != len)
        throw DimensionMismatch("input matrix does not match frame dimensions");

    RangeDopplerMap map;
    map.range_bins = frame.comm_chips;
    map.pris = frame.pris;
    map.mf_output = CMat(map.range_bins, map.pris);

    std::vector<cplx> ref(len);
    for (std::size_t bin = 1; bin <= map.range_bins; ++bin) {
        cplx* out_row = map.mf_output.row(bin - 1);
        for (std::size_t k = 0; k < frame.pris; ++k) {
            frame.echo_reference(k, bin, ref.data());
            double norm_sq = 0.0;
            cplx acc{0.0, 0.0};
            const cplx* y = cancelled.row(k);
            for (std::size_t l = 0; l < len; ++l) {
                norm_sq += std::norm(ref[l]);
                acc += std::conj(ref[l]) * y[l];
            }
            out_row[k] = acc / std::sqrt(norm_sq);
        }
    }
    return map;
}

void doppler_dft(RangeDopplerMap& map) {
    const std::size_t k_total = map.pris;
    if (k_total < 2) throw ConfigInvalid("Doppler DFT needs K >= 2");
    map.dft_output = CMat(map.range_bins, k_total);
    map.magnitude = Mat(map.range_bins, k_total);

    // Twiddle table e^{-j2pi m/K}, m = q'*k mod K.
    std::vector<cplx> tw(k_total);
    for (std::size_t m = 0; m < k_total; ++m)
        tw[m] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) /
                                    static_cast<double>(k_total));

    const double scale = 1.0 / std::sqrt(static_cast<double>(k_total));
    for (std::size_t r = 0; r < map.range_bins; ++r) {
        const cplx* in = map.mf_output.row(r);
        cplx* out = map.dft_output.row(r);
        double* mag = map.magnitude.row(r);
        for (std::size_t q = 0; q < k_total; ++q) {
            cplx acc{0.0, 0.0};
            std::size_t m = 0;
            for (std::size_t k = 0; k < k_total; ++k) {
                acc += in[k] * tw[m];
                m += q;
                if (m >= k_total) m -= k_total;
            }
            out[q] = acc * scale;
            mag[q] = std::abs(out[q]);
        }
    }
}

DetectionResult detect(const RangeDopplerMap& map, const std::vector<double>& sigma_phi_sq,
                       double p_fa) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw InvalidProbability("P_FA must be in (0, 1)");
    if (sigma_phi_sq.size() != map.range_bins)
        throw DimensionMismatch("sigma_phi_sq must carry one value per range bin");
    if (map.magnitude.rows != map.range_bins)
        throw DimensionMismatch("run doppler_dft before detect");

    const double k_factor = std::sqrt(-std::log(p_fa));
    DetectionResult res;
    res.statistic = map.magnitude;
    res.threshold = Mat(map.range_bins, map.pris);
    res.sigma_phi_sq = Mat(map.range_bins, map.pris);
    res.decisions.assign(map.range_bins * map.pris, 0);

    for (std::size_t r = 0; r < map.range_bins; ++r) {
        if (!(sigma_phi_sq[r] > 0.0)) throw ConfigInvalid("sigma_phi_sq must be > 0 per bin");
        const double thr = std::sqrt(sigma_phi_sq[r]) * k_factor;
        for (std::size_t q = 0; q < map.pris; ++q) {
            res.threshold.at(r, q) = thr;
            res.sigma_phi_sq.at(r, q) = sigma_phi_sq[r];
            res.decisions[r * map.pris + q] = res.statistic.at(r, q) > thr ? 1 : 0;
        }
    }
    return res;
}

}  // namespace fdisac
