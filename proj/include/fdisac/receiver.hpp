#pragma once

#include <cstdint>
#include <vector>

#include "fdisac/types.hpp"
#include "fdisac/waveform.hpp"

namespace fdisac {

/**
 * Matched-filter and Doppler-processing output for one CPI: J range bins by
 * K PRIs before the slow-time DFT, J range bins by K Doppler bins after.
 * Doppler bins are stored in natural DFT order; doppler_index maps a signed
 * bin q in [-K/2, K/2] onto a column.
 */
struct RangeDopplerMap {
    std::size_t range_bins = 0;  // J
    std::size_t pris = 0;        // K
    CMat mf_output;              // J x K, row r = range bin r+1
    CMat dft_output;             // J x K
    Mat magnitude;               // |dft_output|

    static std::size_t doppler_index(int q, std::size_t k_total) {
        long long idx = q % static_cast<long long>(k_total);
        if (idx < 0) idx += static_cast<long long>(k_total);
        return static_cast<std::size_t>(idx);
    }
};

/**
 * Subtracts the known direct-path SI beta*x^d_k and injects the residual
 * model sqrt(eps)*beta*diag(sqrt(Tc*p^d))*z_k with z_k ~ CN(0, I): the
 * after-cancellation frontend is treated as worst-case Gaussian with power
 * proportional to the pre-cancellation SI. eps = 0 removes SI entirely.
 */
CMat cancel_si(const CMat& received, const BasebandFrame& frame, cplx beta, double eps,
               std::uint64_t seed);

/// J parallel filters h_{k,n'} = x^r_{k,n'} / ||x^r_{k,n'}||, rebuilt per PRI
/// from the known transmitted symbols (the references are symbol-dependent,
/// so this is a direct correlation, not an FFT convolution).
RangeDopplerMap matched_filter_bank(const CMat& cancelled, const BasebandFrame& frame);

/// Unitary slow-time DFT per range bin: Y[q'] = (1/sqrt(K)) sum_k y_k e^{-j2pi q'k/K}.
void doppler_dft(RangeDopplerMap& map);

struct DetectionResult {
    Mat statistic;                    // z = |Y|, J x K
    Mat threshold;                    // per-cell threshold, J x K
    Mat sigma_phi_sq;                 // noise + residual-SI power per cell
    std::vector<std::uint8_t> decisions;  // row-major J x K, 1 = detection
};

/**
 * Linear detector z = |Y| against per-range-bin thresholds
 * T = sigma_phi * sqrt(-ln P_FA), so that P(z > T | H0) = P_FA under the
 * Rayleigh null law. sigma_phi_sq carries one value per range bin (the
 * residual-SI power is delay-dependent).
 */
DetectionResult detect(const RangeDopplerMap& map, const std::vector<double>& sigma_phi_sq,
                       double p_fa);

}  // namespace fdisac
