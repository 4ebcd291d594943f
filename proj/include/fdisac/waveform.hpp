#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdisac/errors.hpp"
#include "fdisac/types.hpp"

namespace fdisac {

enum class CodeKind { LfmDerived, Barker, Custom };
enum class CommConstellation { PskM, Gaussian };

/**
 * Frame/timing/power/modulation parameters of one coherent processing
 * interval. All quantities in SI base units; chip_duration_s is always 1/B
 * so products like N0*B and Tc-scaled powers stay consistent.
 */
struct WaveformConfig {
    double bandwidth_hz = 0.0;       // B
    double pri_s = 0.0;              // T
    double pulse_duration_s = 0.0;   // Tp
    std::size_t chips_per_pulse = 0; // N = round(B*Tp)
    std::size_t comm_chips = 0;      // J = round(B*(T-Tp))
    std::size_t pris_per_cpi = 0;    // K
    double radar_power_w = 0.0;      // Pr
    double comm_power_w = 0.0;       // Pc
    std::size_t psk_order = 2;       // M
    CodeKind code_kind = CodeKind::LfmDerived;
    CommConstellation comm_constellation = CommConstellation::Gaussian;
    double chip_duration_s = 0.0;    // Tc = 1/B
    double duty_cycle = 0.0;         // rho = Tp/T

    std::size_t chips_per_pri() const { return chips_per_pulse + comm_chips; }
};

/// Build a validated config from the free parameters. Throws ConfigInvalid
/// listing every violated invariant (N,J >= 1, N+J = round(B*T), 0 < Tp < T,
/// powers nonnegative and not both zero, M >= 2, K >= 1).
WaveformConfig make_waveform_config(double bandwidth_hz, double pri_s, double pulse_duration_s,
                                    std::size_t pris_per_cpi, double radar_power_w,
                                    double comm_power_w, std::size_t psk_order,
                                    CodeKind code_kind = CodeKind::LfmDerived,
                                    CommConstellation constellation = CommConstellation::Gaussian);

/// Length-N fast-time code with ||chips||^2 == N.
struct FastTimeCode {
    std::vector<cplx> chips;
    std::string label;
};

/// c[n] = exp(j*pi*n^2/N).
FastTimeCode make_lfm_code(std::size_t n);

/// Standard biphase Barker sequence; supported lengths 2,3,4,5,7,11,13.
/// Length-2 convention is [+1,-1], length-4 is [+1,+1,-1,+1].
FastTimeCode make_barker_code(std::size_t length);

/// Arbitrary chips, rescaled so that ||chips||^2 == N.
FastTimeCode make_custom_code(std::vector<cplx> chips, std::string label = "custom");

/// Slow-time PSK symbols w_k = exp(j*2*pi*(m-1)/M), m uniform on 1..M.
std::vector<cplx> draw_embedded_symbols(std::size_t psk_order, std::size_t count,
                                        std::uint64_t seed);

/// K x J i.i.d. unit-power dedicated symbols (PSK keeps |s|=1, Gaussian is
/// circularly symmetric complex normal).
CMat draw_comm_symbols(CommConstellation kind, std::size_t pris, std::size_t chips,
                       std::uint64_t seed, std::size_t psk_order = 4);

/**
 * Discrete chip-rate samples of one CPI plus everything the monostatic
 * receiver needs to rebuild delayed references: the code, the embedded and
 * dedicated symbols, and the previous-PRI warm-up row that the first PRI's
 * echo tail references.
 */
struct BasebandFrame {
    std::size_t pulse_chips = 0;  // N
    std::size_t comm_chips = 0;   // J
    std::size_t pris = 0;         // K
    double radar_power_w = 0.0;
    double comm_power_w = 0.0;
    double chip_duration_s = 0.0;

    std::vector<cplx> code;              // N chips
    std::vector<cplx> embedded_symbols;  // w_k, length K
    CMat comm_symbols;                   // s_k[j], K x J
    std::vector<cplx> warmup_symbols;    // s_{-1}[j], length J (zeros if not supplied)

    CMat pri_samples;  // K x (N+J)

    enum class Segment : unsigned char { Pulse, Comm };
    std::vector<Segment> segment_map;  // N+J

    std::size_t chips_per_pri() const { return pulse_chips + comm_chips; }

    /// Writes the delayed/undelayed reference x^r_{k,n_tau} (N+J samples)
    /// into out. n_tau = 0 gives the direct sequence x^d_k; 1..J give the
    /// echo layout [tail of s_{k-1} | shifted code | head of s_k].
    void echo_reference(std::size_t k, std::size_t n_tau, cplx* out) const;

    double echo_reference_norm(std::size_t k, std::size_t n_tau) const;
};

/// Assemble the per-PRI chip sequences. warmup (length J) seeds the s_{-1}
/// row; pass nullptr for an all-zero warm-up row.
BasebandFrame assemble_frame(const WaveformConfig& cfg, const FastTimeCode& code,
                             const std::vector<cplx>& embedded, const CMat& comm_symbols,
                             const std::vector<cplx>* warmup = nullptr);

}  // namespace fdisac
