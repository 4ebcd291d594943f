#include "fdisac/waveform.hpp"

#include <cmath>
#include <numbers>

#include "fdisac/rng.hpp"

namespace fdisac {

namespace {

long long round_count(double x) { return std::llround(x); }

}  // namespace

WaveformConfig make_waveform_config(double bandwidth_hz, double pri_s, double pulse_duration_s,
                                    std::size_t pris_per_cpi, double radar_power_w,
                                    double comm_power_w, std::size_t psk_order, CodeKind code_kind,
                                    CommConstellation constellation) {
    std::vector<std::string> bad;
    if (!(bandwidth_hz > 0.0)) bad.push_back("bandwidth_hz must be > 0");
    if (!(pri_s > 0.0)) bad.push_back("pri_s must be > 0");
    if (!(pulse_duration_s > 0.0)) bad.push_back("pulse_duration_s must be > 0");
    if (!(pulse_duration_s < pri_s)) bad.push_back("pulse_duration_s must be < pri_s");
    if (pris_per_cpi < 1) bad.push_back("pris_per_cpi must be >= 1");
    if (radar_power_w < 0.0) bad.push_back("radar_power_w must be >= 0");
    if (comm_power_w < 0.0) bad.push_back("comm_power_w must be >= 0");
    if (radar_power_w == 0.0 && comm_power_w == 0.0)
        bad.push_back("radar_power_w and comm_power_w must not both be zero");
    if (psk_order < 2) bad.push_back("psk_order must be >= 2");

    long long n = 0, j = 0;
    if (bandwidth_hz > 0.0 && pulse_duration_s > 0.0 && pri_s > pulse_duration_s) {
        n = round_count(bandwidth_hz * pulse_duration_s);
        j = round_count(bandwidth_hz * (pri_s - pulse_duration_s));
        const long long total = round_count(bandwidth_hz * pri_s);
        if (n < 1) bad.push_back("chips_per_pulse N = round(B*Tp) must be >= 1");
        if (j < 1) bad.push_back("comm_chips J = round(B*(T-Tp)) must be >= 1");
        if (n + j != total)
            bad.push_back("N + J must equal round(B*T); adjust B, T or Tp to integer chip counts");
    }
    if (!bad.empty()) throw ConfigInvalid(bad);

    WaveformConfig cfg;
    cfg.bandwidth_hz = bandwidth_hz;
    cfg.pri_s = pri_s;
    cfg.pulse_duration_s = pulse_duration_s;
    cfg.chips_per_pulse = static_cast<std::size_t>(n);
    cfg.comm_chips = static_cast<std::size_t>(j);
    cfg.pris_per_cpi = pris_per_cpi;
    cfg.radar_power_w = radar_power_w;
    cfg.comm_power_w = comm_power_w;
    cfg.psk_order = psk_order;
    cfg.code_kind = code_kind;
    cfg.comm_constellation = constellation;
    cfg.chip_duration_s = 1.0 / bandwidth_hz;
    cfg.duty_cycle = pulse_duration_s / pri_s;
    return cfg;
}

FastTimeCode make_lfm_code(std::size_t n) {
    if (n < 1) throw ConfigInvalid("LFM code length must be >= 1");
    FastTimeCode code;
    code.label = "lfm" + std::to_string(n);
    code.chips.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = std::numbers::pi * static_cast<double>(i) * static_cast<double>(i) /
                             static_cast<double>(n);
        code.chips[i] = std::polar(1.0, phase);
    }
    return code;
}

FastTimeCode make_barker_code(std::size_t length) {
    static const std::vector<std::pair<std::size_t, std::vector<int>>> kBarker = {
        {2, {+1, -1}},
        {3, {+1, +1, -1}},
        {4, {+1, +1, -1, +1}},
        {5, {+1, +1, +1, -1, +1}},
        {7, {+1, +1, +1, -1, -1, +1, -1}},
        {11, {+1, +1, +1, -1, -1, -1, +1, -1, -1, +1, -1}},
        {13, {+1, +1, +1, +1, +1, -1, -1, +1, +1, -1, +1, -1, +1}},
    };
    for (const auto& [len, seq] : kBarker) {
        if (len == length) {
            FastTimeCode code;
            code.label = "barker" + std::to_string(length);
            code.chips.reserve(length);
            for (int v : seq) code.chips.emplace_back(static_cast<double>(v), 0.0);
            return code;
        }
    }
    throw UnsupportedLength("no Barker code of length " + std::to_string(length));
}

FastTimeCode make_custom_code(std::vector<cplx> chips, std::string label) {
    if (chips.empty()) throw ConfigInvalid("custom code must be non-empty");
    double norm_sq = 0.0;
    for (const cplx& c : chips) norm_sq += std::norm(c);
    if (norm_sq <= 0.0) throw ConfigInvalid("custom code must have nonzero energy");
    const double scale = std::sqrt(static_cast<double>(chips.size()) / norm_sq);
    for (cplx& c : chips) c *= scale;
    return FastTimeCode{std::move(chips), std::move(label)};
}

std::vector<cplx> draw_embedded_symbols(std::size_t psk_order, std::size_t count,
                                        std::uint64_t seed) {
    auto eng = make_engine(seed, stream::kEmbeddedSymbols);
    std::uniform_int_distribution<std::size_t> pick(0, psk_order - 1);
    std::vector<cplx> out(count);
    for (auto& w : out) {
        w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(pick(eng)) /
                                static_cast<double>(psk_order));
    }
    return out;
}

CMat draw_comm_symbols(CommConstellation kind, std::size_t pris, std::size_t chips,
                       std::uint64_t seed, std::size_t psk_order) {
    auto eng = make_engine(seed, stream::kCommSymbols);
    CMat s(pris, chips);
    if (kind == CommConstellation::PskM) {
        std::uniform_int_distribution<std::size_t> pick(0, psk_order - 1);
        for (auto& v : s.data) {
            v = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(pick(eng)) /
                                    static_cast<double>(psk_order));
        }
    } else {
        for (auto& v : s.data) v = draw_cn(eng, 1.0);
    }
    return s;
}

BasebandFrame assemble_frame(const WaveformConfig& cfg, const FastTimeCode& code,
                             const std::vector<cplx>& embedded, const CMat& comm_symbols,
                             const std::vector<cplx>* warmup) {
    const std::size_t n = cfg.chips_per_pulse;
    const std::size_t j = cfg.comm_chips;
    const std::size_t k = cfg.pris_per_cpi;
    if (code.chips.size() != n)
        throw DimensionMismatch("code length " + std::to_string(code.chips.size()) +
                                " != chips_per_pulse " + std::to_string(n));
    if (embedded.size() != k)
        throw DimensionMismatch("embedded symbol count != pris_per_cpi");
    if (comm_symbols.rows != k || comm_symbols.cols != j)
        throw DimensionMismatch("comm symbol matrix must be K x J");
    if (warmup && warmup->size() != j)
        throw DimensionMismatch("warm-up row length != comm_chips");

    BasebandFrame f;
    f.pulse_chips = n;
    f.comm_chips = j;
    f.pris = k;
    f.radar_power_w = cfg.radar_power_w;
    f.comm_power_w = cfg.comm_power_w;
    f.chip_duration_s = cfg.chip_duration_s;
    f.code = code.chips;
    f.embedded_symbols = embedded;
    f.comm_symbols = comm_symbols;
    f.warmup_symbols = warmup ? *warmup : std::vector<cplx>(j, cplx{0.0, 0.0});

    const double ap = std::sqrt(cfg.radar_power_w * cfg.chip_duration_s);
    const double ac = std::sqrt(cfg.comm_power_w * cfg.chip_duration_s);

    f.pri_samples = CMat(k, n + j);
    for (std::size_t r = 0; r < k; ++r) {
        cplx* row = f.pri_samples.row(r);
        const cplx w = embedded[r];
        for (std::size_t l = 0; l < n; ++l) row[l] = ap * w * code.chips[l];
        const cplx* s = comm_symbols.row(r);
        for (std::size_t l = 0; l < j; ++l) row[n + l] = ac * s[l];
    }

    f.segment_map.resize(n + j);
    for (std::size_t l = 0; l < n + j; ++l)
        f.segment_map[l] = l < n ? BasebandFrame::Segment::Pulse : BasebandFrame::Segment::Comm;
    return f;
}

void BasebandFrame::echo_reference(std::size_t k, std::size_t n_tau, cplx* out) const {
    if (k >= pris) throw DimensionMismatch("PRI index out of range");
    if (n_tau > comm_chips)
        throw DelayOutOfRange("delay bin " + std::to_string(n_tau) + " outside [0, J]");

    const std::size_t n = pulse_chips;
    const std::size_t j = comm_chips;
    const double ap = std::sqrt(radar_power_w * chip_duration_s);
    const double ac = std::sqrt(comm_power_w * chip_duration_s);
    const cplx* prev = (k == 0) ? warmup_symbols.data() : comm_symbols.row(k - 1);
    const cplx* cur = comm_symbols.row(k);
    const cplx w = embedded_symbols[k];

    // [s_{k-1}[J-n_tau .. J-1] | w_k * c | s_k[0 .. J-n_tau-1]]
    for (std::size_t l = 0; l < n_tau; ++l) out[l] = ac * prev[j - n_tau + l];
    for (std::size_t l = 0; l < n; ++l) out[n_tau + l] = ap * w * code[l];
    for (std::size_t l = n_tau + n; l < n + j; ++l) out[l] = ac * cur[l - n - n_tau];
}

double BasebandFrame::echo_reference_norm(std::size_t k, std::size_t n_tau) const {
    std::vector<cplx> ref(chips_per_pri());
    echo_reference(k, n_tau, ref.data());
    double acc = 0.0;
    for (const cplx& v : ref) acc += std::norm(v);
    return std::sqrt(acc);
}

}  // namespace fdisac
