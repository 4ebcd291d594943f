#include "fdisac/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "fdisac/analysis.hpp"
#include "fdisac/comm.hpp"
#include "fdisac/errors.hpp"
#include "fdisac/receiver.hpp"
#include "fdisac/rng.hpp"

namespace fdisac {

using nlohmann::json;

std::vector<double> SweepSpec::grid() const {
    if (variable == SweepVariable::None) return {0.0};
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("FDISAC_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {

const char* kDefaultsJson = R"({
  "name": "unnamed",
  "waveform": {
    "bandwidth_hz": 1.0e8,
    "pri_s": 1.0e-5,
    "pulse_duration_s": 1.0e-6,
    "pris_per_cpi": 100,
    "radar_power_w": 1.0,
    "comm_power_w": 1.0,
    "psk_order": 128,
    "code": "lfm",
    "comm_constellation": "gaussian"
  },
  "link": {
    "carrier_freq_hz": 3.5e9,
    "tx_gain_db": 17.0,
    "rx_gain_db": 17.0,
    "comm_rx_gain_db": 0.0,
    "rcs_m2": 1.0,
    "target_range_m": 1349.0,
    "comm_range_m": 400.0,
    "pathloss_exponent": 2.7
  },
  "channel": {
    "si_gain_db": -20.0,
    "sic_factor_db": -80.0,
    "noise_psd_dbm_per_hz": -169.0,
    "doppler_bin": 0,
    "target_present": true
  },
  "detection": { "pfa": 1.0e-8 },
  "metrics": ["pd"],
  "mode": "analytic",
  "trials": 10000,
  "seed": 1
})";

const std::vector<std::string> kKnownMetrics = {
    "pd",        "sinr_1",        "sinr_k",     "sinr_k_db", "residual_si_w", "rate_embedded",
    "rate_dedicated", "rate_total", "ser_embedded", "acf",    "acf_db"};

bool metric_known(const std::string& m) {
    return std::find(kKnownMetrics.begin(), kKnownMetrics.end(), m) != kKnownMetrics.end();
}

struct Effective {
    WaveformConfig cfg;
    FastTimeCode code;
    LinkBudget link;
    double si_gain_sq = 0.0;
    double sic_factor = 0.0;
    double noise_psd = 0.0;
    int doppler_bin = 0;
    bool target_present = true;
    std::optional<double> target_sinr_k_db;
    double p_fa = 1e-8;
};

WaveformConfig waveform_from_json(const json& w, std::vector<std::string>* violations) {
    CodeKind kind = CodeKind::LfmDerived;
    const std::string code = w.at("code").get<std::string>();
    if (code == "lfm") {
        kind = CodeKind::LfmDerived;
    } else if (code == "barker") {
        kind = CodeKind::Barker;
    } else if (violations) {
        violations->push_back("waveform.code must be \"lfm\" or \"barker\"");
    }
    CommConstellation constellation = CommConstellation::Gaussian;
    const std::string cc = w.at("comm_constellation").get<std::string>();
    if (cc == "psk") {
        constellation = CommConstellation::PskM;
    } else if (cc == "gaussian") {
        constellation = CommConstellation::Gaussian;
    } else if (violations) {
        violations->push_back("waveform.comm_constellation must be \"psk\" or \"gaussian\"");
    }
    return make_waveform_config(w.at("bandwidth_hz").get<double>(), w.at("pri_s").get<double>(),
                                w.at("pulse_duration_s").get<double>(),
                                w.at("pris_per_cpi").get<std::size_t>(),
                                w.at("radar_power_w").get<double>(),
                                w.at("comm_power_w").get<double>(),
                                w.at("psk_order").get<std::size_t>(), kind, constellation);
}

LinkBudget link_from_json(const json& l) {
    LinkBudget lb;
    lb.carrier_freq_hz = l.at("carrier_freq_hz").get<double>();
    lb.tx_gain = db_to_linear(l.at("tx_gain_db").get<double>());
    lb.rx_gain = db_to_linear(l.at("rx_gain_db").get<double>());
    lb.comm_rx_gain = db_to_linear(l.at("comm_rx_gain_db").get<double>());
    lb.rcs_m2 = l.at("rcs_m2").get<double>();
    lb.target_range_m = l.at("target_range_m").get<double>();
    lb.comm_range_m = l.at("comm_range_m").get<double>();
    lb.pathloss_exponent = l.at("pathloss_exponent").get<double>();
    return lb;
}

double noise_psd_from_json(const json& ch) {
    if (ch.contains("noise_psd_w_per_hz")) return ch.at("noise_psd_w_per_hz").get<double>();
    return dbm_per_hz_to_w_per_hz(ch.at("noise_psd_dbm_per_hz").get<double>());
}

std::size_t range_to_bin(double range_m, double bandwidth_hz) {
    const double tau = 2.0 * range_m / kSpeedOfLight;
    const long long bin = std::llround(tau * bandwidth_hz);
    return bin < 0 ? 0 : static_cast<std::size_t>(bin);
}

// Validates one fully-merged document (variants already applied) and
// collects violations instead of stopping at the first.
void check_document(const json& doc, std::vector<std::string>& violations) {
    std::optional<WaveformConfig> cfg;
    try {
        cfg = waveform_from_json(doc.at("waveform"), &violations);
    } catch (const ConfigInvalid& e) {
        for (const auto& v : e.violations()) violations.push_back(v);
    } catch (const json::exception& e) {
        violations.push_back(std::string("waveform: ") + e.what());
    }

    try {
        const json& l = doc.at("link");
        if (!(l.at("carrier_freq_hz").get<double>() > 0.0))
            violations.push_back("link.carrier_freq_hz must be > 0");
        if (!(l.at("target_range_m").get<double>() > 0.0))
            violations.push_back("link.target_range_m must be > 0");
        if (!(l.at("comm_range_m").get<double>() > 0.0))
            violations.push_back("link.comm_range_m must be > 0");
        if (l.at("rcs_m2").get<double>() < 0.0) violations.push_back("link.rcs_m2 must be >= 0");
    } catch (const json::exception& e) {
        violations.push_back(std::string("link: ") + e.what());
    }

    try {
        const json& c = doc.at("channel");
        const double eps = db_to_linear(c.at("sic_factor_db").get<double>());
        if (eps > 1.0) violations.push_back("channel.sic_factor_db must be <= 0 dB");
        if (noise_psd_from_json(c) < 0.0) violations.push_back("channel noise PSD must be >= 0");
        if (cfg) {
            const long long half = static_cast<long long>(cfg->pris_per_cpi) / 2;
            const long long q = c.at("doppler_bin").get<long long>();
            if (q < -half || q > half)
                violations.push_back("channel.doppler_bin must lie in [-K/2, K/2]");
        }
    } catch (const json::exception& e) {
        violations.push_back(std::string("channel: ") + e.what());
    }

    try {
        const double pfa = doc.at("detection").at("pfa").get<double>();
        if (!(pfa > 0.0 && pfa < 1.0)) violations.push_back("detection.pfa must be in (0, 1)");
    } catch (const json::exception& e) {
        violations.push_back(std::string("detection: ") + e.what());
    }

    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        const std::string var = s.value("variable", "");
        if (var != "epsilon_db" && var != "comm_power_w" && var != "range_m" && var != "lag_s")
            violations.push_back("sweep.variable must be one of epsilon_db, comm_power_w, range_m, lag_s");
        const double start = s.value("start", 0.0);
        const double stop = s.value("stop", 0.0);
        const double step = s.value("step", 0.0);
        if (!(step > 0.0)) violations.push_back("sweep.step must be > 0");
        if (stop < start) violations.push_back("sweep.stop must be >= sweep.start");
        if (cfg && var == "lag_s") {
            const double max_lag =
                static_cast<double>(cfg->comm_chips) * cfg->chip_duration_s * (1.0 + 1e-9);
            if (std::abs(start) > max_lag || std::abs(stop) > max_lag)
                violations.push_back("sweep lag grid exceeds [-(T-Tp), T-Tp]");
        }
    }

    const std::string mode = doc.value("mode", "analytic");
    if (mode != "analytic" && mode != "mc" && mode != "both")
        violations.push_back("mode must be analytic, mc or both");
    if (mode != "analytic" && doc.value("trials", 0ULL) < 1)
        violations.push_back("trials must be >= 1 for Monte-Carlo modes");

    if (!doc.contains("metrics") || !doc.at("metrics").is_array() || doc.at("metrics").empty()) {
        violations.push_back("metrics must be a non-empty array");
    } else {
        for (const auto& m : doc.at("metrics")) {
            const std::string name = m.get<std::string>();
            if (!metric_known(name)) violations.push_back("unknown metric \"" + name + "\"");
            if ((name == "acf" || name == "acf_db") &&
                (!doc.contains("sweep") || doc.at("sweep").value("variable", "") != "lag_s"))
                violations.push_back("metric " + name + " requires a lag_s sweep");
        }
    }

    if (doc.contains("constraints") && cfg) {
        const json& cj = doc.at("constraints");
        const double avg = cj.at("avg_power_w").get<double>();
        const double pmax = cj.at("max_power_w").get<double>();
        const double actual =
            cfg->duty_cycle * cfg->radar_power_w + (1.0 - cfg->duty_cycle) * cfg->comm_power_w;
        if (std::abs(actual - avg) > 1e-9 * std::max(1.0, std::abs(avg))) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "power constraint violated: rho*Pr + (1-rho)*Pc = %.9g != avg %.9g",
                          actual, avg);
            violations.emplace_back(buf);
        }
        if (cfg->radar_power_w > pmax + 1e-12) violations.push_back("radar_power_w exceeds max_power_w");
        if (cfg->comm_power_w > pmax + 1e-12) violations.push_back("comm_power_w exceeds max_power_w");
        const std::string var = doc.contains("sweep") ? doc.at("sweep").value("variable", "") : "";
        if (var == "comm_power_w")
            violations.push_back("a comm_power_w sweep is incompatible with a fixed power constraint");
    }

    // Radar metrics need a resolvable delay bin.
    if (cfg) {
        bool needs_bin = false;
        if (doc.contains("metrics") && doc.at("metrics").is_array()) {
            for (const auto& m : doc.at("metrics")) {
                const std::string name = m.get<std::string>();
                if (name == "pd" || name == "sinr_1" || name == "sinr_k" || name == "sinr_k_db" ||
                    name == "residual_si_w")
                    needs_bin = true;
            }
        }
        const bool sweeps_range =
            doc.contains("sweep") && doc.at("sweep").value("variable", "") == "range_m";
        if (needs_bin && !sweeps_range) {
            const std::size_t bin =
                range_to_bin(doc.at("link").at("target_range_m").get<double>(), cfg->bandwidth_hz);
            if (bin < 1 || bin > cfg->comm_chips)
                violations.push_back("link.target_range_m maps to delay bin outside [1, J]");
        }
    }
}

Effective materialize(const json& doc) {
    Effective eff;
    eff.cfg = waveform_from_json(doc.at("waveform"), nullptr);
    eff.code = eff.cfg.code_kind == CodeKind::Barker ? make_barker_code(eff.cfg.chips_per_pulse)
                                                     : make_lfm_code(eff.cfg.chips_per_pulse);
    eff.link = link_from_json(doc.at("link"));
    const json& ch = doc.at("channel");
    eff.si_gain_sq = db_to_linear(ch.at("si_gain_db").get<double>());
    eff.sic_factor = db_to_linear(ch.at("sic_factor_db").get<double>());
    eff.noise_psd = noise_psd_from_json(ch);
    eff.doppler_bin = ch.at("doppler_bin").get<int>();
    eff.target_present = ch.at("target_present").get<bool>();
    if (ch.contains("target_sinr_k_db"))
        eff.target_sinr_k_db = ch.at("target_sinr_k_db").get<double>();
    eff.p_fa = doc.at("detection").at("pfa").get<double>();
    return eff;
}

ChannelState channel_state_for(const Effective& eff, std::size_t n_tau) {
    ChannelState ch;
    ch.delay_bin = n_tau;
    ch.doppler_bin = eff.doppler_bin;
    ch.doppler_hz = doppler_bin_frequency(eff.doppler_bin, eff.cfg.pris_per_cpi, eff.cfg.pri_s);
    ch.si_gain = cplx{std::sqrt(eff.si_gain_sq), 0.0};
    ch.sic_factor = eff.sic_factor;
    ch.noise_psd = eff.noise_psd;
    ch.target_present = eff.target_present;

    if (eff.target_sinr_k_db) {
        // Back-solve |alpha| so the analytic post-DFT SINR hits the target.
        const double target = db_to_linear(*eff.target_sinr_k_db);
        const double resid_w =
            residual_si_power(eff.cfg.radar_power_w, eff.cfg.comm_power_w, n_tau,
                              eff.cfg.chips_per_pulse, eff.cfg.comm_chips, eff.cfg.chip_duration_s,
                              eff.si_gain_sq, eff.sic_factor) /
            eff.cfg.chip_duration_s;
        const double noise_w = eff.noise_psd * eff.cfg.bandwidth_hz;
        const double combined = eff.cfg.comm_power_w * static_cast<double>(eff.cfg.comm_chips) +
                                eff.cfg.radar_power_w * static_cast<double>(eff.cfg.chips_per_pulse);
        const double alpha_sq = target * (resid_w + noise_w) /
                                (static_cast<double>(eff.cfg.pris_per_cpi) * combined);
        ch.alpha = cplx{std::sqrt(alpha_sq), 0.0};
    } else {
        ch.alpha = cplx{std::sqrt(radar_two_way_gain(eff.link)), 0.0};
    }
    return ch;
}

std::string metric_column(const std::string& metric, const std::string& label) {
    return label.empty() ? metric : metric + "_" + label;
}

}  // namespace

Scenario validate_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("not valid JSON: ") + e.what());
    }

    json merged = json::parse(kDefaultsJson);
    merged.merge_patch(doc);

    std::vector<std::string> violations;
    json base = merged;
    base.erase("variants");
    check_document(base, violations);

    std::vector<ScenarioVariant> variants;
    if (merged.contains("variants")) {
        if (!merged.at("variants").is_array()) {
            violations.push_back("variants must be an array");
        } else {
            for (const auto& v : merged.at("variants")) {
                const std::string label = v.value("label", "");
                if (label.empty()) {
                    violations.push_back("every variant needs a non-empty label");
                    continue;
                }
                json overrides = v;
                overrides.erase("label");
                json applied = base;
                applied.merge_patch(overrides);
                std::vector<std::string> sub;
                check_document(applied, sub);
                for (const auto& s : sub) violations.push_back("variant " + label + ": " + s);
                variants.push_back(ScenarioVariant{label, overrides.dump()});
            }
        }
    }
    if (!violations.empty()) throw ConfigInvalid(violations);

    Scenario sc;
    sc.name = merged.at("name").get<std::string>();
    sc.document = merged.dump(2);
    sc.waveform = waveform_from_json(base.at("waveform"), nullptr);
    sc.link = link_from_json(base.at("link"));
    sc.si_gain_db = base.at("channel").at("si_gain_db").get<double>();
    sc.sic_factor_db = base.at("channel").at("sic_factor_db").get<double>();
    sc.noise_psd_w_per_hz = noise_psd_from_json(base.at("channel"));
    sc.doppler_bin = base.at("channel").at("doppler_bin").get<int>();
    sc.target_present = base.at("channel").at("target_present").get<bool>();
    if (base.at("channel").contains("target_sinr_k_db"))
        sc.target_sinr_k_db = base.at("channel").at("target_sinr_k_db").get<double>();
    sc.p_fa = base.at("detection").at("pfa").get<double>();

    if (base.contains("sweep")) {
        const json& s = base.at("sweep");
        const std::string var = s.at("variable").get<std::string>();
        sc.sweep.variable = var == "epsilon_db"     ? SweepVariable::EpsilonDb
                            : var == "comm_power_w" ? SweepVariable::CommPower
                            : var == "range_m"      ? SweepVariable::Range
                                                    : SweepVariable::Lag;
        sc.sweep.start = s.at("start").get<double>();
        sc.sweep.stop = s.at("stop").get<double>();
        sc.sweep.step = s.at("step").get<double>();
    }
    sc.variants = std::move(variants);
    for (const auto& m : base.at("metrics")) sc.metrics.push_back(m.get<std::string>());
    const std::string mode = base.at("mode").get<std::string>();
    sc.mode = mode == "analytic" ? RunMode::Analytic
              : mode == "mc"     ? RunMode::MonteCarlo
                                 : RunMode::Both;
    sc.trials = base.at("trials").get<std::size_t>();
    sc.seed = base.at("seed").get<std::uint64_t>();
    if (base.contains("constraints")) {
        PowerConstraint pcst;
        pcst.avg_power_w = base.at("constraints").at("avg_power_w").get<double>();
        pcst.max_power_w = base.at("constraints").at("max_power_w").get<double>();
        sc.constraints = pcst;
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return validate_scenario(ss.str());
}

// ---------------------------------------------------------------------------
// Monte-Carlo chains
// ---------------------------------------------------------------------------

namespace {

BasebandFrame draw_frame(const WaveformConfig& cfg, const FastTimeCode& code, std::uint64_t seed) {
    const auto omega = draw_embedded_symbols(cfg.psk_order, cfg.pris_per_cpi, seed);
    // One extra row: the first row becomes the warm-up symbols s_{-1}.
    const CMat all = draw_comm_symbols(cfg.comm_constellation, cfg.pris_per_cpi + 1,
                                       cfg.comm_chips, seed, cfg.psk_order);
    std::vector<cplx> warmup(all.row(0), all.row(0) + cfg.comm_chips);
    CMat s(cfg.pris_per_cpi, cfg.comm_chips);
    std::copy(all.row(1), all.row(1) + cfg.pris_per_cpi * cfg.comm_chips, s.data.begin());
    return assemble_frame(cfg, code, omega, s, &warmup);
}

template <typename PerTrial>
void run_trials(std::size_t trials, std::uint64_t seed, PerTrial&& body) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(trials, 1));
    if (workers <= 1) {
        for (std::size_t t = 0; t < trials; ++t) body(t, trial_seed(seed, t));
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < trials; t += workers) body(t, trial_seed(seed, t));
        });
    }
    for (auto& th : pool) th.join();
}

DetectionMcResult summarize(const std::vector<std::uint8_t>& hits, std::uint64_t /*seed*/) {
    DetectionMcResult res;
    res.trials = hits.size();
    for (std::uint8_t h : hits) res.detections += h;
    res.rate = res.trials ? static_cast<double>(res.detections) / static_cast<double>(res.trials) : 0.0;
    res.ci95 = res.trials
                   ? 1.96 * std::sqrt(std::max(res.rate * (1.0 - res.rate), 0.0) /
                                      static_cast<double>(res.trials))
                   : 0.0;
    return res;
}

}  // namespace

DetectionMcResult run_mc_detection(const WaveformConfig& cfg, const ChannelState& ch, double p_fa,
                                   std::size_t trials, std::uint64_t seed) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw InvalidProbability("P_FA must be in (0, 1)");
    const FastTimeCode code = cfg.code_kind == CodeKind::Barker
                                  ? make_barker_code(cfg.chips_per_pulse)
                                  : make_lfm_code(cfg.chips_per_pulse);
    const double sigma_sq =
        residual_si_power(cfg.radar_power_w, cfg.comm_power_w, ch.delay_bin, cfg.chips_per_pulse,
                          cfg.comm_chips, cfg.chip_duration_s, std::norm(ch.si_gain),
                          ch.sic_factor) +
        ch.noise_psd;
    const double threshold = std::sqrt(sigma_sq) * std::sqrt(-std::log(p_fa));
    const std::size_t k_total = cfg.pris_per_cpi;
    const std::size_t len = cfg.chips_per_pri();

    std::vector<std::uint8_t> hits(trials, 0);
    run_trials(trials, seed, [&](std::size_t t, std::uint64_t s) {
        const BasebandFrame frame = draw_frame(cfg, code, s);
        const CMat y = apply_channel(frame, ch, cfg.pri_s, s);
        const CMat yhat = cancel_si(y, frame, ch.si_gain, ch.sic_factor, s);

        // Matched filter at the true range bin, DFT at the true Doppler bin.
        std::vector<cplx> ref(len);
        cplx dft{0.0, 0.0};
        for (std::size_t k = 0; k < k_total; ++k) {
            frame.echo_reference(k, ch.delay_bin, ref.data());
            double norm_sq = 0.0;
            cplx acc{0.0, 0.0};
            const cplx* row = yhat.row(k);
            for (std::size_t l = 0; l < len; ++l) {
                norm_sq += std::norm(ref[l]);
                acc += std::conj(ref[l]) * row[l];
            }
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(ch.doppler_bin) *
                                 static_cast<double>(k) / static_cast<double>(k_total);
            dft += acc / std::sqrt(norm_sq) * std::polar(1.0, phase);
        }
        dft /= std::sqrt(static_cast<double>(k_total));
        hits[t] = std::abs(dft) > threshold ? 1 : 0;
    });
    return summarize(hits, seed);
}

DetectionMcResult run_mc_ser(const WaveformConfig& cfg, const cplx& h, double noise_psd,
                             std::size_t trials, std::uint64_t seed) {
    const FastTimeCode code = cfg.code_kind == CodeKind::Barker
                                  ? make_barker_code(cfg.chips_per_pulse)
                                  : make_lfm_code(cfg.chips_per_pulse);
    const std::size_t n = cfg.chips_per_pulse;
    const double amp = std::sqrt(cfg.radar_power_w * cfg.chip_duration_s);
    CommLink link{h, noise_psd, cfg.psk_order};

    std::vector<std::uint8_t> errors(trials, 0);
    run_trials(trials, seed, [&](std::size_t t, std::uint64_t s) {
        auto eng = make_engine(s, stream::kNoise);
        std::uniform_int_distribution<std::size_t> pick(0, cfg.psk_order - 1);
        auto sym_eng = make_engine(s, stream::kEmbeddedSymbols);
        const std::size_t sent = pick(sym_eng);
        const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(sent) /
                                           static_cast<double>(cfg.psk_order));
        std::vector<cplx> rx(n);
        for (std::size_t l = 0; l < n; ++l)
            rx[l] = h * amp * w * code.chips[l] + draw_cn(eng, noise_psd);
        const EmbeddedDecision dec = demod_embedded(rx.data(), code, link);
        errors[t] = dec.symbol_index != sent ? 1 : 0;
    });
    return summarize(errors, seed);
}

// ---------------------------------------------------------------------------
// Scenario evaluation
// ---------------------------------------------------------------------------

namespace {

void evaluate_point(const Scenario& sc, const Effective& eff, const std::string& label,
                    double sweep_value, std::uint64_t point_seed, std::vector<ResultRow>& rows) {
    const WaveformConfig& cfg = eff.cfg;
    const std::size_t n_tau = range_to_bin(eff.link.target_range_m, cfg.bandwidth_hz);
    const bool bin_ok = n_tau >= 1 && n_tau <= cfg.comm_chips;
    const bool analytic = sc.mode != RunMode::MonteCarlo;
    const bool mc = sc.mode != RunMode::Analytic;

    for (const auto& metric : sc.metrics) {
        ResultRow row;
        row.scenario = sc.name;
        row.sweep_value = sweep_value;
        row.metric = metric_column(metric, label);
        row.seed = point_seed;

        if (metric == "pd" || metric == "sinr_1" || metric == "sinr_k" || metric == "sinr_k_db" ||
            metric == "residual_si_w") {
            if (!bin_ok) continue;  // beyond the unambiguous range
            const ChannelState ch = channel_state_for(eff, n_tau);
            const SinrBreakdown br = sinr1(cfg.radar_power_w, cfg.comm_power_w, n_tau, ch, cfg);
            if (analytic) {
                if (metric == "pd") row.analytic = prob_detection(br.sinr_k, eff.p_fa);
                if (metric == "sinr_1") row.analytic = br.sinr_1;
                if (metric == "sinr_k") row.analytic = br.sinr_k;
                if (metric == "sinr_k_db") row.analytic = linear_to_db(br.sinr_k);
                if (metric == "residual_si_w") row.analytic = br.residual_si_power_w;
            }
            if (mc && metric == "pd") {
                const DetectionMcResult r =
                    run_mc_detection(cfg, ch, eff.p_fa, sc.trials, point_seed);
                row.monte_carlo = r.rate;
                row.mc_ci95 = r.ci95;
                row.trials = r.trials;
            }
        } else if (metric == "rate_embedded") {
            if (analytic) row.analytic = rate_embedded(cfg.psk_order, cfg.duty_cycle, cfg.chips_per_pulse);
        } else if (metric == "rate_dedicated") {
            if (analytic)
                row.analytic = spectrum_efficiency_dedicated(
                    comm_gain(eff.link), cfg.comm_power_w, eff.noise_psd, cfg.bandwidth_hz,
                    cfg.duty_cycle);
        } else if (metric == "rate_total") {
            if (analytic)
                row.analytic = rate_embedded(cfg.psk_order, cfg.duty_cycle, cfg.chips_per_pulse) +
                               spectrum_efficiency_dedicated(comm_gain(eff.link), cfg.comm_power_w,
                                                             eff.noise_psd, cfg.bandwidth_hz,
                                                             cfg.duty_cycle);
        } else if (metric == "ser_embedded") {
            if (analytic)
                row.analytic = ser_embedded_analytic(comm_gain(eff.link), cfg.radar_power_w,
                                                     cfg.chips_per_pulse, eff.noise_psd,
                                                     cfg.bandwidth_hz, cfg.psk_order);
            if (mc) {
                const cplx h{std::sqrt(comm_gain(eff.link)), 0.0};
                const DetectionMcResult r =
                    run_mc_ser(cfg, h, eff.noise_psd, sc.trials, point_seed);
                row.monte_carlo = r.rate;
                row.mc_ci95 = r.ci95;
                row.trials = r.trials;
            }
        } else {
            continue;  // acf metrics handled by the lag-sweep path
        }
        if (row.analytic || row.monte_carlo) rows.push_back(std::move(row));
    }
}

void evaluate_lag_sweep(const Scenario& sc, const Effective& eff, const std::string& label,
                        std::uint64_t variant_seed, std::vector<ResultRow>& rows) {
    const FastTimeCode& code = eff.code;
    const BasebandFrame frame = draw_frame(eff.cfg, code, variant_seed);
    const std::vector<double> lags = sc.sweep.grid();
    const AcfCurve curve = acf_curve(frame, lags);
    for (const auto& metric : sc.metrics) {
        if (metric != "acf" && metric != "acf_db") continue;
        for (std::size_t i = 0; i < lags.size(); ++i) {
            ResultRow row;
            row.scenario = sc.name;
            row.sweep_value = lags[i];
            row.metric = metric_column(metric, label);
            row.seed = variant_seed;
            row.analytic = metric == "acf" ? curve.values[i]
                                           : linear_to_db(std::max(curve.values[i], 1e-300));
            rows.push_back(std::move(row));
        }
    }
}

}  // namespace

std::vector<ResultRow> run_scenario(const Scenario& sc) {
    json base = json::parse(sc.document);
    base.erase("variants");

    struct VariantDoc {
        std::string label;
        json doc;
    };
    std::vector<VariantDoc> docs;
    if (sc.variants.empty()) {
        docs.push_back({"", base});
    } else {
        for (const auto& v : sc.variants) {
            json d = base;
            d.merge_patch(json::parse(v.overrides_json));
            docs.push_back({v.label, d});
        }
    }

    std::vector<ResultRow> rows;
    for (std::size_t vi = 0; vi < docs.size(); ++vi) {
        Effective eff = materialize(docs[vi].doc);
        const std::uint64_t variant_seed = derive_seed(sc.seed, 0x5000 + vi);
        if (sc.sweep.variable == SweepVariable::Lag) {
            evaluate_lag_sweep(sc, eff, docs[vi].label, variant_seed, rows);
            continue;
        }
        const std::vector<double> grid = sc.sweep.grid();
        for (std::size_t pi = 0; pi < grid.size(); ++pi) {
            const double v = grid[pi];
            switch (sc.sweep.variable) {
                case SweepVariable::EpsilonDb: eff.sic_factor = db_to_linear(v); break;
                case SweepVariable::CommPower: eff.cfg.comm_power_w = v; break;
                case SweepVariable::Range: eff.link.target_range_m = v; break;
                default: break;
            }
            evaluate_point(sc, eff, docs[vi].label, v, derive_seed(variant_seed, pi), rows);
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Emitters
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

}  // namespace

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    if (rows.empty()) throw IoError("no rows to write");
    os << "scenario,sweep_value,metric,analytic,mc,mc_ci95,trials,seed\n";
    for (const auto& r : rows) {
        os << r.scenario << ',' << format_number(r.sweep_value) << ',' << r.metric << ','
           << format_optional(r.analytic) << ',' << format_optional(r.monte_carlo) << ','
           << format_optional(r.mc_ci95) << ',' << r.trials << ',' << r.seed << '\n';
    }
}

void emit_csv_file(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw IoError("no rows to write");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    emit_csv(rows, out);
}

std::vector<ResultRow> parse_csv(std::istream& is) {
    std::vector<ResultRow> rows;
    std::string line;
    if (!std::getline(is, line)) throw IoError("empty CSV");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        while (fields.size() < 8) fields.emplace_back();
        ResultRow r;
        r.scenario = fields[0];
        r.sweep_value = std::stod(fields[1]);
        r.metric = fields[2];
        if (!fields[3].empty()) r.analytic = std::stod(fields[3]);
        if (!fields[4].empty()) r.monte_carlo = std::stod(fields[4]);
        if (!fields[5].empty()) r.mc_ci95 = std::stod(fields[5]);
        r.trials = fields[6].empty() ? 0 : std::stoull(fields[6]);
        r.seed = fields[7].empty() ? 0 : std::stoull(fields[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string emit_sparkline(const std::vector<ResultRow>& rows, const std::string& metric) {
    static const char* kBlocks[] = {"▁", "▂", "▃", "▄",
                                    "▅", "▆", "▇", "█"};
    std::vector<double> vals;
    for (const auto& r : rows) {
        if (r.metric != metric) continue;
        if (r.analytic) {
            vals.push_back(*r.analytic);
        } else if (r.monte_carlo) {
            vals.push_back(*r.monte_carlo);
        }
    }
    if (vals.empty()) return {};
    const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
    const double lo = *lo_it, hi = *hi_it;
    std::string out;
    for (double v : vals) {
        const double u = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        out += kBlocks[std::min<std::size_t>(7, static_cast<std::size_t>(u * 7.999))];
    }
    return out;
}

void emit_svg(const std::vector<ResultRow>& rows, const std::string& path) {
    if (rows.empty()) throw IoError("no rows to plot");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");

    std::vector<std::string> metrics;
    for (const auto& r : rows)
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
            metrics.push_back(r.metric);

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto value_of = [](const ResultRow& r) {
        return r.analytic ? r.analytic : r.monte_carlo;
    };
    for (const auto& r : rows) {
        const auto v = value_of(r);
        if (!v) continue;
        xmin = std::min(xmin, r.sweep_value);
        xmax = std::max(xmax, r.sweep_value);
        ymin = std::min(ymin, *v);
        ymax = std::max(ymax, *v);
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;

    const double w = 720.0, h = 420.0, pad = 40.0;
    auto sx = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
    auto sy = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\""
        << h - pad << "\" stroke=\"#444\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
        << "\" stroke=\"#444\"/>\n";
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[mi % 8] << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& r : rows) {
            if (r.metric != metrics[mi]) continue;
            const auto v = value_of(r);
            if (!v) continue;
            out << format_number(sx(r.sweep_value)) << ',' << format_number(sy(*v)) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << w - pad - 150 << "\" y=\"" << pad + 16.0 * static_cast<double>(mi + 1)
            << "\" fill=\"" << kPalette[mi % 8] << "\" font-size=\"12\">" << metrics[mi]
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fdisac
