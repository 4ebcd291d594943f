#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fdisac/channel.hpp"
#include "fdisac/types.hpp"
#include "fdisac/waveform.hpp"

namespace fdisac {

enum class RunMode { Analytic, MonteCarlo, Both };

enum class SweepVariable { None, EpsilonDb, CommPower, Range, Lag };

struct SweepSpec {
    SweepVariable variable = SweepVariable::None;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    std::vector<double> grid() const;
};

struct PowerConstraint {
    double avg_power_w = 0.0;  // rho*Pr + (1-rho)*Pc must equal this
    double max_power_w = 0.0;  // Pr, Pc <= this
};

/// One evaluated configuration: a variant label plus the fully-merged,
/// validated document it produces.
struct ScenarioVariant {
    std::string label;
    std::string overrides_json;  // RFC 7386 merge patch applied to the base doc
};

/**
 * A declarative experiment: one waveform/link/channel configuration, one
 * swept variable, optional labelled variants (each a JSON merge patch), the
 * metrics to evaluate and the evaluation mode. Parsed and cross-validated
 * from a JSON document; every physical quantity is SI, dB only in fields
 * suffixed _db (and noise as noise_psd_dbm_per_hz).
 */
struct Scenario {
    std::string name;
    std::string document;  // normalized JSON text (defaults applied)

    WaveformConfig waveform;
    LinkBudget link;
    double si_gain_db = -20.0;
    double sic_factor_db = -80.0;
    double noise_psd_w_per_hz = 0.0;
    int doppler_bin = 0;
    bool target_present = true;
    std::optional<double> target_sinr_k_db;  // back-solve |alpha| when set

    double p_fa = 1e-8;
    SweepSpec sweep;
    std::vector<ScenarioVariant> variants;
    std::vector<std::string> metrics;
    RunMode mode = RunMode::Analytic;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::optional<PowerConstraint> constraints;
};

/// One (sweep point, metric) result. Monte-Carlo values always carry the
/// trial count and seed that produced them.
struct ResultRow {
    std::string scenario;
    double sweep_value = 0.0;
    std::string metric;
    std::optional<double> analytic;
    std::optional<double> monte_carlo;
    std::optional<double> mc_ci95;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// Parse and cross-validate a scenario document. Throws ConfigInvalid
/// listing every violated invariant.
Scenario validate_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

/// Built-in scenario documents (name -> JSON text), one per shipped figure
/// plus the Monte-Carlo validation setup. The same documents live under
/// scenarios/ in the repository.
const std::map<std::string, std::string>& builtin_scenarios();

/// Evaluate every (variant, sweep point, metric). Deterministic for a fixed
/// (scenario, seed); Monte-Carlo trials use counter-derived per-trial seeds
/// so the worker count cannot change results (override workers with the
/// FDISAC_WORKERS environment variable).
std::vector<ResultRow> run_scenario(const Scenario& sc);

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os);
void emit_csv_file(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(std::istream& is);

/// Unicode block sparkline of one metric's analytic (or MC) column.
std::string emit_sparkline(const std::vector<ResultRow>& rows, const std::string& metric);
/// Minimal SVG polyline rendering, one path per metric.
void emit_svg(const std::vector<ResultRow>& rows, const std::string& path);

/// End-to-end Monte-Carlo detection at the true range-Doppler cell:
/// frame draw -> channel -> SIC -> matched filter -> slow-time DFT ->
/// threshold, one independent chain per trial.
struct DetectionMcResult {
    std::size_t detections = 0;
    std::size_t trials = 0;
    double rate = 0.0;
    double ci95 = 0.0;
};
DetectionMcResult run_mc_detection(const WaveformConfig& cfg, const ChannelState& ch, double p_fa,
                                   std::size_t trials, std::uint64_t seed);

/// Monte-Carlo embedded-PSK symbol error rate over `trials` symbols.
DetectionMcResult run_mc_ser(const WaveformConfig& cfg, const cplx& h, double noise_psd,
                             std::size_t trials, std::uint64_t seed);

/// Number of Monte-Carlo workers (FDISAC_WORKERS or hardware concurrency).
std::size_t worker_count();

}  // namespace fdisac
