#include "fdisac/harness.hpp"

namespace fdisac {

namespace {

// Shipped experiment definitions. The same documents live under scenarios/;
// tools/make_scenarios regenerates those files from these strings.

const char* kFigSicFactor = R"({
  "name": "fig_sic_factor",
  "description": "Detection probability versus SIC factor for three target ranges, full-power FD operation.",
  "waveform": { "radar_power_w": 1.0, "comm_power_w": 1.0 },
  "channel": { "sic_factor_db": -80.0 },
  "sweep": { "variable": "epsilon_db", "start": -110.0, "stop": -40.0, "step": 0.25 },
  "variants": [
    { "label": "r100",  "link": { "target_range_m": 100.0 } },
    { "label": "r500",  "link": { "target_range_m": 500.0 } },
    { "label": "r1350", "link": { "target_range_m": 1349.0 } }
  ],
  "metrics": ["pd"],
  "mode": "analytic",
  "seed": 7001
})";

const char* kFigPdVsRate = R"({
  "name": "fig_pd_vs_rate",
  "description": "Detection probability and total spectrum efficiency as the dedicated power grows, for several SIC capabilities.",
  "waveform": { "radar_power_w": 1.0, "comm_power_w": 0.0 },
  "link": { "target_range_m": 1349.0 },
  "sweep": { "variable": "comm_power_w", "start": 0.0, "stop": 1.0, "step": 0.005 },
  "variants": [
    { "label": "eps80",  "channel": { "sic_factor_db": -80.0 } },
    { "label": "eps90",  "channel": { "sic_factor_db": -90.0 } },
    { "label": "eps95",  "channel": { "sic_factor_db": -95.0 } },
    { "label": "eps110", "channel": { "sic_factor_db": -110.0 } }
  ],
  "metrics": ["pd", "rate_total"],
  "mode": "analytic",
  "seed": 7002
})";

const char* kFigSinrVsPc = R"({
  "name": "fig_sinr_vs_pc",
  "description": "Post-integration radar SINR versus dedicated communication power.",
  "waveform": { "radar_power_w": 1.0, "comm_power_w": 0.0 },
  "link": { "target_range_m": 1349.0 },
  "sweep": { "variable": "comm_power_w", "start": 0.0, "stop": 1.0, "step": 0.005 },
  "variants": [
    { "label": "eps80",  "channel": { "sic_factor_db": -80.0 } },
    { "label": "eps90",  "channel": { "sic_factor_db": -90.0 } },
    { "label": "eps95",  "channel": { "sic_factor_db": -95.0 } },
    { "label": "eps110", "channel": { "sic_factor_db": -110.0 } }
  ],
  "metrics": ["sinr_k_db"],
  "mode": "analytic",
  "seed": 7003
})";

const char* kFigPdVsRange = R"({
  "name": "fig_pd_vs_range",
  "description": "Detection probability versus target range for pulsed, constant-envelope and mixed power splits under an average-power budget.",
  "waveform": { "radar_power_w": 0.91, "comm_power_w": 0.01 },
  "channel": { "sic_factor_db": -80.0 },
  "constraints": { "avg_power_w": 0.1, "max_power_w": 1.0 },
  "sweep": { "variable": "range_m", "start": 100.0, "stop": 1350.0, "step": 2.5 },
  "variants": [
    { "label": "hd_pulsed", "waveform": { "radar_power_w": 1.0,  "comm_power_w": 0.0 } },
    { "label": "cw_comm",   "waveform": { "radar_power_w": 0.1,  "comm_power_w": 0.1 } },
    { "label": "fd_isac",   "waveform": { "radar_power_w": 0.91, "comm_power_w": 0.01 } }
  ],
  "metrics": ["pd"],
  "mode": "analytic",
  "seed": 7004
})";

const char* kFigAcf = R"({
  "name": "fig_acf",
  "description": "Single-draw normalized autocorrelation of the assembled frame for the three power splits of the range-endurance comparison.",
  "waveform": { "radar_power_w": 0.91, "comm_power_w": 0.01 },
  "constraints": { "avg_power_w": 0.1, "max_power_w": 1.0 },
  "sweep": { "variable": "lag_s", "start": -9.0e-6, "stop": 9.0e-6, "step": 1.0e-8 },
  "variants": [
    { "label": "hd_pulsed", "waveform": { "radar_power_w": 1.0,  "comm_power_w": 0.0 } },
    { "label": "cw_comm",   "waveform": { "radar_power_w": 0.1,  "comm_power_w": 0.1 } },
    { "label": "fd_isac",   "waveform": { "radar_power_w": 0.91, "comm_power_w": 0.01 } }
  ],
  "metrics": ["acf_db"],
  "mode": "analytic",
  "seed": 7005
})";

const char* kMcValidation = R"({
  "name": "mc_detection_validation",
  "description": "End-to-end Monte-Carlo detection versus the closed form at a testable false-alarm rate, on a reduced frame.",
  "waveform": {
    "bandwidth_hz": 1.6e7,
    "pri_s": 4.0e-6,
    "pulse_duration_s": 1.0e-6,
    "pris_per_cpi": 16,
    "radar_power_w": 1.0,
    "comm_power_w": 0.5,
    "psk_order": 8,
    "comm_constellation": "psk"
  },
  "link": { "target_range_m": 281.0 },
  "channel": { "sic_factor_db": -20.0, "doppler_bin": 3 },
  "detection": { "pfa": 1.0e-3 },
  "variants": [
    { "label": "sinr5",  "channel": { "target_sinr_k_db": 5.0 } },
    { "label": "sinr10", "channel": { "target_sinr_k_db": 10.0 } },
    { "label": "sinr15", "channel": { "target_sinr_k_db": 15.0 } }
  ],
  "metrics": ["pd"],
  "mode": "both",
  "trials": 20000,
  "seed": 7006
})";

}  // namespace

const std::map<std::string, std::string>& builtin_scenarios() {
    static const std::map<std::string, std::string> kMap = {
        {"fig_sic_factor", kFigSicFactor}, {"fig_pd_vs_rate", kFigPdVsRate},
        {"fig_sinr_vs_pc", kFigSinrVsPc},  {"fig_pd_vs_range", kFigPdVsRange},
        {"fig_acf", kFigAcf},              {"mc_detection_validation", kMcValidation},
    };
    return kMap;
}

}  // namespace fdisac
