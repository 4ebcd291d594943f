#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fdisac/analysis.hpp"
#include "fdisac/harness.hpp"

using namespace fdisac;

namespace {

std::string run_to_csv(const Scenario& sc) {
    std::ostringstream os;
    emit_csv(run_scenario(sc), os);
    return os.str();
}

const ResultRow* find_row(const std::vector<ResultRow>& rows, const std::string& metric,
                          double sweep_value) {
    for (const auto& r : rows)
        if (r.metric == metric && std::abs(r.sweep_value - sweep_value) < 1e-12) return &r;
    return nullptr;
}

}  // namespace

TEST_CASE("defaults produce the shipped frame geometry") {
    const auto sc = validate_scenario("{}");
    CHECK(sc.waveform.chips_per_pulse == 100);
    CHECK(sc.waveform.comm_chips == 900);
    CHECK(sc.waveform.pris_per_cpi == 100);
    CHECK(sc.p_fa == 1e-8);
    CHECK(sc.noise_psd_w_per_hz / 1.2589254e-20 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("validation aggregates every violation") {
    const char* bad = R"({
      "waveform": { "pulse_duration_s": 2.0e-5, "psk_order": 1 },
      "detection": { "pfa": 2.0 },
      "metrics": ["pd", "nonsense"]
    })";
    try {
        validate_scenario(bad);
        FAIL("expected ConfigInvalid");
    } catch (const ConfigInvalid& e) {
        const auto& v = e.violations();
        CHECK(v.size() >= 4);
        bool timing = false, order = false, pfa = false, metric = false;
        for (const auto& s : v) {
            if (s.find("pulse_duration_s") != std::string::npos) timing = true;
            if (s.find("psk_order") != std::string::npos) order = true;
            if (s.find("pfa") != std::string::npos) pfa = true;
            if (s.find("nonsense") != std::string::npos) metric = true;
        }
        CHECK(timing);
        CHECK(order);
        CHECK(pfa);
        CHECK(metric);
    }
}

TEST_CASE("power constraint cross-check") {
    const char* doc = R"({
      "waveform": { "radar_power_w": 1.0, "comm_power_w": 0.5 },
      "constraints": { "avg_power_w": 0.1, "max_power_w": 1.0 }
    })";
    // rho*Pr + (1-rho)*Pc = 0.55 != 0.1
    CHECK_THROWS_AS(validate_scenario(doc), ConfigInvalid);

    const char* ok = R"({
      "waveform": { "radar_power_w": 0.91, "comm_power_w": 0.01 },
      "constraints": { "avg_power_w": 0.1, "max_power_w": 1.0 }
    })";
    CHECK_NOTHROW(validate_scenario(ok));
}

TEST_CASE("builtin scenarios validate and ship as files") {
    for (const auto& [name, text] : builtin_scenarios()) {
        CAPTURE(name);
        const auto sc = validate_scenario(text);
        CHECK(sc.name == name);

        const std::string path = "scenarios/" + name + ".json";
        std::ifstream in(path);
        REQUIRE_MESSAGE(in.good(), path << " missing");
        std::stringstream ss;
        ss << in.rdbuf();
        // shipped file and builtin must describe the same experiment
        CHECK(validate_scenario(ss.str()).document == sc.document);
    }
}

TEST_CASE("analytic runs are deterministic and reproducible") {
    const auto sc = validate_scenario(builtin_scenarios().at("fig_sic_factor"));
    const std::string a = run_to_csv(sc);
    const std::string b = run_to_csv(sc);
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) == "scenario,sweep_value,metric,analytic,mc,mc_ci95,trials,seed");
}

TEST_CASE("sic-factor sweep crosses 0.99 where the closed form says") {
    const auto sc = validate_scenario(builtin_scenarios().at("fig_sic_factor"));
    const auto rows = run_scenario(sc);
    const auto threshold_eps = [&](const std::string& metric) {
        double best = -1e9;
        for (const auto& r : rows)
            if (r.metric == metric && r.analytic && *r.analytic >= 0.99)
                best = std::max(best, r.sweep_value);
        return best;
    };
    CHECK(threshold_eps("pd_r100") == doctest::Approx(-45.75).epsilon(0.02));
    CHECK(threshold_eps("pd_r1350") == doctest::Approx(-91.75).epsilon(0.02));
}

TEST_CASE("monte-carlo detection agrees with the closed form") {
    auto sc = validate_scenario(builtin_scenarios().at("mc_detection_validation"));
    sc.trials = 4000;
    const auto rows = run_scenario(sc);
    for (const auto& label : {"sinr5", "sinr10", "sinr15"}) {
        const std::string metric = std::string("pd_") + label;
        bool found = false;
        for (const auto& r : rows) {
            if (r.metric != metric) continue;
            found = true;
            REQUIRE(r.analytic.has_value());
            REQUIRE(r.monte_carlo.has_value());
            REQUIRE(r.trials == 4000);
            const double slack = 1.6 * *r.mc_ci95;  // ~3 sigma
            CHECK(std::abs(*r.monte_carlo - *r.analytic) < std::max(slack, 5e-3));
        }
        CHECK(found);
    }
}

TEST_CASE("worker partitioning does not change Monte-Carlo results") {
    auto sc = validate_scenario(builtin_scenarios().at("mc_detection_validation"));
    sc.trials = 1500;
    setenv("FDISAC_WORKERS", "1", 1);
    const std::string serial = run_to_csv(sc);
    setenv("FDISAC_WORKERS", "7", 1);
    const std::string parallel = run_to_csv(sc);
    unsetenv("FDISAC_WORKERS");
    CHECK(serial == parallel);
}

TEST_CASE("monte-carlo error shrinks with the trial count") {
    auto sc = validate_scenario(builtin_scenarios().at("mc_detection_validation"));
    sc.variants.resize(1);  // sinr5 only
    sc.trials = 1000;
    const auto coarse = run_scenario(sc);
    sc.trials = 100000;
    const auto fine = run_scenario(sc);
    const auto err = [](const std::vector<ResultRow>& rows) {
        REQUIRE(!rows.empty());
        return std::abs(*rows[0].monte_carlo - *rows[0].analytic);
    };
    CHECK(err(fine) < err(coarse));
    CHECK(err(fine) < 1.5 * *fine[0].mc_ci95);
}

TEST_CASE("csv emitter and parser round-trip") {
    CHECK_THROWS_AS(emit_csv_file({}, "/tmp/unused.csv"), IoError);

    std::vector<ResultRow> rows(1);
    rows[0].scenario = "demo";
    rows[0].sweep_value = -80.25;
    rows[0].metric = "pd";
    rows[0].analytic = 0.123456789123;
    rows[0].trials = 0;
    rows[0].seed = 42;
    std::ostringstream os;
    emit_csv(rows, os);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);

    std::istringstream is(text);
    const auto parsed = parse_csv(is);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].scenario == "demo");
    CHECK(parsed[0].metric == "pd");
    CHECK(parsed[0].sweep_value == doctest::Approx(-80.25).epsilon(1e-9));
    CHECK(*parsed[0].analytic == doctest::Approx(*rows[0].analytic).epsilon(1e-8));
    CHECK_FALSE(parsed[0].monte_carlo.has_value());
    CHECK(parsed[0].seed == 42);
}

TEST_CASE("lag sweep evaluates the autocorrelation on the requested grid") {
    auto doc = R"({
      "name": "acf_demo",
      "waveform": { "bandwidth_hz": 1.6e7, "pri_s": 4.0e-6, "pulse_duration_s": 1.0e-6,
                    "pris_per_cpi": 4, "radar_power_w": 1.0, "comm_power_w": 0.0, "psk_order": 8 },
      "sweep": { "variable": "lag_s", "start": 0.0, "stop": 2.0e-6, "step": 6.25e-8 },
      "metrics": ["acf"],
      "seed": 12
    })";
    const auto sc = validate_scenario(doc);
    const auto rows = run_scenario(sc);
    CHECK(rows.size() == 33);
    const auto* zero = find_row(rows, "acf", 0.0);
    REQUIRE(zero);
    CHECK(*zero->analytic == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(!emit_sparkline(rows, "acf").empty());
    emit_svg(rows, "/tmp/acf_demo.svg");
    std::ifstream svg("/tmp/acf_demo.svg");
    CHECK(svg.good());
}

TEST_CASE("range sweep drops points beyond the unambiguous range") {
    auto doc = R"({
      "name": "range_demo",
      "sweep": { "variable": "range_m", "start": 1340.0, "stop": 1360.0, "step": 1.0 },
      "metrics": ["pd"]
    })";
    const auto sc = validate_scenario(doc);
    const auto rows = run_scenario(sc);
    // bins above J = 900 (ranges beyond ~1349.8 m) produce no rows
    for (const auto& r : rows) CHECK(r.sweep_value < 1350.0);
    CHECK(!rows.empty());
}
