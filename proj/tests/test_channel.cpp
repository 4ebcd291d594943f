#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fdisac/channel.hpp"
#include "fdisac/waveform.hpp"

using namespace fdisac;

namespace {

LinkBudget table1_link() {
    LinkBudget lb;
    lb.carrier_freq_hz = 3.5e9;
    lb.tx_gain = db_to_linear(17.0);
    lb.rx_gain = db_to_linear(17.0);
    lb.comm_rx_gain = 1.0;
    lb.rcs_m2 = 1.0;
    lb.target_range_m = 1350.0;
    lb.comm_range_m = 400.0;
    lb.pathloss_exponent = 2.7;
    return lb;
}

BasebandFrame test_frame(double pr, double pc, std::uint64_t seed) {
    const auto cfg = make_waveform_config(1.6e7, 4e-6, 1e-6, 8, pr, pc, 8);
    const auto code = make_lfm_code(cfg.chips_per_pulse);
    const auto omega = draw_embedded_symbols(cfg.psk_order, cfg.pris_per_cpi, seed);
    const auto all =
        draw_comm_symbols(CommConstellation::Gaussian, cfg.pris_per_cpi + 1, cfg.comm_chips, seed);
    std::vector<cplx> warmup(all.row(0), all.row(0) + cfg.comm_chips);
    CMat s(cfg.pris_per_cpi, cfg.comm_chips);
    std::copy(all.row(1), all.row(1) + s.data.size(), s.data.begin());
    return assemble_frame(cfg, code, omega, s, &warmup);
}

}  // namespace

TEST_CASE("radar two-way gain") {
    auto lb = table1_link();
    // direct evaluation of Gt*Gr*lambda^2*sigma/((4pi)^3 R^4) at the shipped defaults
    CHECK(radar_two_way_gain(lb) / 2.7960224304e-15 == doctest::Approx(1.0).epsilon(1e-9));

    const double base = radar_two_way_gain(lb);
    lb.target_range_m *= 2.0;
    CHECK(radar_two_way_gain(lb) / (base / 16.0) == doctest::Approx(1.0).epsilon(1e-12));

    lb.rcs_m2 = 0.0;
    CHECK(radar_two_way_gain(lb) == 0.0);
}

TEST_CASE("comm gain") {
    auto lb = table1_link();
    CHECK(comm_gain(lb) / 2.1954503122e-10 == doctest::Approx(1.0).epsilon(1e-9));

    // free-space reduction: gamma = 2, unit gains -> Friis
    LinkBudget fs;
    fs.carrier_freq_hz = 3.5e9;
    fs.comm_range_m = 250.0;
    fs.pathloss_exponent = 2.0;
    const double lam = fs.wavelength_m();
    const double friis = lam * lam / (std::pow(4.0 * std::numbers::pi * 250.0, 2.0));
    CHECK(comm_gain(fs) / friis == doctest::Approx(1.0).epsilon(1e-12));

    // monotone decay with distance
    auto a = table1_link();
    a.comm_range_m = 100.0;
    auto b = table1_link();
    b.comm_range_m = 10000.0;
    CHECK(comm_gain(a) > comm_gain(b));
}

TEST_CASE("doppler from velocity") {
    const double lam = kSpeedOfLight / 3.5e9;
    const double fd = doppler_from_velocity(120.0 / 3.6, lam);
    CHECK(fd == doctest::Approx(778.3).epsilon(1e-3));
    CHECK(doppler_from_velocity(0.0, lam) == 0.0);
    CHECK(doppler_from_velocity(-120.0 / 3.6, lam) == doctest::Approx(-fd).epsilon(1e-12));
}

TEST_CASE("doppler bin helpers") {
    CHECK(doppler_bin_frequency(10, 100, 1e-5) == doctest::Approx(1e4).epsilon(1e-12));
    ChannelState ch;
    ch.doppler_hz = 778.0;
    CHECK(doppler_approximation_ok(ch, 1e-5));
    ch.doppler_hz = 6000.0;
    CHECK(!doppler_approximation_ok(ch, 1e-5));
}

TEST_CASE("apply_channel: exact special cases") {
    const auto frame = test_frame(1.0, 0.5, 17);
    const double pri = 4e-6;

    ChannelState ch;
    ch.alpha = {0.3, -0.4};
    ch.delay_bin = 20;
    ch.noise_psd = 0.0;
    ch.si_gain = {0.0, 0.0};
    ch.doppler_hz = 0.0;

    // beta = 0, N0 = 0, fd = 0: exactly a scaled shifted frame
    const auto y = apply_channel(frame, ch, pri, 1);
    std::vector<cplx> ref(frame.chips_per_pri());
    for (std::size_t k = 0; k < frame.pris; ++k) {
        frame.echo_reference(k, 20, ref.data());
        for (std::size_t l = 0; l < ref.size(); ++l)
            CHECK(std::abs(y.at(k, l) - ch.alpha * ref[l]) < 1e-15);
    }

    // alpha = 0: pure self-interference
    ChannelState si;
    si.target_present = false;
    si.delay_bin = 20;
    si.si_gain = {0.1, 0.2};
    si.noise_psd = 0.0;
    const auto y2 = apply_channel(frame, si, pri, 2);
    for (std::size_t k = 0; k < frame.pris; ++k)
        for (std::size_t l = 0; l < frame.chips_per_pri(); ++l)
            CHECK(std::abs(y2.at(k, l) - si.si_gain * frame.pri_samples.at(k, l)) < 1e-15);

    ChannelState bad = ch;
    bad.delay_bin = frame.comm_chips + 1;
    CHECK_THROWS_AS(apply_channel(frame, bad, pri, 3), DelayOutOfRange);
}

TEST_CASE("apply_channel: slow-time phase progression") {
    const auto frame = test_frame(1.0, 0.5, 18);
    const double pri = 4e-6;
    ChannelState ch;
    ch.alpha = {1.0, 0.0};
    ch.delay_bin = 20;
    ch.doppler_bin = 2;
    ch.doppler_hz = doppler_bin_frequency(2, frame.pris, pri);
    ch.noise_psd = 0.0;

    const auto y = apply_channel(frame, ch, pri, 4);
    std::vector<cplx> ref(frame.chips_per_pri());
    for (std::size_t k = 0; k < frame.pris; ++k) {
        frame.echo_reference(k, 20, ref.data());
        const cplx expected_rot =
            std::polar(1.0, 2.0 * std::numbers::pi * 2.0 * static_cast<double>(k) /
                                static_cast<double>(frame.pris));
        // compare the echo rotation on the strongest sample
        std::size_t l_peak = 0;
        double best = 0.0;
        for (std::size_t l = 0; l < ref.size(); ++l)
            if (std::abs(ref[l]) > best) {
                best = std::abs(ref[l]);
                l_peak = l;
            }
        const cplx got = y.at(k, l_peak) / ref[l_peak];
        CHECK(std::abs(got - expected_rot) < 1e-12);
    }
}

TEST_CASE("apply_channel: noise calibration within 1 percent") {
    // alpha = beta = 0 leaves pure CN(0, N0) samples
    const auto cfg = make_waveform_config(1e8, 1e-5, 1e-6, 2000, 1.0, 1.0, 4);
    const auto code = make_lfm_code(cfg.chips_per_pulse);
    const auto omega = draw_embedded_symbols(4, cfg.pris_per_cpi, 5);
    const auto s = draw_comm_symbols(CommConstellation::PskM, cfg.pris_per_cpi, cfg.comm_chips, 5, 4);
    const auto frame = assemble_frame(cfg, code, omega, s);

    ChannelState ch;
    ch.target_present = false;
    ch.delay_bin = 10;
    ch.noise_psd = 3.7e-4;
    const auto y = apply_channel(frame, ch, cfg.pri_s, 99);  // 2e6 samples
    double acc = 0.0;
    for (const auto& v : y.data) acc += std::norm(v);
    acc /= static_cast<double>(y.data.size());
    CHECK(acc / ch.noise_psd == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("apply_channel: energy bookkeeping with zero noise") {
    // E||y_k||^2 = |alpha|^2 ||x^r||^2 + |beta|^2 ||x^d||^2 + cross;
    // the cross term averages out over independent draws.
    ChannelState ch;
    ch.alpha = {0.8, 0.0};
    ch.si_gain = {0.5, 0.5};
    ch.delay_bin = 11;
    ch.noise_psd = 0.0;

    double cross_sum = 0.0;
    double direct_sum = 0.0;
    const int draws = 200;
    for (int d = 0; d < draws; ++d) {
        const auto frame = test_frame(1.0, 1.0, 1000 + static_cast<std::uint64_t>(d));
        const auto y = apply_channel(frame, ch, 4e-6, 55);
        std::vector<cplx> ref(frame.chips_per_pri());
        for (std::size_t k = 0; k < frame.pris; ++k) {
            frame.echo_reference(k, 11, ref.data());
            double y_sq = 0.0, echo_sq = 0.0, si_sq = 0.0;
            for (std::size_t l = 0; l < ref.size(); ++l) {
                y_sq += std::norm(y.at(k, l));
                echo_sq += std::norm(ch.alpha * ref[l]);
                si_sq += std::norm(ch.si_gain * frame.pri_samples.at(k, l));
            }
            cross_sum += y_sq - echo_sq - si_sq;
            direct_sum += echo_sq + si_sq;
        }
    }
    // relative cross-term bias shrinks as 1/sqrt(draws * K)
    CHECK(std::abs(cross_sum / direct_sum) < 3.0 / std::sqrt(200.0 * 8.0));
}
