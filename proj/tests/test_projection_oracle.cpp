#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fdisac/nyquist.hpp"
#include "fdisac/waveform.hpp"

using namespace fdisac;

namespace {

BasebandFrame small_frame(double pr, double pc, std::uint64_t seed) {
    const auto cfg = make_waveform_config(1.6e7, 4e-6, 1e-6, 3, pr, pc, 8);
    const auto code = make_lfm_code(cfg.chips_per_pulse);
    const auto omega = draw_embedded_symbols(cfg.psk_order, cfg.pris_per_cpi, seed);
    const auto all = draw_comm_symbols(CommConstellation::Gaussian, cfg.pris_per_cpi + 1,
                                       cfg.comm_chips, seed);
    std::vector<cplx> warmup(all.row(0), all.row(0) + cfg.comm_chips);
    CMat s(cfg.pris_per_cpi, cfg.comm_chips);
    std::copy(all.row(1), all.row(1) + s.data.size(), s.data.begin());
    return assemble_frame(cfg, code, omega, s, &warmup);
}

// max |a - b| normalized by max |b|
double max_rel_error(const CMat& got, const CMat& want) {
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < want.data.size(); ++i) {
        worst = std::max(worst, std::abs(got.data[i] - want.data[i]));
        scale = std::max(scale, std::abs(want.data[i]));
    }
    return worst / scale;
}

CMat closed_form_echo(const BasebandFrame& f, std::size_t n_tau) {
    CMat out(f.pris, f.chips_per_pri());
    for (std::size_t k = 0; k < f.pris; ++k) f.echo_reference(k, n_tau, out.row(k));
    return out;
}

}  // namespace

TEST_CASE("pulse keeps the Nyquist property after truncation") {
    for (std::size_t os : {8, 16}) {
        const auto pulse = make_nyquist_pulse(os);
        CHECK(pulse.oversampling_factor == os);
        CHECK(max_offpeak_chip_autocorr(pulse) < 1e-9);
        // Riemann-sum energy is normalized
        double e = 0.0;
        for (double v : pulse.samples) e += v * v;
        CHECK(e / static_cast<double>(os) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(make_nyquist_pulse(1), ConfigInvalid);
}

TEST_CASE("undelayed projection reproduces the direct chip sequence") {
    const auto pulse = make_nyquist_pulse(16);
    const auto frame = small_frame(1.0, 0.5, 31);
    const auto projected = continuous_projection_oracle(frame, pulse, 0);
    CHECK(max_rel_error(projected, frame.pri_samples) < 1e-6);
}

TEST_CASE("delayed projection matches the closed-form echo layout") {
    const auto pulse = make_nyquist_pulse(16);
    const auto frame = small_frame(1.0, 0.5, 32);
    const std::size_t n = frame.pulse_chips;
    const std::size_t j = frame.comm_chips;
    for (std::size_t n_tau : {std::size_t{1}, n / 2, n, n + 1, j}) {
        CAPTURE(n_tau);
        const auto projected = continuous_projection_oracle(frame, pulse, n_tau);
        CHECK(max_rel_error(projected, closed_form_echo(frame, n_tau)) < 1e-6);
    }
}

TEST_CASE("power special cases keep the zero segments zero") {
    const auto pulse = make_nyquist_pulse(16);
    // no dedicated power: head and tail segments vanish
    const auto pulsed = small_frame(1.0, 0.0, 33);
    const std::size_t n_tau = 7;
    const auto projected = continuous_projection_oracle(pulsed, pulse, n_tau);
    double head = 0.0;
    for (std::size_t l = 0; l < n_tau; ++l) head = std::max(head, std::abs(projected.at(1, l)));
    double scale = 0.0;
    for (const auto& v : projected.data) scale = std::max(scale, std::abs(v));
    CHECK(head / scale < 1e-6);
    CHECK(max_rel_error(projected, closed_form_echo(pulsed, n_tau)) < 1e-6);

    const auto comm_only = small_frame(0.0, 1.0, 34);
    const auto projected2 = continuous_projection_oracle(comm_only, pulse, n_tau);
    CHECK(max_rel_error(projected2, closed_form_echo(comm_only, n_tau)) < 1e-6);
}

TEST_CASE("oracle rejects delays beyond the comm segment") {
    const auto pulse = make_nyquist_pulse(8);
    const auto frame = small_frame(1.0, 0.5, 35);
    CHECK_THROWS_AS(continuous_projection_oracle(frame, pulse, frame.comm_chips + 1),
                    DelayOutOfRange);
}
