#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "lsim/interferometry.hpp"
#include "lsim/model.hpp"
#include "lsim/rng.hpp"
#include "oracles.hpp"

namespace {

using lsim::cplx;

// Reference Trotterized amplitude <psi0| U_trot |psi0> * e^{iEt}, built from
// the second-quantized bond exponentials.
cplx trotter_amplitude(int x, int y, std::uint32_t bits, double t, int n_steps, double E) {
    lsim::HubbardParams params{0.5, 2.0};
    oracle::Vec v(std::size_t(1) << (2 * x * y), cplx(0, 0));
    v[bits] = 1.0;
    auto w = oracle::trotter_evolve(x, y, params.J, params.U, v, t, n_steps);
    return std::exp(cplx(0, E * t)) * w[bits];
}

}  // namespace

TEST_CASE("exact interferometer outcomes reproduce the reference amplitude") {
    lsim::HubbardParams params{0.5, 2.0};
    for (auto [x, y] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}}) {
        lsim::LatticeSpec lat{x, y};
        auto layout = lsim::build_snake_layout(lat);
        auto psi0 = lsim::neel_state(lat, layout);
        auto bits = static_cast<std::uint32_t>(psi0.bits);
        for (double t : {0.4, 1.6}) {
            for (double E : {0.0, 1.0}) {
                for (int steps : {1, 2, 3}) {
                    auto lc = lsim::build_loschmidt_circuit(psi0, lat, params, t, steps, E);
                    auto out = lsim::run_exact(lc);
                    cplx g = trotter_amplitude(x, y, bits, t, steps, E);
                    double g2 = std::norm(g);
                    CHECK(out.re_g == doctest::Approx(g.real()).epsilon(1e-9));
                    CHECK(out.p0 == doctest::Approx(0.25 * (1 + g2 + 2 * g.real())).epsilon(1e-9));
                    CHECK(out.p_pi ==
                          doctest::Approx(0.25 * (1 + g2 - 2 * g.real())).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("zero evolution time gives a perfect echo") {
    lsim::LatticeSpec lat{2, 2};
    auto layout = lsim::build_snake_layout(lat);
    auto psi0 = lsim::neel_state(lat, layout);
    auto lc = lsim::build_loschmidt_circuit(psi0, lat, {}, 0.0, 2, 3.7);
    auto out = lsim::run_exact(lc);
    CHECK(out.p0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.p_pi == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.re_g == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pilot-rotation onsite shortcut leaves the outcomes unchanged") {
    lsim::LatticeSpec lat{2, 2};
    auto layout = lsim::build_snake_layout(lat);
    auto psi0 = lsim::neel_state(lat, layout);
    lsim::TrotterOptions plain, shortcut;
    shortcut.first_step_onsite_as_1q = true;
    for (double t : {0.6, 1.6}) {
        auto a = lsim::run_exact(lsim::build_loschmidt_circuit(psi0, lat, {}, t, 2, 1.0, plain));
        auto b =
            lsim::run_exact(lsim::build_loschmidt_circuit(psi0, lat, {}, t, 2, 1.0, shortcut));
        CHECK(a.p0 == doctest::Approx(b.p0).epsilon(1e-12));
        CHECK(a.p_pi == doctest::Approx(b.p_pi).epsilon(1e-12));
    }
}

TEST_CASE("sampled outcomes are binomial around the exact ones and deterministic") {
    lsim::LatticeSpec lat{2, 2};
    auto layout = lsim::build_snake_layout(lat);
    auto psi0 = lsim::neel_state(lat, layout);
    auto lc = lsim::build_loschmidt_circuit(psi0, lat, {}, 0.8, 2, 1.0);
    auto exact = lsim::run_exact(lc);

    long shots = 20000;
    lsim::Rng rng(404);
    auto sampled = lsim::run_sampled(lc, shots, rng);
    CHECK(sampled.shots == shots);
    CHECK_FALSE(sampled.exact);
    long total = 0;
    for (auto& [bits, n] : sampled.raw_counts) total += n;
    CHECK(total == shots);
    double band0 = 4.0 * std::sqrt(exact.p0 * (1 - exact.p0) / shots);
    double band_pi = 4.0 * std::sqrt(exact.p_pi * (1 - exact.p_pi) / shots);
    CHECK(std::abs(sampled.p0 - exact.p0) < band0);
    CHECK(std::abs(sampled.p_pi - exact.p_pi) < band_pi);

    lsim::Rng rng2(404);
    auto again = lsim::run_sampled(lc, shots, rng2);
    CHECK(again.raw_counts == sampled.raw_counts);
    CHECK(again.p0 == sampled.p0);

    CHECK_THROWS_AS(lsim::run_sampled(lc, 0, rng), lsim::ContractError);
}

TEST_CASE("noiseless trajectories agree with the exact outcome statistically") {
    lsim::LatticeSpec lat{2, 2};
    auto layout = lsim::build_snake_layout(lat);
    auto psi0 = lsim::neel_state(lat, layout);
    auto lc = lsim::build_loschmidt_circuit(psi0, lat, {}, 0.8, 2, 1.0);
    auto exact = lsim::run_exact(lc);
    lsim::Rng rng(505);
    auto traj = lsim::run_trajectories(lc, 0.0, 4000, rng);
    CHECK(std::abs(traj.p0 - exact.p0) < 4.0 * std::sqrt(exact.p0 * (1 - exact.p0) / 4000.0));
}

TEST_CASE("time grid covers m = 0..R with spacing 2/alpha") {
    auto spec = lsim::make_filter(12, 1.0, 1.0);
    auto grid = lsim::make_time_grid(spec);
    REQUIRE(static_cast<int>(grid.m.size()) == spec.R + 1);
    for (int m = 0; m <= spec.R; ++m) {
        CHECK(grid.m[m] == m);
        CHECK(grid.t[m] == doctest::Approx(2.0 * m / spec.alpha).epsilon(1e-15));
    }
}

TEST_CASE("step policies dial the per-point step count") {
    lsim::TrotterPolicy fig2;
    CHECK(fig2.steps_for(0) == 1);
    CHECK(fig2.steps_for(1) == 1);
    CHECK(fig2.steps_for(2) == 2);
    CHECK(fig2.steps_for(7) == 2);

    lsim::TrotterPolicy fixed;
    fixed.mode = lsim::TrotterPolicy::Mode::fixed;
    fixed.fixed_steps = 4;
    CHECK(fixed.steps_for(0) == 4);
    CHECK(fixed.steps_for(9) == 4);
}

TEST_CASE("exact time series reproduces the continuous-time amplitude") {
    lsim::LatticeSpec lat{2, 2};
    lsim::HubbardParams params{0.5, 2.0};
    auto layout = lsim::build_snake_layout(lat);
    auto psi0 = lsim::neel_state(lat, layout);
    auto spec = lsim::make_filter(lat.n_qubits(), 1.0, 1.0);
    double E = 1.0;
    auto series = lsim::timeseries_exact(psi0, lat, params, spec, E);
    REQUIRE(static_cast<int>(series.size()) == spec.R + 1);
    for (const auto& pt : series) {
        cplx ref = oracle::loschmidt(2, 2, params.J, params.U,
                                     static_cast<std::uint32_t>(psi0.bits), pt.t, E);
        CHECK(std::abs(pt.re_g - ref.real()) < 1e-9);
        CHECK(pt.p0 - pt.p_pi == doctest::Approx(pt.re_g).epsilon(1e-12));
        CHECK(pt.shots == 0);
        CHECK(pt.variance == 0.0);
    }
}

TEST_CASE("trotter series in exact mode equals per-point circuit runs") {
    lsim::LatticeSpec lat{2, 2};
    lsim::HubbardParams params{0.5, 2.0};
    auto layout = lsim::build_snake_layout(lat);
    auto psi0 = lsim::neel_state(lat, layout);
    auto spec = lsim::make_filter(lat.n_qubits(), 1.0, 1.0);
    double E = 0.5;
    lsim::TrotterPolicy policy;
    lsim::Rng rng(1);
    auto series = lsim::timeseries_trotter(psi0, lat, params, spec, E, policy, {}, std::nullopt,
                                           0.0, rng);
    REQUIRE(static_cast<int>(series.size()) == spec.R + 1);
    for (const auto& pt : series) {
        auto lc = lsim::build_loschmidt_circuit(psi0, lat, params, pt.t, policy.steps_for(pt.m), E);
        auto out = lsim::run_exact(lc);
        CHECK(pt.p0 == doctest::Approx(out.p0).epsilon(1e-14));
        CHECK(pt.p_pi == doctest::Approx(out.p_pi).epsilon(1e-14));
    }
}

TEST_CASE("sampled trotter series is deterministic and tracks its variance") {
    lsim::LatticeSpec lat{2, 2};
    lsim::HubbardParams params{0.5, 2.0};
    auto psi0 = lsim::neel_state(lat, lsim::build_snake_layout(lat));
    auto spec = lsim::make_filter(lat.n_qubits(), 1.0, 1.0);
    lsim::TrotterPolicy policy;

    lsim::Rng rng_a(777), rng_b(777);
    auto a = lsim::timeseries_trotter(psi0, lat, params, spec, 1.0, policy, {}, 700L, 0.0, rng_a);
    auto b = lsim::timeseries_trotter(psi0, lat, params, spec, 1.0, policy, {}, 700L, 0.0, rng_b);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].re_g == b[i].re_g);
        CHECK(a[i].shots == 700);
        double want_var = (a[i].p0 * (1 - a[i].p0) + a[i].p_pi * (1 - a[i].p_pi) +
                           2 * a[i].p0 * a[i].p_pi) /
                          700.0;
        CHECK(a[i].variance == doctest::Approx(want_var).epsilon(1e-12));
    }

    // adding series-level Gaussian noise bumps the variance by sigma^2 on top
    // of that run's own shot-noise term
    lsim::Rng rng_c(777);
    auto c = lsim::timeseries_trotter(psi0, lat, params, spec, 1.0, policy, {}, 700L, 0.05, rng_c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        double shot_var = (c[i].p0 * (1 - c[i].p0) + c[i].p_pi * (1 - c[i].p_pi) +
                           2 * c[i].p0 * c[i].p_pi) /
                          700.0;
        CHECK(c[i].variance == doctest::Approx(shot_var + 0.0025).epsilon(1e-12));
    }
}

TEST_CASE("batch reconstruction in exact mode matches the frozen value") {
    lsim::LatticeSpec lat{2, 3};
    lsim::HubbardParams params{0.5, 2.0};
    auto psi0 = lsim::neel_state(lat, lsim::build_snake_layout(lat));
    auto spec = lsim::make_filter(lat.n_qubits(), 1.0, 1.0);
    lsim::Rng rng(3);
    auto ests = lsim::fdos_batch(psi0, {1.0}, spec, lat, params, {}, rng);
    REQUIRE(ests.size() == 1);
    CHECK(ests[0].E == 1.0);
    CHECK(ests[0].value == doctest::Approx(0.295700077077335).epsilon(1e-12));
    CHECK(ests[0].truncation_bound == doctest::Approx(spec.truncation_bound()).epsilon(1e-15));
}

TEST_CASE("batch reconstruction stays close to the spectral reference") {
    lsim::LatticeSpec lat{2, 2};
    lsim::HubbardParams params{0.5, 2.0};
    auto psi0 = lsim::neel_state(lat, lsim::build_snake_layout(lat));
    auto spec = lsim::make_filter(lat.n_qubits(), 1.0, 1.0);
    std::vector<double> energies{-1.0, 0.0, 1.0, 2.0};
    lsim::Rng rng(4);
    auto series_ests = lsim::fdos_batch(psi0, energies, spec, lat, params, {}, rng);

    lsim::EvaluatorConfig trot;
    trot.mode = lsim::EvalMode::trotter_exact;
    auto trot_ests = lsim::fdos_batch(psi0, energies, spec, lat, params, trot, rng);

    // At 8 qubits the cosine power is only M = 32, so the truncated series
    // sits ~2% from the Gaussian-limit reference, and the 1-2 step policy
    // leaves a visible Trotter error on the longest grid times.
    for (std::size_t i = 0; i < energies.size(); ++i) {
        double ref = lsim::fdos_exact(psi0, lat, params, energies[i], 1.0);
        if (ref >= 0.05) {
            CHECK(std::abs(series_ests[i].value - ref) / ref < 0.035);
            CHECK(std::abs(trot_ests[i].value - ref) / ref < 0.15);
        }
    }
}

TEST_CASE("batch reconstruction in sampled mode is seed-deterministic") {
    lsim::LatticeSpec lat{2, 2};
    lsim::HubbardParams params{0.5, 2.0};
    auto psi0 = lsim::neel_state(lat, lsim::build_snake_layout(lat));
    auto spec = lsim::make_filter(lat.n_qubits(), 1.0, 1.0);
    lsim::EvaluatorConfig eval;
    eval.mode = lsim::EvalMode::trotter_sampled;
    eval.shots = 500;
    lsim::Rng rng_a(21), rng_b(21);
    auto a = lsim::fdos_batch(psi0, {0.0, 1.0}, spec, lat, params, eval, rng_a);
    auto b = lsim::fdos_batch(psi0, {0.0, 1.0}, spec, lat, params, eval, rng_b);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}
