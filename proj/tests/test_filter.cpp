#include <cmath>
#include <vector>

#include "doctest.h"
#include "lsim/filter.hpp"
#include "lsim/model.hpp"
#include "lsim/sim.hpp"
#include "oracles.hpp"

TEST_CASE("filter parameters land on the pinned values") {
    {
        auto spec = lsim::make_filter(32, 1.0, 1.0);
        CHECK(spec.M == 128);
        CHECK(spec.R == 12);
        CHECK(spec.alpha == doctest::Approx(11.313708498984761).epsilon(1e-15));
        CHECK(spec.t_of(spec.R) == doctest::Approx(2.1213203435596424).epsilon(1e-15));
    }
    {
        auto spec = lsim::make_filter(8, 1.0, 1.0);
        CHECK(spec.M == 32);
        CHECK(spec.R == 6);
    }
    {
        // 4*12 = 48 exactly; the rounded sqrt squared lands a hair below 48,
        // so the power must come from the integer product, not alpha^2
        auto spec = lsim::make_filter(12, 1.0, 1.0);
        CHECK(spec.M == 48);
        CHECK(spec.R == 7);
    }
    {
        auto spec = lsim::make_filter(8, 0.5, 1.0);
        CHECK(spec.M == 128);
        CHECK(spec.R == 12);
    }
    {
        auto spec = lsim::make_filter(8, 1.0, 0.5);
        CHECK(spec.R == 3);
    }
}

TEST_CASE("filter rejects degenerate parameters") {
    CHECK_THROWS_AS(lsim::make_filter(0, 1.0, 1.0), lsim::ContractError);
    CHECK_THROWS_AS(lsim::make_filter(8, 0.0, 1.0), lsim::ContractError);
    CHECK_THROWS_AS(lsim::make_filter(8, 1.0, -2.0), lsim::ContractError);
    // M = floor(4/9) = 0: too small to form an even cosine power
    CHECK_THROWS_AS(lsim::make_filter(1, 3.0, 1.0), lsim::ContractError);
}

TEST_CASE("coefficients match the scaled Pascal row") {
    auto spec = lsim::make_filter(8, 1.0, 1.0);  // M = 32
    auto row = oracle::pascal_row_scaled(spec.M);
    long half = spec.M / 2;
    for (int m = 0; m <= spec.R; ++m)
        CHECK(spec.c[m] == doctest::Approx(row[half - m]).epsilon(1e-10));
}

TEST_CASE("coefficient mass plus tail is exactly one") {
    for (int n : {8, 12, 32}) {
        auto spec = lsim::make_filter(n, 1.0, 1.0);
        double mass = spec.c[0];
        for (int m = 1; m <= spec.R; ++m) mass += 2.0 * spec.c[m];
        CHECK(mass + spec.truncation_bound() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("truncation bound equals the Pascal tail mass") {
    auto spec = lsim::make_filter(8, 1.0, 1.0);
    auto row = oracle::pascal_row_scaled(spec.M);
    long half = spec.M / 2;
    double tail = 0.0;
    for (long m = spec.R + 1; m <= half; ++m) tail += 2.0 * row[half - m];
    CHECK(spec.truncation_bound() == doctest::Approx(tail).epsilon(1e-10));
}

TEST_CASE("series reconstruction realizes the cosine-power filter") {
    // For an energy eigenstate, G(t) e^{iEt} = e^{i(E - E0) t}, and the full
    // series sums to cos^M((E - E0)/alpha); truncation at R costs at most the
    // tail mass.
    auto spec = lsim::make_filter(8, 1.0, 1.0);
    for (double offset : {0.0, 0.3, 1.0, 3.0}) {
        lsim::TimeSeries series;
        for (int m = 0; m <= spec.R; ++m) {
            lsim::TimeSeriesPoint pt;
            pt.m = m;
            pt.t = spec.t_of(m);
            pt.re_g = std::cos(offset * pt.t);
            series.push_back(pt);
        }
        auto est = lsim::fdos_from_series(series, spec, 0.0);
        double closed = std::pow(std::cos(offset / spec.alpha), spec.M);
        CHECK(std::abs(est.value - closed) <= spec.truncation_bound() + 1e-12);
    }
}

TEST_CASE("series reconstruction validates the grid") {
    auto spec = lsim::make_filter(8, 1.0, 1.0);
    lsim::TimeSeries series;
    for (int m = 0; m <= spec.R; ++m) {
        lsim::TimeSeriesPoint pt;
        pt.m = m;
        pt.t = spec.t_of(m);
        pt.re_g = 1.0;
        series.push_back(pt);
    }
    CHECK_NOTHROW(lsim::fdos_from_series(series, spec, 0.0));

    auto short_series = series;
    short_series.pop_back();
    CHECK_THROWS_AS(lsim::fdos_from_series(short_series, spec, 0.0), lsim::ContractError);

    auto bad_m = series;
    std::swap(bad_m[1].m, bad_m[2].m);
    CHECK_THROWS_AS(lsim::fdos_from_series(bad_m, spec, 0.0), lsim::ContractError);

    auto bad_t = series;
    bad_t[3].t += 0.01;
    CHECK_THROWS_AS(lsim::fdos_from_series(bad_t, spec, 0.0), lsim::ContractError);
}

TEST_CASE("spectral reference on a single site is the plain Gaussian window") {
    lsim::LatticeSpec lat{1, 1};
    lsim::HubbardParams params{0.5, 2.0};
    auto layout = lsim::build_snake_layout(lat);
    // doubly occupied site: an exact eigenstate with energy U
    auto psi = lsim::make_product_state(lsim::BitMask(0b11), lat);
    for (double E : {-1.0, 0.0, 2.0, 3.5}) {
        double want = std::exp(-(params.U - E) * (params.U - E) / 2.0);
        CHECK(lsim::fdos_exact(psi, lat, params, E, 1.0) == doctest::Approx(want).epsilon(1e-12));
        auto H = lsim::to_dense(lsim::hamiltonian_terms(lat, params, layout), lat.n_qubits());
        CHECK(lsim::fdos_exact(psi, H, E, 1.0) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("dense and sector spectral references agree") {
    lsim::LatticeSpec lat{2, 2};
    lsim::HubbardParams params{0.5, 2.0};
    auto layout = lsim::build_snake_layout(lat);
    auto psi = lsim::neel_state(lat, layout);
    auto H = lsim::to_dense(lsim::hamiltonian_terms(lat, params, layout), lat.n_qubits());
    for (double E : {-1.0, 0.0, 1.0, 2.5})
        CHECK(lsim::fdos_exact(psi, lat, params, E, 1.0) ==
              doctest::Approx(lsim::fdos_exact(psi, H, E, 1.0)).epsilon(1e-11));
}

TEST_CASE("spectral reference rejects non-positive widths") {
    lsim::LatticeSpec lat{2, 2};
    auto psi = lsim::neel_state(lat, lsim::build_snake_layout(lat));
    CHECK_THROWS_AS(lsim::fdos_exact(psi, lat, {}, 0.0, 0.0), lsim::ContractError);
}
