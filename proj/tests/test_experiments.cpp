#include <cmath>

#include "doctest.h"
#include "nlsv/errors.hpp"
#include "nlsv/experiments.hpp"
#include "oracles.hpp"

using namespace nlsv;
using doctest::Approx;

namespace {
ExperimentConfig algebraic_config(double q) {
    ExperimentConfig c;
    c.potential = PotentialSpec::algebraic(q, 3);
    c.delta = 0.6;
    c.velocities = {8, 16, 32, 64};
    return c;
}
}  // namespace

TEST_CASE("phase times") {
    const auto a = phase_times(16, -2, 0.75);
    CHECK(a.t1 == 0.0);
    CHECK(a.t2 == Approx(0.25).epsilon(1e-14));
    CHECK(a.t_end == Approx(0.25 * std::log(16.0)).epsilon(1e-14));
    CHECK(a.t3 == Approx(a.t2 + a.t_end).epsilon(1e-14));

    const auto b = phase_times(100, -10, 0.6);
    CHECK(b.t1 == Approx(0.1 - std::pow(100.0, -0.6)).epsilon(1e-14));
    CHECK(b.t2 == Approx(0.1 + std::pow(100.0, -0.6)).epsilon(1e-14));

    CHECK_THROWS_AS(phase_times(4, -0.1, 0.6), InvalidInput);
    CHECK_THROWS_AS(phase_times(1, -5, 0.6), InvalidInput);
    CHECK_THROWS_AS(phase_times(8, 1, 0.6), InvalidInput);
    CHECK_THROWS_AS(phase_times(8, -5, 1.0), InvalidInput);

    for (double v : {2.0, 8.0, 50.0, 1000.0}) {
        const double x0 = -2 * std::pow(v, 0.4);
        const auto p = phase_times(v, x0, 0.6);
        CHECK(p.t2 - p.t1 == Approx(2 * std::pow(v, -0.6)).epsilon(1e-12));
        CHECK(p.t1 > 0);
    }
}

TEST_CASE("experiment config validation") {
    auto c = algebraic_config(0.5);
    CHECK_NOTHROW(c.validate());
    CHECK(c.decay_parameter() == 3.0);
    c.delta = 0.4;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.delta = 0.75;
    CHECK_THROWS_AS(c.validate(), InvalidInput);
    c.delta = 0.74;
    CHECK_NOTHROW(c.validate());

    auto well = algebraic_config(0.5);
    well.potential = PotentialSpec::sech2(0.5);
    well.delta = 0.95;
    CHECK(std::isinf(well.decay_parameter()));
    CHECK_NOTHROW(well.validate());

    auto close = algebraic_config(0.5);
    close.x0_factor = 0.5;
    CHECK_THROWS_AS(close.validate(), InvalidInput);
    CHECK(algebraic_config(0.5).x0_for(32) == Approx(-2 * std::pow(32.0, 0.4)));
}

TEST_CASE("run grid honours resolution and support") {
    for (double v : {8.0, 64.0}) {
        const SolitonParams sol{v, -2 * std::pow(v, 0.4), 1};
        const double t_end = 0.4 * std::log(v);
        const Grid g = run_grid(PotentialSpec::algebraic(0.5, 3), sol, t_end, GridRule{});
        CHECK_NOTHROW(check_resolution(g, v, 1));
        CHECK(soliton_edge_tail(sol, 0, g) <= 1e-12);
        CHECK(soliton_edge_tail(sol, t_end, g) <= 1e-12);
        CHECK(is_power_of_two(g.size()));
    }
}

TEST_CASE("forcing profile") {
    const Grid g(-60, 60, 4096);
    const SolitonParams sol{8, -20, 1};
    std::vector<double> ts;
    for (int i = 0; i <= 1000; ++i) ts.push_back(5.0 * i / 1000);

    const auto none = forcing_profile(PotentialSpec::zero(), sol, ts, g, 3);
    for (double n : none.norms) CHECK(n == 0.0);

    const auto fp = forcing_profile(PotentialSpec::algebraic(1, 3), sol, ts, g, 3);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (fp.norms[i] > fp.norms[imax]) imax = i;
    CHECK(std::abs(ts[imax] - 20.0 / 8) <= 2.0 / 8);

    CHECK(std::isfinite(fp.constant));
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(fp.norms[i] <= fp.envelope[i] * (1 + 1e-12));

    // past the interaction, unit-time windows carry less and less forcing
    const double t2 = 20.0 / 8 + std::pow(8.0, -0.6);
    std::vector<double> window_sup;
    for (int k = 0; t2 + k + 1 <= 5.0 + 1e-12; ++k) {
        double m = 0;
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (ts[i] >= t2 + k && ts[i] <= t2 + k + 1) m = std::max(m, fp.norms[i]);
        window_sup.push_back(m);
    }
    REQUIRE(window_sup.size() >= 2);
    for (std::size_t k = 1; k < window_sup.size(); ++k) CHECK(window_sup[k] < window_sup[k - 1]);
}

TEST_CASE("weighted exponential bound") {
    for (double s : {0.6, 1.0, 2.0, 3.0}) CHECK(lemma_ratio(s, 0.0, 60) <= 1.0);
    CHECK(lemma_ratio(0.0, 0.0, 60) == Approx(1.0).epsilon(1e-10));

    for (double y : {-13.0, 0.5, 27.0}) {
        const double s = 2.0;
        auto g2 = [&](double x) { return std::exp(-2 * std::abs(x - y)) * std::pow(1 + x * x, -s); };
        const double direct = std::sqrt(oracle::integrate(g2, -300, y) + oracle::integrate(g2, y, 300)) *
                              std::pow(1 + y * y, s / 2);
        CHECK(lemma_ratio(s, y, 150) == Approx(direct).epsilon(1e-9));
    }

    std::vector<double> ys;
    for (int i = 0; i <= 160; ++i) ys.push_back(-40 + 0.5 * i);
    for (double s : {1.0, 2.0, 3.0}) {
        const auto chk = lemma_error_check(s, ys);
        CHECK(std::isfinite(chk.sup_ratio));
        CHECK(chk.stable);
        CHECK_FALSE(chk.inconclusive);
    }
    const double r20 = lemma_ratio(3, 20, 200), r40 = lemma_ratio(3, 40, 200);
    CHECK(std::abs(r40 - r20) <= 0.1 * r20);

    CHECK(lemma_error_check(2, {-40, 40}, 30).inconclusive);
    CHECK_THROWS_AS(lemma_error_check(0.5, ys), InvalidInput);
}

TEST_CASE("log-log slope and the scaling verdict") {
    CHECK(loglog_slope({10, 100}, {0.1, 0.01}) == Approx(-1.0).epsilon(1e-14));
    const double d = 0.6;
    std::vector<double> vs{8, 16, 32, 64}, es;
    for (double v : vs) es.push_back(3.7 * std::pow(v, -(2 * d - 1)));
    CHECK(loglog_slope(vs, es) == Approx(-(2 * d - 1)).epsilon(1e-12));
    CHECK_THROWS_AS(loglog_slope({1}, {1}), InvalidInput);

    const std::vector<double> floors(4, 1e-9);
    const auto pass = evaluate_scaling(vs, es, floors, d);
    CHECK(pass.pass);
    CHECK(pass.bound_slope == Approx(-0.2));

    const auto flat = evaluate_scaling(vs, {0.1, 0.098, 0.096, 0.094}, floors, d);
    CHECK(flat.strictly_decreasing);
    CHECK_FALSE(flat.pass);

    const auto bump = evaluate_scaling(vs, {0.1, 0.05, 0.06, 0.01}, floors, d);
    CHECK_FALSE(bump.strictly_decreasing);
    CHECK_FALSE(bump.pass);

    const auto noisy = evaluate_scaling(vs, es, {1e-9, 1e-9, 1e-9, 0.5}, d);
    CHECK_FALSE(noisy.points[3].above_floor);
    CHECK_FALSE(noisy.gates_ok);
    CHECK_FALSE(noisy.pass);
}

TEST_CASE("free runs sit at the discretization floor") {
    auto c = algebraic_config(0.5);
    c.potential = PotentialSpec::zero();
    c.delta = 0.75;
    CHECK_THROWS_AS(transmission_run(c, 16), InvalidInput);  // zero potential is resonant
    c.override_admissibility = true;
    const auto r = transmission_run(c, 16);
    CHECK(r.admissibility_overridden);
    CHECK(r.sup_error == r.floor_error);
    CHECK(r.sup_error < 1e-6);
    CHECK_FALSE(r.edge_violation);
}

TEST_CASE("interaction dominates the pre-interaction error") {
    RunOptions opts;
    opts.compute_floor = false;
    const auto r = transmission_run(algebraic_config(0.5), 32, opts);
    CHECK(r.phase_peaks[0] < 0.1 * r.phase_peaks[1]);
    CHECK(r.phase_peaks[1] <= r.phase_peaks[2]);
    CHECK_FALSE(r.edge_violation);
    CHECK(r.series.times.back() == Approx(r.phases.t_end));
}

TEST_CASE("sign of the potential does not change the velocity scaling") {
    RunOptions opts;
    opts.compute_floor = false;
    for (double q : {0.5, -0.5}) {
        CAPTURE(q);
        const auto c = algebraic_config(q);
        std::vector<double> vs{8, 16, 32}, es;
        for (double v : vs) es.push_back(transmission_run(c, v, opts).sup_error);
        CHECK(es[1] < es[0]);
        CHECK(es[2] < es[1]);
        CHECK(loglog_slope(vs, es) <= -(2 * c.delta - 1) + 0.1);
    }
}

TEST_CASE("parallel runs reproduce sequential runs exactly") {
    auto c = algebraic_config(0.5);
    const std::vector<double> vs{4, 5, 6};
    const auto seq = run_velocities(c, vs, 1);
    const auto par = run_velocities(c, vs, 3);
    REQUIRE(seq.size() == 3);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        CHECK(seq[i].v == vs[i]);
        CHECK(par[i].v == vs[i]);
        CHECK(seq[i].series.err_l2 == par[i].series.err_l2);
        CHECK(seq[i].series.energy == par[i].series.energy);
    }
}

TEST_CASE("study preconditions") {
    auto c = algebraic_config(0.5);
    c.velocities = {8};
    CHECK_THROWS_AS(scaling_study(c), InvalidInput);
    c.velocities = {8, 9, 10, 12};
    CHECK_THROWS_AS(scaling_study(c), InvalidInput);
    auto bad = algebraic_config(0.5);
    bad.potential = PotentialSpec::sech2(1);
    CHECK_THROWS_AS(scaling_study(bad), InvalidInput);
}
