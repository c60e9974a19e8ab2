#include <cmath>

#include "doctest.h"
#include "nlsv/errors.hpp"
#include "nlsv/potentials.hpp"
#include "nlsv/scattering.hpp"

using namespace nlsv;
using doctest::Approx;

TEST_CASE("sampled values") {
    const Grid g(-8, 8, 64);
    for (double v : sample_potential(PotentialSpec::zero(), g).values) CHECK(v == 0.0);

    const auto alg = PotentialSpec::algebraic(1, 3);
    CHECK(alg(0.0) == 1.0);
    CHECK(alg(1.0) == Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
    CHECK(PotentialSpec::sech2(1)(0.0) == -1.0);
    CHECK(PotentialSpec::gaussian(2, 0.5)(0.5) == Approx(2 * std::exp(-0.5)).epsilon(1e-15));
    CHECK(PotentialSpec::poschl_teller(2)(0.0) == -3.0);
    CHECK(PotentialSpec::algebraic(1, 3, 2.0)(2.0) == 1.0);

    const auto s = sample_potential(alg, g);
    REQUIRE(s.values.size() == 64);
    CHECK(s.values[32] == 1.0);  // x = 0
}

TEST_CASE("even potentials sample symmetrically") {
    const Grid g(-20, 20, 1024);
    for (const auto& spec : {PotentialSpec::algebraic(-0.7, 2.5), PotentialSpec::gaussian(1.3, 0.8),
                             PotentialSpec::sech2(0.5), PotentialSpec::poschl_teller(1)}) {
        const auto s = sample_potential(spec, g);
        for (std::size_t j = 1; j < g.size(); ++j) CHECK(s.values[j] == s.values[g.size() - j]);
    }
}

TEST_CASE("spec validation and names") {
    CHECK_THROWS_AS(PotentialSpec::gaussian(1, 0).validate(), InvalidInput);
    CHECK_THROWS_AS(PotentialSpec::algebraic(NAN, 3).validate(), InvalidInput);
    CHECK_THROWS_AS(PotentialSpec::algebraic(1, -1).validate(), InvalidInput);
    CHECK_THROWS_AS(potential_kind_from_string("square"), InvalidInput);
    CHECK(potential_kind_from_string("sech2") == PotentialKind::sech2_scaled);
    for (auto k : {PotentialKind::zero, PotentialKind::algebraic, PotentialKind::gaussian, PotentialKind::poschl_teller,
                   PotentialKind::sech2_scaled})
        CHECK(potential_kind_from_string(to_string(k)) == k);
}

TEST_CASE("delta stand-in is a labelled narrow unit-mass gaussian") {
    const auto d = PotentialSpec::delta_approximation(0.8, 0.02);
    CHECK(d.is_delta_approximation());
    CHECK(d.sigma <= 0.05);
    CHECK_THROWS_AS(PotentialSpec::delta_approximation(1, 0.1), InvalidInput);
    const Grid g(-1, 1, 4096);
    double mass = 0;
    for (double v : sample_potential(d, g).values) mass += v * g.dx();
    CHECK(mass == Approx(0.8).epsilon(1e-10));
    CHECK(d.describe().find("delta") != std::string::npos);
}

TEST_CASE("decay fit") {
    const Grid g(-400, 400, 8192);
    CHECK(decay_fit(PotentialSpec::algebraic(1, 3), g) == Approx(3.0).epsilon(0.033));
    const double s = decay_fit(PotentialSpec::algebraic(-0.5, 2.5), g);
    CHECK(s >= 2.4);
    CHECK(s <= 2.6);
    const Grid h(-40, 40, 2048);
    CHECK(decay_fit(PotentialSpec::gaussian(1, 1), h) == kSuperAlgebraic);
    CHECK(decay_fit(PotentialSpec::sech2(0.5), h) == kSuperAlgebraic);
    CHECK(decay_fit(PotentialSpec::algebraic(1, 3), h) == Approx(3.0).epsilon(0.033));
    CHECK_THROWS_AS(decay_fit(PotentialSpec::zero(), h), InvalidInput);
}

TEST_CASE("admissibility of the catalog") {
    SUBCASE("free line has a zero-energy resonance") {
        const auto r = check_admissibility(PotentialSpec::zero(), Grid(-20, 20, 1024));
        CHECK(r.resonance_detected);
        CHECK(r.bound_state_count == 0);
        CHECK_FALSE(r.admissible);
    }
    SUBCASE("reflectionless well with one bound state and a resonance") {
        const auto spec = PotentialSpec::sech2(1);
        const auto r = check_admissibility(spec, scattering_grid(spec, 1));
        CHECK(r.bound_state_count == 1);
        CHECK(r.bound_state_energies.at(0) == Approx(-0.5).epsilon(1e-8));
        CHECK(r.resonance_detected);
        CHECK_FALSE(r.admissible);
    }
    SUBCASE("shallow well is admissible") {
        const auto spec = PotentialSpec::sech2(0.5);
        const auto r = check_admissibility(spec, scattering_grid(spec, 1));
        const double kappa = (-1 + std::sqrt(5.0)) / 2;
        CHECK(r.bound_state_count == 1);
        CHECK(r.bound_state_energies.at(0) == Approx(-kappa * kappa / 2).epsilon(1e-8));
        CHECK(r.bound_state_energies.at(0) == Approx(-0.1910).epsilon(1e-3));
        CHECK_FALSE(r.resonance_detected);
        CHECK(std::isfinite(r.phi_l1));
        CHECK(std::isfinite(r.phi_linf));
        CHECK(r.admissible);
    }
    SUBCASE("deeper wells carry two bound states") {
        const auto spec = PotentialSpec::poschl_teller(2);
        const auto r = check_admissibility(spec, scattering_grid(spec, 1));
        CHECK(r.bound_state_count == 2);
        CHECK_FALSE(r.admissible);
    }
    SUBCASE("repulsive algebraic barrier") {
        const auto spec = PotentialSpec::algebraic(0.5, 3);
        const auto r = check_admissibility(spec, scattering_grid(spec, 1));
        CHECK(r.bound_state_count == 0);
        CHECK(r.decay_parameter_estimate == Approx(3.0).epsilon(0.033));
        CHECK(r.admissible);
    }
    SUBCASE("slow decay is rejected") {
        const auto spec = PotentialSpec::algebraic(0.5, 1.5);
        const auto r = check_admissibility(spec, Grid(-20000, 20000, 1 << 19));
        CHECK(r.decay_parameter_estimate < 2.0);
        CHECK_FALSE(r.admissible);
    }
    SUBCASE("insufficient edge decay is inconclusive") {
        const auto r = check_admissibility(PotentialSpec::algebraic(1, 3), Grid(-10, 10, 512));
        CHECK(r.inconclusive);
        CHECK_FALSE(r.admissible);
        CHECK_FALSE(r.note.empty());
    }
}

TEST_CASE("admissibility is monotone in the resonance threshold") {
    for (const auto& spec : {PotentialSpec::sech2(0.5), PotentialSpec::sech2(0.999), PotentialSpec::gaussian(0.3, 1),
                             PotentialSpec::algebraic(0.5, 3)}) {
        const Grid g = scattering_grid(spec, 1);
        bool previous = false;
        for (double thr : {1e0, 1e-1, 1e-2, 1e-4, 1e-6, 1e-8}) {
            AdmissibilityTolerances tol;
            tol.resonance_threshold = thr;
            const bool adm = check_admissibility(spec, g, tol).admissible;
            CHECK((!previous || adm));
            previous = adm;
        }
    }
}
