#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "svrdoa/cfa_elevation.hpp"

using namespace svrdoa;

TEST_CASE("exact azimuth inverts the noiseless phases") {
    const ArrayGeometry geom = ArrayGeometry::uca(3);
    const PhaseVector g = noiseless_phase(geom, 30.0, 10.0);
    const ElevationEstimate est = estimate_elevation(geom, 10.0, g);
    CHECK(std::abs(est.theta_deg - 30.0) < 1e-9);
    CHECK_FALSE(est.clamped);
    CHECK(est.n_pairs_used >= 1);
}

TEST_CASE("edge of the field of view stays unclamped") {
    const ArrayGeometry geom = ArrayGeometry::uca(3);
    const PhaseVector g = noiseless_phase(geom, 90.0, 40.0);
    const ElevationEstimate est = estimate_elevation(geom, 40.0, g);
    CHECK(est.theta_deg == doctest::Approx(90.0).epsilon(1e-9));
    CHECK_FALSE(est.clamped);
}

TEST_CASE("arguments past the arcsine domain clamp with a flag") {
    const ArrayGeometry geom = ArrayGeometry::uca(3);
    PhaseVector g = noiseless_phase(geom, 90.0, 40.0);
    for (double& p : g.phases) {
        p *= 1.05;  // push the implied sine argument past 1
    }
    const ElevationEstimate high = estimate_elevation(geom, 40.0, g);
    CHECK(high.theta_deg == 90.0);
    CHECK(high.clamped);

    // A negative mean ratio implies a negative sine: clamp to boresight.
    const PhaseVector flipped = [&] {
        PhaseVector v = noiseless_phase(geom, 30.0, 40.0);
        for (double& p : v.phases) {
            p = -p;
        }
        return v;
    }();
    const ElevationEstimate low = estimate_elevation(geom, 40.0, flipped);
    CHECK(low.theta_deg == 0.0);
    CHECK(low.clamped);
}

TEST_CASE("azimuth error sensitivity regression fixture") {
    // Frozen from an independent finite-difference script: +1 degree azimuth
    // error at truth (60.5, 90.5) moves the CFA elevation to 60.6239107...
    const ArrayGeometry geom = ArrayGeometry::uca(3);
    const PhaseVector g = noiseless_phase(geom, 60.5, 90.5);
    const ElevationEstimate exact = estimate_elevation(geom, 90.5, g);
    CHECK(std::abs(exact.theta_deg - 60.5) < 1e-9);
    const ElevationEstimate perturbed = estimate_elevation(geom, 91.5, g);
    CHECK(perturbed.theta_deg == doctest::Approx(60.623910749366594).epsilon(1e-9));
}

TEST_CASE("noiseless exactness across the field of view") {
    for (int n : {3, 4, 5}) {
        const ArrayGeometry geom = ArrayGeometry::uca(n);
        for (double theta = 5.0; theta <= 90.0; theta += 5.0) {
            for (double phi = 0.0; phi <= 180.0; phi += 5.0) {
                const PhaseVector g = noiseless_phase(geom, theta, phi);
                const ElevationEstimate est = estimate_elevation(geom, phi, g);
                CHECK(std::abs(est.theta_deg - theta) < 1e-7);
            }
        }
    }
}

TEST_CASE("every admissible pair subset gives the same answer on clean data") {
    const ArrayGeometry geom = ArrayGeometry::uca(5);
    const PhaseVector g = noiseless_phase(geom, 47.0, 63.0);
    const ElevationEstimate full = estimate_elevation(geom, 63.0, g);

    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        PhaseVector subset = g;
        int kept = 0;
        for (int k = 0; k < subset.n_pairs(); ++k) {
            if (rng() % 2 == 0) {
                subset.degenerate[k] = true;  // exclude this pair
            } else {
                ++kept;
            }
        }
        if (kept == 0) {
            continue;
        }
        ElevationEstimate est;
        try {
            est = estimate_elevation(geom, 63.0, subset);
        } catch (const AllPairsDegenerate&) {
            continue;  // the kept pairs all fell below gamma_min
        }
        CHECK(est.theta_deg == doctest::Approx(full.theta_deg).epsilon(1e-12));
    }
}

TEST_CASE("output range holds under random garbage") {
    const ArrayGeometry geom = ArrayGeometry::uca(4);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phase(-3.2, 3.2);
    std::uniform_real_distribution<double> azimuth(0.0, 180.0);
    for (int rep = 0; rep < 200; ++rep) {
        PhaseVector g = noiseless_phase(geom, 45.0, 90.0);
        for (double& p : g.phases) {
            p = phase(rng);
        }
        const ElevationEstimate est = estimate_elevation(geom, azimuth(rng), g);
        CHECK(est.theta_deg >= 0.0);
        CHECK(est.theta_deg <= 90.0);
    }
}

TEST_CASE("pairs with small gamma are dropped and counted") {
    const ArrayGeometry geom = ArrayGeometry::uca(3);
    // phi = 60 sits on the null of the (1,2) pair chord.
    const PhaseVector g = noiseless_phase(geom, 40.0, 60.0);
    const ElevationEstimate est = estimate_elevation(geom, 60.0, g);
    CHECK(est.n_pairs_used == 2);
    CHECK(est.degenerate_pairs_dropped == 1);
    CHECK(std::abs(est.theta_deg - 40.0) < 1e-9);
}

TEST_CASE("degenerate-phase pairs are dropped and an empty set throws") {
    const ArrayGeometry geom = ArrayGeometry::uca(3);
    PhaseVector g = noiseless_phase(geom, 40.0, 70.0);
    g.degenerate[0] = true;
    const ElevationEstimate est = estimate_elevation(geom, 70.0, g);
    CHECK(est.n_pairs_used == 2);
    CHECK(est.degenerate_pairs_dropped == 1);

    CfaOptions strict;
    strict.gamma_min = 10.0;  // nothing survives
    CHECK_THROWS_AS(estimate_elevation(geom, 70.0, g, strict), AllPairsDegenerate);
}

TEST_CASE("trimmed mean shields the estimate from one corrupted pair") {
    const ArrayGeometry geom = ArrayGeometry::uca(8);
    PhaseVector g = noiseless_phase(geom, 50.0, 95.0);
    g.phases[3] += 2.5;  // one wild pair

    CfaOptions plain;
    CfaOptions trimmed;
    trimmed.trimmed_mean = true;
    const double err_plain =
        std::abs(estimate_elevation(geom, 95.0, g, plain).theta_deg - 50.0);
    const double err_trimmed =
        std::abs(estimate_elevation(geom, 95.0, g, trimmed).theta_deg - 50.0);
    CHECK(err_trimmed < err_plain);
}
