#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nmqfi/boundstate.hpp"
#include "oracles.hpp"

using nmqfi::BoundState;
using nmqfi::ProbeConfig;
using nmqfi::SpectralDensity;

namespace {
const ProbeConfig kProbe(1.0, M_PI);
constexpr double kEta = 0.02;
}  // namespace

TEST_SUITE_BEGIN("boundstate");

TEST_CASE("existence criterion flips at the Ohmic threshold") {
    const double threshold = (1.0 + M_PI) / kEta;  // ~207.08
    CHECK(!nmqfi::bound_state_exists(SpectralDensity(1.0, kEta, 200.0), kProbe));
    CHECK(nmqfi::bound_state_exists(SpectralDensity(1.0, kEta, 250.0), kProbe));
    CHECK(!nmqfi::bound_state_exists(SpectralDensity(1.0, kEta, threshold * (1.0 - 1e-12)), kProbe));
    CHECK(nmqfi::bound_state_exists(SpectralDensity(1.0, kEta, threshold * (1.0 + 1e-12)), kProbe));
    CHECK(!nmqfi::bound_state_exists(SpectralDensity(1.0, 0.0, 1e6), kProbe));
}

TEST_CASE("find_bound_state residual and dual-path residue") {
    const SpectralDensity sd(1.0, kEta, 300.0);
    const BoundState bs = nmqfi::find_bound_state(sd, kProbe);
    CHECK(bs.varpi_b < 0.0);
    CHECK(bs.residual < 1e-10);
    CHECK(bs.z > 0.0);
    CHECK(bs.z <= 1.0);
    // residue from the defining integral vs the Ohmic closed form
    const double closed = nmqfi::ohmic_z_closed_form(sd, kProbe, bs.varpi_b);
    CHECK(bs.z == doctest::Approx(closed).epsilon(1e-8));
    // Z = [1 + residue_integral]^{-1} by construction
    CHECK(bs.z ==
          doctest::Approx(1.0 / (1.0 + nmqfi::residue_integral(sd, bs.varpi_b))).epsilon(1e-12));
}

TEST_CASE("no bound state raises instead of returning Z = 0") {
    const SpectralDensity sd(1.0, kEta, 150.0);
    CHECK_THROWS_AS(nmqfi::find_bound_state(sd, kProbe), nmqfi::no_bound_state_error);
}

TEST_CASE("Z grows monotonically with the cutoff above threshold") {
    double prev = 0.0;
    for (const double wc : {207.2, 215.0, 250.0, 400.0, 1000.0}) {
        const double z = nmqfi::find_bound_state(SpectralDensity(1.0, kEta, wc), kProbe).z;
        CHECK(z > prev);
        prev = z;
    }
    // the approach to Z -> 0+ at threshold is logarithmic: even 1e-12 above
    // the flip the residue is already sizeable
    const double thr = (1.0 + M_PI) / kEta;
    const double z_eps = nmqfi::find_bound_state(SpectralDensity(1.0, kEta, thr * (1.0 + 1e-12)),
                                                 kProbe).z;
    CHECK(z_eps < 0.7);
    CHECK(z_eps > 0.0);
}

TEST_CASE("pole equation bracket contains exactly one sign change") {
    const SpectralDensity sd(1.0, kEta, 300.0);
    auto g = [&](double v) { return nmqfi::level_shift_function(sd, kProbe, v) - v; };
    const double vb = nmqfi::find_bound_state(sd, kProbe).varpi_b;
    CHECK(g(-40.0) > 0.0);
    CHECK(g(-1e-12) < 0.0);
    double prev = g(-40.0);
    int sign_changes = 0;
    for (int i = 1; i <= 400; ++i) {
        const double v = -40.0 + i * (40.0 - 1e-9) / 400.0;
        const double cur = g(v);
        CHECK(cur < prev + 1e-12);  // strictly decreasing
        if ((cur > 0.0) != (prev > 0.0)) ++sign_changes;
        prev = cur;
    }
    CHECK(sign_changes == 1);
    CHECK(g(vb - 1e-6) > 0.0);
    CHECK(g(vb + 1e-6) < 0.0);
}

TEST_CASE("d varpi_b / d gamma equals Z") {
    const SpectralDensity sd(1.0, kEta, 300.0);
    const BoundState bs = nmqfi::find_bound_state(sd, kProbe);
    SUBCASE("finite difference against Z at the documented delta") {
        const double fd = nmqfi::dz_dgamma_check(sd, kProbe, bs, 1e-4);
        CHECK(fd == doctest::Approx(bs.z).epsilon(1e-5));
    }
    SUBCASE("identity holds across a parameter grid") {
        for (const double gamma : {1.5, M_PI, 4.5}) {
            for (const double wc : {300.0, 600.0, 1200.0}) {
                const ProbeConfig probe(1.0, gamma);
                const SpectralDensity sdg(1.0, kEta, wc);
                if (!nmqfi::bound_state_exists(sdg, probe)) continue;
                const BoundState b = nmqfi::find_bound_state(sdg, probe);
                CHECK(nmqfi::dz_dgamma_check(sdg, probe, b) == doctest::Approx(b.z).epsilon(1e-5));
            }
        }
    }
    SUBCASE("second-order stencil: halving delta shrinks the error ~4x") {
        const double e1 = std::abs(nmqfi::dz_dgamma_check(sd, kProbe, bs, 2e-3) - bs.z);
        const double e2 = std::abs(nmqfi::dz_dgamma_check(sd, kProbe, bs, 1e-3) - bs.z);
        CHECK(e1 / e2 > 3.0);
        CHECK(e1 / e2 < 5.5);
    }
    SUBCASE("stencil crossing the threshold is rejected") {
        // threshold gamma* = eta wc - omega0; put gamma within delta of it
        const double wc = 300.0;
        const double gamma_star = kEta * wc - 1.0;
        const ProbeConfig probe(1.0, gamma_star - 5e-5);
        const SpectralDensity sdg(1.0, kEta, wc);
        REQUIRE(nmqfi::bound_state_exists(sdg, probe));
        const BoundState b = nmqfi::find_bound_state(sdg, probe);
        CHECK_THROWS_AS(nmqfi::dz_dgamma_check(sdg, probe, b, 1e-4),
                        nmqfi::no_bound_state_error);
    }
}

TEST_CASE("discretized spectrum") {
    SUBCASE("zero coupling decouples into probe + bath grid") {
        const SpectralDensity off(1.0, 0.0, 50.0);
        const nmqfi::SpectrumSlice slice = nmqfi::discretized_spectrum(off, kProbe, 64);
        REQUIRE(slice.eigenfrequencies.size() == 65);
        const nmqfi::DiscretizedBath bath = nmqfi::discretize_bath(off, 64, 1e-4, 8.0 * 50.0);
        std::vector<double> expected = bath.omega;
        expected.push_back(kProbe.carrier());
        std::sort(expected.begin(), expected.end());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(slice.eigenfrequencies[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
    SUBCASE("ground state converges to the bound-state pole") {
        const SpectralDensity sd(1.0, kEta, 400.0);
        const double vb = nmqfi::find_bound_state(sd, kProbe).varpi_b;
        auto ground_error = [&](int m) {
            const double ground =
                nmqfi::discretized_spectrum(sd, kProbe, m).eigenfrequencies.front();
            return std::abs(ground - vb) / std::abs(vb);
        };
        const double coarse = ground_error(500);
        const double fine = ground_error(4000);
        CHECK(fine < 1e-3);
        CHECK(fine < coarse);
    }
    SUBCASE("ground-state sign tracks existence across the threshold scan") {
        for (const double wc : {140.0, 160.0, 180.0, 195.0, 205.0}) {
            const SpectralDensity sd(1.0, kEta, wc);
            REQUIRE(!nmqfi::bound_state_exists(sd, kProbe));
            const double ground =
                nmqfi::discretized_spectrum(sd, kProbe, 800).eigenfrequencies.front();
            CHECK(ground > -1e-4);
        }
        for (const double wc : {230.0, 260.0, 300.0, 340.0, 380.0}) {
            const SpectralDensity sd(1.0, kEta, wc);
            REQUIRE(nmqfi::bound_state_exists(sd, kProbe));
            const double ground =
                nmqfi::discretized_spectrum(sd, kProbe, 800).eigenfrequencies.front();
            CHECK(ground < 0.0);
        }
    }
    SUBCASE("csv serialization") {
        const SpectralDensity sd(1.0, kEta, 250.0);
        const nmqfi::SpectrumSlice slice = nmqfi::discretized_spectrum(sd, kProbe, 16);
        const std::string csv = nmqfi::spectrum_to_csv(slice);
        CHECK(csv.rfind("index,eigenfrequency\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 18);  // header + 17 rows
    }
    CHECK_THROWS_AS(nmqfi::discretize_bath(SpectralDensity(1.0, kEta, 10.0), 1, 1e-4, 80.0),
                    std::invalid_argument);
}

TEST_SUITE_END();
