#include <doctest.h>

#include <cmath>

#include "nmqfi/spectral.hpp"
#include "nmqfi/special.hpp"
#include "oracles.hpp"

using nmqfi::complexd;
using nmqfi::ProbeConfig;
using nmqfi::SpectralDensity;

TEST_SUITE_BEGIN("spectral");

TEST_CASE("spectral density construction and basic shape") {
    CHECK_THROWS_AS(SpectralDensity(0.0, 0.02, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity(1.0, -0.1, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralDensity(1.0, 0.02, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProbeConfig(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ProbeConfig(1.0, -0.5), std::invalid_argument);

    const SpectralDensity sd(1.0, 0.02, 100.0);
    CHECK(sd.j(0.0) == 0.0);
    CHECK_THROWS_AS(sd.j(-1.0), std::domain_error);
    CHECK(sd.j(100.0) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("J is nonnegative with a single interior maximum at s*omega_c") {
    for (const double s : {0.5, 1.0, 2.3}) {
        const SpectralDensity sd(s, 0.05, 7.0);
        double best_w = 0.0, best_j = -1.0;
        double prev = 0.0;
        bool increased_then_decreased = true;
        bool rising = true;
        for (int i = 1; i <= 4000; ++i) {
            const double w = i * (70.0 / 4000.0);
            const double jw = sd.j(w);
            CHECK(jw >= 0.0);
            if (jw > best_j) {
                best_j = jw;
                best_w = w;
            }
            if (rising && jw < prev) rising = false;
            else if (!rising && jw > prev + 1e-15) increased_then_decreased = false;
            prev = jw;
        }
        CHECK(increased_then_decreased);
        CHECK(best_w == doctest::Approx(sd.peak_frequency()).epsilon(1e-3));
    }
}

TEST_CASE("correlation function closed form vs quadrature") {
    SUBCASE("f(0) equals the quadrature of the J integral") {
        for (const double s : {0.5, 1.0, 2.3}) {
            const SpectralDensity sd(s, 0.02, 5.0);
            const double j_total =
                nmqfi::quad::integrate([&](double w) { return sd.j(w); }, 0.0, 50.0 * sd.omega_c);
            CHECK(nmqfi::correlation(sd, 0.0).real() == doctest::Approx(j_total).epsilon(1e-8));
            CHECK(nmqfi::correlation(sd, 0.0).imag() == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
    SUBCASE("Ohmic closed form eta wc^2 / (1 + i wc t)^2") {
        const SpectralDensity sd(1.0, 0.02, 100.0);
        for (int k = 0; k < 10; ++k) {
            const double t = 0.001 * std::pow(10.0, k * 0.35);
            const complexd expected =
                sd.eta * sd.omega_c * sd.omega_c /
                (complexd(1.0, sd.omega_c * t) * complexd(1.0, sd.omega_c * t));
            const complexd got = nmqfi::correlation(sd, t);
            CHECK(std::abs(got - expected) <= 1e-8 * std::abs(expected));
        }
    }
    SUBCASE("closed form tracks quadrature on a log grid (all s)") {
        for (const double s : {0.5, 1.0, 2.3}) {
            const SpectralDensity sd(s, 0.03, 12.0);
            // once |f(t)| decays far below f(0), the oscillatory quadrature is
            // limited by double-precision cancellation against the L1 mass
            const double floor = 1e-12 * std::abs(nmqfi::correlation(sd, 0.0));
            for (int k = 0; k <= 12; ++k) {
                const double t = (100.0 / sd.omega_c) * std::pow(10.0, -3.0 + 0.25 * k);
                const complexd closed = nmqfi::correlation(sd, t);
                const complexd quad = nmqfi::correlation_quadrature(sd, t);
                CHECK(std::abs(closed - quad) <= std::max(1e-8 * std::abs(closed), floor));
            }
        }
    }
    SUBCASE("|f| decays to zero at long times") {
        const SpectralDensity sd(1.0, 0.02, 100.0);
        const double f0 = std::abs(nmqfi::correlation(sd, 0.0));
        CHECK(std::abs(nmqfi::correlation(sd, 1000.0 / sd.omega_c)) < 1e-5 * f0);
        CHECK_THROWS_AS(nmqfi::correlation(sd, -0.1), std::domain_error);
    }
}

TEST_CASE("dispersion integral: closed form, quadrature, monotonicity") {
    const SpectralDensity sd(1.0, 0.02, 250.0);
    SUBCASE("dual-path agreement at the documented point") {
        const double closed = nmqfi::dispersion_integral(sd, -1.0);
        const double quad = nmqfi::dispersion_integral_quadrature(sd, -1.0);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
        CHECK(closed > 0.0);
    }
    SUBCASE("zero coupling gives zero") {
        const SpectralDensity off(1.0, 0.0, 250.0);
        CHECK(nmqfi::dispersion_integral(off, -3.0) == 0.0);
    }
    SUBCASE("strictly decreasing in |varpi|") {
        double prev = nmqfi::dispersion_integral(sd, -1e-6);
        for (const double v : {-0.01, -0.1, -1.0, -10.0, -100.0, -1e4}) {
            const double cur = nmqfi::dispersion_integral(sd, v);
            CHECK(cur < prev);
            CHECK(cur > 0.0);
            prev = cur;
        }
    }
    SUBCASE("domain error at varpi >= 0") {
        CHECK_THROWS_AS(nmqfi::dispersion_integral(sd, 0.0), std::domain_error);
        CHECK_THROWS_AS(nmqfi::dispersion_integral(sd, 1.0), std::domain_error);
    }
    SUBCASE("general s falls back to quadrature and stays positive") {
        const SpectralDensity sub(0.5, 0.02, 20.0);
        CHECK(nmqfi::dispersion_integral(sub, -2.0) ==
              doctest::Approx(nmqfi::dispersion_integral_quadrature(sub, -2.0)).epsilon(1e-10));
    }
}

TEST_CASE("residue integral equals the varpi-derivative of the dispersion integral") {
    // d/dvarpi of 1/(w - varpi) is +1/(w - varpi)^2, so the residue integral is
    // the (positive) derivative of the dispersion integral.
    for (const double s : {0.5, 1.0}) {
        const SpectralDensity sd(s, 0.02, 250.0);
        for (const double v : {-0.5, -2.0, -20.0}) {
            const double h = 1e-5 * std::abs(v);
            const double fd = (nmqfi::dispersion_integral(sd, v + h) -
                               nmqfi::dispersion_integral(sd, v - h)) /
                              (2.0 * h);
            const double res = nmqfi::residue_integral(sd, v);
            CHECK(res > 0.0);
            CHECK(res == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    const SpectralDensity off(1.0, 0.0, 250.0);
    CHECK(nmqfi::residue_integral(off, -1.0) == 0.0);
    const SpectralDensity sd(1.0, 0.02, 250.0);
    CHECK_THROWS_AS(nmqfi::residue_integral(sd, 0.5), std::domain_error);
    CHECK(nmqfi::residue_integral(sd, -1.0) ==
          doctest::Approx(nmqfi::residue_integral_quadrature(sd, -1.0)).epsilon(1e-8));
}

TEST_CASE("markov rates") {
    SUBCASE("zero coupling gives zero rates") {
        const SpectralDensity off(1.0, 0.0, 100.0);
        const ProbeConfig probe(1.0, M_PI);
        const nmqfi::MarkovRates rates = nmqfi::markov_rates(off, probe);
        CHECK(rates.kappa == 0.0);
        CHECK(rates.delta == 0.0);
    }
    SUBCASE("kappa = pi J(omega0 + gamma) at the documented point") {
        const SpectralDensity sd(1.0, 0.02, 100.0);
        const ProbeConfig probe(1.0, M_PI);
        const double expected = M_PI * 0.02 * (1.0 + M_PI) * std::exp(-(1.0 + M_PI) / 100.0);
        const double kappa = nmqfi::markov_rates(sd, probe).kappa;
        CHECK(kappa == doctest::Approx(expected).epsilon(1e-12));
        CHECK(kappa == doctest::Approx(0.2500).epsilon(2e-3));
    }
    SUBCASE("delta matches the window-extrapolation oracle") {
        for (const double wc : {10.0, 100.0}) {
            const SpectralDensity sd(1.0, 0.02, wc);
            const ProbeConfig probe(1.0, M_PI);
            const double delta = nmqfi::markov_rates(sd, probe).delta;
            const double ref = oracle::principal_value_window(sd, probe.carrier());
            CHECK(delta == doctest::Approx(ref).epsilon(1e-5));
        }
    }
}

TEST_CASE("exponential integral E1") {
    SUBCASE("matches quadrature of the defining integral (u = x e^v)") {
        for (const double x : {1e-4, 0.05, 0.4, 1.0, 2.5, 8.0, 25.0}) {
            const double v_max = std::log((x + 80.0) / x);
            const double ref = nmqfi::quad::integrate(
                [x](double v) { return std::exp(-x * std::exp(v)); }, 0.0, v_max, 1e-13);
            CHECK(nmqfi::expint_e1(x) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
    SUBCASE("scaled variant is stable for large arguments") {
        // e^x E1(x) ~ (1 - 1/x + 2/x^2 - 6/x^3) / x for x -> inf
        const double x = 1e4;
        const double asym = (1.0 - 1.0 / x + 2.0 / (x * x) - 6.0 / (x * x * x)) / x;
        CHECK(nmqfi::expint_e1_scaled(x) == doctest::Approx(asym).epsilon(1e-10));
        CHECK(std::isfinite(nmqfi::expint_e1_scaled(1e6)));
    }
    CHECK_THROWS_AS(nmqfi::expint_e1(0.0), std::domain_error);
    CHECK_THROWS_AS(nmqfi::expint_e1(-1.0), std::domain_error);
}

TEST_SUITE_END();
