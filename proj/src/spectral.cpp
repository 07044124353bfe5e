#include "nmqfi/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "nmqfi/quadrature.hpp"
#include "nmqfi/special.hpp"

namespace nmqfi {

namespace {

// Upper integration limit: beyond it the exponential cutoff leaves less than
// ~exp(-50) of the integrand mass, far below every tolerance used here.
double upper_limit(const SpectralDensity& sd, double scale = 0.0) {
    return std::max(50.0 * sd.omega_c, 50.0 * scale);
}

} // namespace

SpectralDensity::SpectralDensity(double s_, double eta_, double omega_c_)
    : s(s_), eta(eta_), omega_c(omega_c_) {
    if (!(s > 0.0)) throw std::invalid_argument("SpectralDensity: s must be > 0");
    if (!(eta >= 0.0)) throw std::invalid_argument("SpectralDensity: eta must be >= 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument("SpectralDensity: omega_c must be > 0");
}

double SpectralDensity::j(double omega) const {
    if (omega < 0.0) throw std::domain_error("SpectralDensity::j: omega must be >= 0");
    const double x = omega / omega_c;
    // eta * wc * x^s * exp(-x); the x^s form is well defined at omega = 0 for all s > 0
    return eta * omega_c * std::pow(x, s) * std::exp(-x);
}

double SpectralDensity::integral_j() const {
    return eta * omega_c * omega_c * std::tgamma(s + 1.0);
}

double SpectralDensity::integral_j_over_omega() const {
    return eta * omega_c * std::tgamma(s);
}

ProbeConfig::ProbeConfig(double omega0_, double gamma_) : omega0(omega0_), gamma(gamma_) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("ProbeConfig: omega0 must be > 0");
    if (!std::isfinite(gamma)) throw std::invalid_argument("ProbeConfig: gamma must be finite");
    if (gamma < 0.0) throw std::invalid_argument("ProbeConfig: gamma must be >= 0");
}

complexd correlation(const SpectralDensity& sd, double t) {
    if (t < 0.0) throw std::domain_error("correlation: t must be >= 0");
    const complexd base(1.0, sd.omega_c * t);
    const double amp = sd.integral_j();
    if (sd.s == 1.0) return amp / (base * base);
    return amp * std::exp(-(sd.s + 1.0) * std::log(base));
}

complexd correlation_quadrature(const SpectralDensity& sd, double t) {
    if (t < 0.0) throw std::domain_error("correlation_quadrature: t must be >= 0");
    const double w_max = upper_limit(sd);
    return quad::integrate(
        [&](double w) { return sd.j(w) * std::exp(complexd(0.0, -w * t)); }, 0.0, w_max, 1e-14,
        20);
}

double dispersion_integral(const SpectralDensity& sd, double varpi) {
    if (varpi >= 0.0) throw std::domain_error("dispersion_integral: varpi must be < 0");
    if (sd.eta == 0.0) return 0.0;
    if (sd.s == 1.0) {
        const double z = -varpi / sd.omega_c;
        return sd.eta * (sd.omega_c + varpi * expint_e1_scaled(z));
    }
    return dispersion_integral_quadrature(sd, varpi);
}

double dispersion_integral_quadrature(const SpectralDensity& sd, double varpi) {
    if (varpi >= 0.0) throw std::domain_error("dispersion_integral: varpi must be < 0");
    if (sd.eta == 0.0) return 0.0;
    const double w_max = upper_limit(sd, -varpi);
    return quad::integrate([&](double w) { return sd.j(w) / (w - varpi); }, 0.0, w_max);
}

double residue_integral(const SpectralDensity& sd, double varpi_b) {
    if (varpi_b >= 0.0) throw std::domain_error("residue_integral: varpi_b must be < 0");
    if (sd.eta == 0.0) return 0.0;
    if (sd.s == 1.0) {
        const double z = -varpi_b / sd.omega_c;
        return sd.eta * ((1.0 + z) * expint_e1_scaled(z) - 1.0);
    }
    return residue_integral_quadrature(sd, varpi_b);
}

double residue_integral_quadrature(const SpectralDensity& sd, double varpi_b) {
    if (varpi_b >= 0.0) throw std::domain_error("residue_integral: varpi_b must be < 0");
    if (sd.eta == 0.0) return 0.0;
    const double w_max = upper_limit(sd, -varpi_b);
    return quad::integrate(
        [&](double w) {
            const double denom = w - varpi_b;
            return sd.j(w) / (denom * denom);
        },
        0.0, w_max);
}

MarkovRates markov_rates(const SpectralDensity& sd, const ProbeConfig& probe) {
    const double carrier = probe.carrier();
    if (!(carrier > 0.0)) throw std::domain_error("markov_rates: omega0 + gamma must be > 0");
    MarkovRates rates;
    rates.kappa = M_PI * sd.j(carrier);
    if (sd.eta == 0.0) return rates;

    // P∫ J(w)/(w - carrier) dw: symmetrize over [0, 2*carrier] (the integrand
    // [J(c+x) - J(c-x)]/x is regular at x = 0), then add the plain tail.
    const double symmetric = quad::integrate(
        [&](double x) { return (sd.j(carrier + x) - sd.j(carrier - x)) / x; }, 0.0, carrier);
    const double w_max = upper_limit(sd, carrier);
    const double tail = quad::integrate(
        [&](double w) { return sd.j(w) / (w - carrier); }, 2.0 * carrier, w_max);
    rates.delta = symmetric + tail;
    return rates;
}

} // namespace nmqfi
