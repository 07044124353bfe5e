// spectral.hpp — Ohmic-family spectral density and the bath integrals built on it
//
// All frequencies are measured in units of the probe frequency omega0 and all
// times in units of 1/omega0.

#pragma once

#include <complex>

namespace nmqfi {

using complexd = std::complex<double>;

// Environmental spectral density J(w) = eta * w * (w/wc)^(s-1) * exp(-w/wc).
struct SpectralDensity {
    double s{1.0};        // Ohmicity exponent (> 0); s<1 sub-Ohmic, s=1 Ohmic, s>1 super-Ohmic
    double eta{0.0};      // dimensionless coupling constant (>= 0)
    double omega_c{1.0};  // cutoff frequency (> 0)

    SpectralDensity(double s_, double eta_, double omega_c_);

    double j(double omega) const;                       // J(omega) for omega >= 0
    double peak_frequency() const { return s * omega_c; }

    double integral_j() const;           // ∫ J(w) dw          = eta wc^2 Γ(s+1)
    double integral_j_over_omega() const;// ∫ J(w)/w dw        = eta wc Γ(s)
};

// Probe mode frequency and the estimated parameter (linear number coupling).
struct ProbeConfig {
    double omega0{1.0};  // the frequency unit
    double gamma{0.0};   // estimated parameter, in units of omega0

    ProbeConfig(double omega0_, double gamma_);
    double carrier() const { return omega0 + gamma; }
};

// Bath correlation function f(t) = ∫_0^∞ J(w) e^{-iwt} dw.
// Closed form eta Γ(s+1) wc^2 (1 + i wc t)^{-(s+1)}, exact for every s > 0.
complexd correlation(const SpectralDensity& sd, double t);

// Same integral by adaptive quadrature; cross-validation path.
complexd correlation_quadrature(const SpectralDensity& sd, double t);

// Dispersion integral ∫_0^∞ J(w)/(w - varpi) dw for varpi < 0.
// s=1 uses the closed form eta [wc + varpi e^{-varpi/wc} E1(-varpi/wc)];
// other s fall back to quadrature.
double dispersion_integral(const SpectralDensity& sd, double varpi);
double dispersion_integral_quadrature(const SpectralDensity& sd, double varpi);

// Residue integral ∫_0^∞ J(w)/(varpi_b - w)^2 dw for varpi_b < 0. Equals the
// varpi-derivative of the dispersion integral; strictly positive.
double residue_integral(const SpectralDensity& sd, double varpi_b);
double residue_integral_quadrature(const SpectralDensity& sd, double varpi_b);

struct MarkovRates {
    double kappa{0.0};  // decay rate pi * J(omega0 + gamma)
    double delta{0.0};  // principal-value frequency shift
};

// Markovian decay rate and frequency shift at the probe carrier. The principal
// value is evaluated by symmetrizing the integrand about the singularity.
MarkovRates markov_rates(const SpectralDensity& sd, const ProbeConfig& probe);

} // namespace nmqfi
