// boundstate.hpp — isolated single-excitation eigenstate below the continuum:
// existence criterion, pole/residue solver, and discretized-bath energy spectra

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nmqfi/spectral.hpp"

namespace nmqfi {

struct no_bound_state_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Isolated root varpi_b < 0 of y(varpi) = varpi together with its residue Z.
struct BoundState {
    double varpi_b{0.0};   // bound-state eigenfrequency, < 0
    double z{0.0};         // residue Z = [1 + residue_integral(varpi_b)]^{-1}, in (0, 1]
    double residual{0.0};  // |y(varpi_b) - varpi_b| achieved by the solver
};

// y(varpi) = omega0 + gamma - ∫ J(w)/(w - varpi) dw  (varpi < 0).
double level_shift_function(const SpectralDensity& sd, const ProbeConfig& probe, double varpi);

// y(0) = omega0 + gamma - eta wc Γ(s); a bound state exists iff this is <= 0.
double existence_margin(const SpectralDensity& sd, const ProbeConfig& probe);
bool bound_state_exists(const SpectralDensity& sd, const ProbeConfig& probe);

// Solve y(varpi) = varpi on (-inf, 0) by bracketed Brent iteration.
// Throws no_bound_state_error when the existence criterion fails.
BoundState find_bound_state(const SpectralDensity& sd, const ProbeConfig& probe,
                            double tol = 1e-12);

// Ohmic (s=1) closed form Z = [(w0+g-eta*wc)/varpi_b + (varpi_b-w0-g)/wc]^{-1};
// cross-check partner for the integral-form residue.
double ohmic_z_closed_form(const SpectralDensity& sd, const ProbeConfig& probe, double varpi_b);

// Central finite difference [varpi_b(gamma+d) - varpi_b(gamma-d)]/(2d); equals
// Z by the pole equation. Throws if the bound state is lost inside the stencil.
double dz_dgamma_check(const SpectralDensity& sd, const ProbeConfig& probe,
                       const BoundState& bs, double delta = 1e-4);

// Linear discretization of the bath band with midpoint couplings g_k = sqrt(J(w_k) dw).
struct DiscretizedBath {
    std::vector<double> omega;  // mode frequencies
    std::vector<double> g;      // probe-mode couplings
};
DiscretizedBath discretize_bath(const SpectralDensity& sd, int m, double band_lo, double band_hi);

// All single-excitation eigenfrequencies of probe + M discretized bath modes.
struct SpectrumSlice {
    double omega_c{0.0};
    std::vector<double> eigenfrequencies;  // sorted ascending, M+1 values
    int discretization_count{0};
};

// Default band [1e-4, 8 wc] covers the band edge and the exponential tail.
SpectrumSlice discretized_spectrum(const SpectralDensity& sd, const ProbeConfig& probe, int m);
SpectrumSlice discretized_spectrum(const SpectralDensity& sd, const ProbeConfig& probe, int m,
                                   double band_lo, double band_hi);

// CSV serialization (columns: index, eigenfrequency).
std::string spectrum_to_csv(const SpectrumSlice& slice);

} // namespace nmqfi
