// dynamics.hpp — exact probe-amplitude dynamics c(t) under the memory kernel,
// its gamma-sensitivity, and the Markovian / bound-state closed forms

#pragma once

#include <stdexcept>
#include <vector>

#include "nmqfi/boundstate.hpp"
#include "nmqfi/spectral.hpp"

namespace nmqfi {

struct instability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Method { exact, markovian, asymptotic };

// Solution samples of the amplitude equation
//   c'(t) + i (omega0 + gamma) c(t) + ∫_0^t f(t - tau) c(tau) dtau = 0,  c(0) = 1,
// on a uniform grid, optionally with the sensitivity dc/dgamma.
struct AmplitudeTrajectory {
    std::vector<double> times;        // uniform grid starting at 0
    std::vector<complexd> c;          // c[0] = 1
    std::vector<complexd> dc_dgamma;  // empty until the sensitivity pass runs
    Method method{Method::exact};

    // parameters the trajectory was solved with (grid/parameter consistency checks)
    double s{1.0}, eta{0.0}, omega_c{1.0}, omega0{1.0}, gamma{0.0};

    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    bool has_sensitivity() const { return !dc_dgamma.empty(); }

    // Linear interpolation at time t within [0, t_end].
    complexd c_at(double t) const;
    complexd dc_at(double t) const;
};

// Step size resolving the rotating-frame dynamics; the solver integrates the
// kernel within each panel exactly, so the step tracks the amplitude rates
// (carrier + kernel strength + bound-state depth), not the raw cutoff.
double default_time_step(const SpectralDensity& sd, const ProbeConfig& probe);

// Second-order product-integration solve of the amplitude equation (rotating
// frame, piecewise-linear history, implicit trapezoid corrector). O(N^2) in
// the number of steps. Throws instability_error if |c| leaves the unit disk
// by more than 1e-6.
AmplitudeTrajectory solve_c(const SpectralDensity& sd, const ProbeConfig& probe, double t_end,
                            double dt);

// Forced companion equation for dc/dgamma sharing the stepper and kernel:
//   (dc)' + i c + i (omega0 + gamma) dc + ∫ f (dc) = 0,  dc(0) = 0.
// Returns a copy of the trajectory with dc_dgamma filled.
AmplitudeTrajectory solve_sensitivity(const SpectralDensity& sd, const ProbeConfig& probe,
                                      const AmplitudeTrajectory& trajectory);

// One-call variant used by the sweep pipeline.
AmplitudeTrajectory solve_with_sensitivity(const SpectralDensity& sd, const ProbeConfig& probe,
                                           double t_end, double dt);

// Markovian closed form exp(-[kappa + i(omega0 + gamma + Delta)] t).
complexd markovian_c(const MarkovRates& rates, const ProbeConfig& probe, double t);
complexd markovian_c(const SpectralDensity& sd, const ProbeConfig& probe, double t);

// Long-time limit Z exp(-i varpi_b t) in the presence of a bound state.
complexd asymptotic_c(const BoundState& bs, double t);

// Photon transmission rate (1 + |c|^2)/2 in [1/2, 1].
double transmission(complexd c_value);

} // namespace nmqfi
