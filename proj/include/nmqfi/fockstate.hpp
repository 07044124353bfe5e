// fockstate.hpp — truncated two-mode Fock algebra: coherent states, the
// entangled-coherent input, the dissipative density matrix and its
// gamma-derivative, photon-number observables

#pragma once

#include <Eigen/Dense>

#include "nmqfi/spectral.hpp"

namespace nmqfi {

// Smallest per-mode cutoff accepted for coherent amplitude |alpha|:
// ceil(|a|^2 + 10|a| + 20), which keeps the truncated tail below 1e-12.
int required_cutoff(double abs_alpha);

// Single-mode coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!), length cutoff+1.
// Throws (with the required value) when the cutoff is too small.
Eigen::VectorXcd coherent_vector(complexd alpha, int cutoff);

// Two-mode state on the (n1, n2) product grid, row-major in n1.
struct FockVector {
    int cutoff{0};                // per-mode cutoff n_max
    Eigen::VectorXcd amplitudes;  // size (cutoff+1)^2, index n1*(cutoff+1)+n2

    int dim() const { return cutoff + 1; }
    double norm() const { return amplitudes.norm(); }
};

// Product state |a>_1 |b>_2 from single-mode amplitude vectors.
FockVector two_mode_product(const Eigen::VectorXcd& mode1, const Eigen::VectorXcd& mode2);

// Creation operator on mode 2 (the top Fock row is dropped by truncation).
FockVector apply_mode2_creation(const FockVector& v);

// Entangled coherent input N_a [|alpha, 0> + |0, alpha>], alpha real > 0.
FockVector ecs_input(double alpha, int cutoff);

// Total mean photon number N = |a|^2 / (1 + e^{-|a|^2}) and its inverse.
double n_of_alpha(double alpha);
double alpha_of_n(double n_avg);

// Dissipative two-mode density matrix and (optionally) its gamma-derivative.
struct TwoModeDensity {
    int cutoff{0};
    Eigen::MatrixXcd matrix;
    Eigen::MatrixXcd d_gamma;  // empty unless attached

    bool has_d_gamma() const { return d_gamma.size() > 0; }
};

// rho(t) for the ECS probe: branch |alpha e^{-i omega0 t}, 0> survives intact,
// branch |0, c alpha> decays through c, and the cross term carries the
// coherence factor exp[-(|alpha|^2/2)(1 - |c|^2)]. Validates trace and
// Hermiticity of the assembled matrix.
TwoModeDensity rho_of_t(double alpha, complexd c_value, double omega0_t, int cutoff);

// Chain-rule derivative of rho(t) with respect to gamma given dc/dgamma;
// Hermitian and traceless.
Eigen::MatrixXcd rho_derivative(double alpha, complexd c_value, complexd dc_dgamma,
                                double omega0_t, int cutoff);

// Convenience: rho with d_gamma attached.
TwoModeDensity rho_with_derivative(double alpha, complexd c_value, complexd dc_dgamma,
                                   double omega0_t, int cutoff);

// Tr[rho (n1 + n2)].
double expected_photon_number(const TwoModeDensity& rho);

} // namespace nmqfi
