// qfi.hpp — quantum Fisher information for pure and mixed states, closed-form
// ideal / asymptotic / Markovian expressions, and precision benchmarks

#pragma once

#include <limits>
#include <vector>

#include "nmqfi/fockstate.hpp"
#include "nmqfi/special.hpp"

namespace nmqfi {

struct invalid_state_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pure-state QFI 4 [ <dpsi|dpsi> - |<dpsi|psi>|^2 ]; psi must be normalized.
double qfi_pure(const FockVector& psi, const FockVector& dpsi);

enum class MixedMethod {
    dense,     // full eigendecomposition of rho (reference path)
    subspace,  // certified projection onto range(rho) + range(rho'); exact and
               // much faster for low-rank states
};

// Mixed-state QFI sum_{ij} 2 |<i|rho'|j>|^2 / (l_i + l_j) over eigenpairs with
// l_i + l_j > eps_rank. Requires rho.d_gamma.
double qfi_mixed(const TwoModeDensity& rho, double eps_rank = 1e-10,
                 MixedMethod method = MixedMethod::dense);

// Rank-structured QFI of the dissipative ECS directly from (alpha, c, dc):
// the state lives in the span of three vectors, so a 3x3 eigenproblem gives
// the same value as the dense path up to truncation error.
double ecs_qfi(double alpha, complexd c_value, complexd dc_dgamma, double eps_rank = 1e-10);

// Ideal (lossless) ECS closed form 2 N t^2 [1 + W(N e^{-N})] + N^2 t^2.
double qfi_ideal(double n_avg, double t);

// Long-time bound-state closed form
//   2 t^2 Z^4 N + 2 t^2 Z^6 N W(N e^{-N}) + e^{-|a|^2 (1 - Z^2)} t^2 Z^6 N^2.
// alpha and n_avg must agree through n_of_alpha.
double qfi_asymptotic(double n_avg, double alpha, double t, double z);

// Weak-coupling result 2 N t^2 e^{-2 kappa t} and its optimum
// (t = 1/kappa, min dgamma = e kappa / sqrt(2N)).
double qfi_markovian(double n_avg, double t, double kappa);
struct MarkovOptimum {
    double t_opt;
    double min_delta_gamma;
};
MarkovOptimum markovian_optimum(double n_avg, double kappa);

// Cramer-Rao precision 1/sqrt(mu F); infinite when F = 0.
double precision(double f_q, int mu = 1);

// Time-scaled per-run benchmark curves.
struct BenchmarkLimits {
    double snl;      // 1 / (sqrt(N) t)
    double weak_hl;  // 1 / (N t)
    double zeno;     // 1 / (N^{3/4} t)
};
BenchmarkLimits benchmark_limits(double n_avg, double t);

// Precision against a sweep axis (time or photon number), with benchmarks.
struct PrecisionSeries {
    std::vector<double> axis;
    std::vector<double> f_q;
    std::vector<double> delta_gamma;
    std::vector<double> snl;
    std::vector<double> weak_hl;
    int mu{1};
};

} // namespace nmqfi
