#include "nmqfi/boundstate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>

#include "nmqfi/roots.hpp"

namespace nmqfi {

double level_shift_function(const SpectralDensity& sd, const ProbeConfig& probe, double varpi) {
    return probe.carrier() - dispersion_integral(sd, varpi);
}

double existence_margin(const SpectralDensity& sd, const ProbeConfig& probe) {
    return probe.carrier() - sd.integral_j_over_omega();
}

bool bound_state_exists(const SpectralDensity& sd, const ProbeConfig& probe) {
    return existence_margin(sd, probe) <= 0.0;
}

BoundState find_bound_state(const SpectralDensity& sd, const ProbeConfig& probe, double tol) {
    const double y0 = existence_margin(sd, probe);
    if (y0 > 0.0)
        throw no_bound_state_error(
            "find_bound_state: no bound state (omega0 + gamma - eta*omega_c*Gamma(s) = " +
            std::to_string(y0) + " > 0)");

    auto g = [&](double varpi) { return level_shift_function(sd, probe, varpi) - varpi; };

    // g is strictly decreasing: g -> omega0+gamma-varpi > 0 as varpi -> -inf and
    // g(0-) = y(0) <= 0. Shrink the upper end below the (tiny) threshold margin.
    double hi = -std::min(1e-12, std::abs(y0) / 2.0);
    if (hi == 0.0) hi = -1e-300;
    double lo = -probe.omega0;
    while (g(lo) <= 0.0) {
        lo *= 2.0;
        if (lo < -1e12) throw no_bound_state_error("find_bound_state: bracket search failed");
    }

    const double varpi_b =
        find_root_brent(g, lo, hi, 1e-15 * std::max(1.0, std::abs(lo)));

    BoundState bs;
    bs.varpi_b = varpi_b;
    bs.residual = std::abs(g(varpi_b));
    if (bs.residual >= tol * probe.omega0)
        throw std::runtime_error("find_bound_state: residual " + std::to_string(bs.residual) +
                                 " above tolerance");
    bs.z = 1.0 / (1.0 + residue_integral(sd, varpi_b));
    return bs;
}

double ohmic_z_closed_form(const SpectralDensity& sd, const ProbeConfig& probe, double varpi_b) {
    if (sd.s != 1.0)
        throw std::invalid_argument("ohmic_z_closed_form: defined for s = 1 only");
    if (varpi_b >= 0.0) throw std::domain_error("ohmic_z_closed_form: varpi_b must be < 0");
    const double carrier = probe.carrier();
    return 1.0 / ((carrier - sd.eta * sd.omega_c) / varpi_b + (varpi_b - carrier) / sd.omega_c);
}

double dz_dgamma_check(const SpectralDensity& sd, const ProbeConfig& probe,
                       const BoundState& bs, double delta) {
    (void)bs;
    const ProbeConfig plus(probe.omega0, probe.gamma + delta);
    const ProbeConfig minus(probe.omega0, probe.gamma - delta);
    if (!bound_state_exists(sd, plus) || !bound_state_exists(sd, minus))
        throw no_bound_state_error("dz_dgamma_check: bound state lost inside the stencil");
    const double vp = find_bound_state(sd, plus).varpi_b;
    const double vm = find_bound_state(sd, minus).varpi_b;
    return (vp - vm) / (2.0 * delta);
}

DiscretizedBath discretize_bath(const SpectralDensity& sd, int m, double band_lo, double band_hi) {
    if (m < 2) throw std::invalid_argument("discretize_bath: need at least 2 modes");
    if (!(band_lo > 0.0) || !(band_hi > band_lo))
        throw std::invalid_argument("discretize_bath: band must satisfy 0 < lo < hi");
    DiscretizedBath bath;
    bath.omega.resize(m);
    bath.g.resize(m);
    const double dw = (band_hi - band_lo) / m;
    for (int k = 0; k < m; ++k) {
        const double w = band_lo + (k + 0.5) * dw;  // midpoint rule
        bath.omega[k] = w;
        bath.g[k] = std::sqrt(sd.j(w) * dw);
    }
    return bath;
}

SpectrumSlice discretized_spectrum(const SpectralDensity& sd, const ProbeConfig& probe, int m) {
    return discretized_spectrum(sd, probe, m, 1e-4 * probe.omega0, 8.0 * sd.omega_c);
}

SpectrumSlice discretized_spectrum(const SpectralDensity& sd, const ProbeConfig& probe, int m,
                                   double band_lo, double band_hi) {
    const DiscretizedBath bath = discretize_bath(sd, m, band_lo, band_hi);

    // Arrowhead single-excitation Hamiltonian: probe on the tip, bath modes on
    // the diagonal, couplings g_k in the first row/column.
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m + 1);
    h(0, 0) = probe.carrier();
    for (int k = 0; k < m; ++k) {
        h(0, k + 1) = bath.g[k];
        h(k + 1, 0) = bath.g[k];
        h(k + 1, k + 1) = bath.omega[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);

    SpectrumSlice slice;
    slice.omega_c = sd.omega_c;
    slice.discretization_count = m;
    slice.eigenfrequencies.assign(solver.eigenvalues().data(),
                                  solver.eigenvalues().data() + m + 1);
    return slice;
}

std::string spectrum_to_csv(const SpectrumSlice& slice) {
    std::string out = "index,eigenfrequency\n";
    char buf[64];
    for (std::size_t i = 0; i < slice.eigenfrequencies.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, slice.eigenfrequencies[i]);
        out += buf;
    }
    return out;
}

} // namespace nmqfi
