// oracles.hpp — independent reference implementations used only by tests:
// quadrature/finite-difference cross-checks, a Newton Lambert-W iteration, a
// golden-section minimizer, and a modal solver for the discretized-bath
// single-excitation model.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "nmqfi/boundstate.hpp"
#include "nmqfi/quadrature.hpp"
#include "nmqfi/spectral.hpp"

namespace oracle {

using nmqfi::complexd;

// Newton iteration on w e^w = x (independent of the production Halley path).
inline double newton_lambert_w(double x) {
    if (x < 0.0) throw std::domain_error("newton_lambert_w: x >= 0 required");
    if (x == 0.0) return 0.0;
    double w = std::log1p(x);
    for (int i = 0; i < 200; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double step = f / (ew * (1.0 + w));
        w -= step;
        if (std::abs(step) < 1e-17 * (std::abs(w) + 1e-300)) break;
    }
    return w;
}

// Golden-section maximizer on [a, b] for unimodal f.
inline double golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 double xtol = 1e-10) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Principal value P ∫ J(w)/(w - c) dw by symmetric exclusion windows with
// Richardson extrapolation of the window width to zero.
inline double principal_value_window(const nmqfi::SpectralDensity& sd, double carrier) {
    const double w_max = std::max(50.0 * sd.omega_c, 50.0 * carrier);
    auto with_window = [&](double delta) {
        const double left = nmqfi::quad::integrate(
            [&](double w) { return sd.j(w) / (w - carrier); }, 0.0, carrier - delta, 1e-12);
        const double right = nmqfi::quad::integrate(
            [&](double w) { return sd.j(w) / (w - carrier); }, carrier + delta, w_max, 1e-12);
        return left + right;
    };
    const double d1 = 0.02 * carrier;
    const double coarse = with_window(d1);
    const double fine = with_window(0.5 * d1);
    return 2.0 * fine - coarse;  // cancels the O(delta) window bias
}

// Modal solution of the probe + discretized-bath single-excitation model.
// Eigenvalues come from the arrowhead secular equation
//   phi(E) = E - carrier - sum_k g_k^2 / (E - w_k) = 0
// (one root per pole interval plus one below and one above the band), and the
// probe amplitude is c(t) = sum_j |<probe|E_j>|^2 e^{-i E_j t}.
struct ModalBath {
    std::vector<double> energies;
    std::vector<double> weights;  // |<probe|E_j>|^2

    complexd amplitude(double t) const {
        complexd acc(0.0, 0.0);
        for (std::size_t j = 0; j < energies.size(); ++j)
            acc += weights[j] * std::exp(complexd(0.0, -energies[j] * t));
        return acc;
    }
};

inline ModalBath solve_modal_bath(const nmqfi::DiscretizedBath& bath, double carrier) {
    const std::size_t m = bath.omega.size();
    auto phi = [&](double e) {
        double acc = e - carrier;
        for (std::size_t k = 0; k < m; ++k)
            acc -= bath.g[k] * bath.g[k] / (e - bath.omega[k]);
        return acc;
    };
    auto bisect = [&](double lo, double hi) {
        // phi is increasing between poles: phi(lo+) = -inf, phi(hi-) = +inf
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (phi(mid) < 0.0) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    double g2_total = 0.0;
    for (std::size_t k = 0; k < m; ++k) g2_total += bath.g[k] * bath.g[k];

    ModalBath modal;
    modal.energies.reserve(m + 1);
    const double pad = 1e-9 * (bath.omega.back() - bath.omega.front());
    double deep = bath.omega.front() - 1.0;
    while (phi(deep) > 0.0) deep = 2.0 * deep - carrier - 1.0;
    modal.energies.push_back(bisect(deep, bath.omega.front() - pad));
    for (std::size_t k = 0; k + 1 < m; ++k)
        modal.energies.push_back(bisect(bath.omega[k] + pad, bath.omega[k + 1] - pad));
    double high = bath.omega.back() + carrier + g2_total + 1.0;
    while (phi(high) < 0.0) high *= 2.0;
    modal.energies.push_back(bisect(bath.omega.back() + pad, high));

    modal.weights.reserve(m + 1);
    for (const double e : modal.energies) {
        double denom = 1.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double d = e - bath.omega[k];
            denom += bath.g[k] * bath.g[k] / (d * d);
        }
        modal.weights.push_back(1.0 / denom);
    }
    return modal;
}

} // namespace oracle
