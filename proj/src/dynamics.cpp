#include "nmqfi/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace nmqfi {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[8] = {
    -0.9602898564975362316835609, -0.7966664774136267395915539,
    -0.5255324099163289858177390, -0.1834346424956498049394761,
    0.1834346424956498049394761,  0.5255324099163289858177390,
    0.7966664774136267395915539,  0.9602898564975362316835609};
constexpr double kGlWeight[8] = {
    0.1012285362903762591525314, 0.2223810344533744705443560,
    0.3137066458778872873379622, 0.3626837833783619829651504,
    0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};

// Rotated kernel F(u) = f(u) e^{i (omega0+gamma) u}.
complexd rotated_kernel(const SpectralDensity& sd, double carrier, double u) {
    const complexd base(1.0, sd.omega_c * u);
    const complexd phase = std::exp(complexd(0.0, carrier * u));
    const double amp = sd.integral_j();
    if (sd.s == 1.0) return amp * phase / (base * base);
    return amp * phase * std::exp(-(sd.s + 1.0) * std::log(base));
}

// Panel moments A_k = ∫ F (u1-u)/dt du and B_k = ∫ F (u-u0)/dt du over
// [u0, u1], by composite Gauss-Legendre subdivided against the kernel's
// curvature scale (1 + wc u)/wc near the panel start.
struct PanelMoments {
    complexd a, b;
};

PanelMoments panel_moments(const SpectralDensity& sd, double carrier, double u0, double dt) {
    const double u1 = u0 + dt;
    const double curvature_panels = 6.0 * dt * sd.omega_c / (1.0 + sd.omega_c * u0);
    const int n_sub = std::clamp(static_cast<int>(std::ceil(curvature_panels)), 1, 64);
    PanelMoments m{complexd(0.0, 0.0), complexd(0.0, 0.0)};
    for (int j = 0; j < n_sub; ++j) {
        const double a = u0 + dt * j / n_sub;
        const double b = u0 + dt * (j + 1) / n_sub;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (int q = 0; q < 8; ++q) {
            const double u = mid + half * kGlNode[q];
            const complexd fu = rotated_kernel(sd, carrier, u) * (kGlWeight[q] * half / dt);
            m.a += fu * (u1 - u);
            m.b += fu * (u - u0);
        }
    }
    return m;
}

// Split-complex storage so the history sum vectorizes.
struct SoA {
    std::vector<double> re, im;
    void push(complexd z) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    void set(std::size_t i, complexd z) {
        re[i] = z.real();
        im[i] = z.imag();
    }
    complexd get(std::size_t i) const { return {re[i], im[i]}; }
    void resize(std::size_t n) {
        re.resize(n);
        im.resize(n);
    }
};

// sum_{m=1}^{n} w_m x_{n+1-m}, with w and x in split layout.
complexd history_sum(const SoA& w, const SoA& x, std::size_t n) {
    double sr = 0.0, si = 0.0;
    const double* wr = w.re.data() + 1;
    const double* wi = w.im.data() + 1;
    // x index runs n, n-1, ..., 1 as m runs 1..n; reverse x once would cost a
    // copy per step, so index x backwards through contiguous loads on w.
    const double* xr = x.re.data();
    const double* xi = x.im.data();
    for (std::size_t m = 0; m < n; ++m) {
        const double ar = wr[m];
        const double ai = wi[m];
        const double br = xr[n - m];
        const double bi = xi[n - m];
        sr += ar * br - ai * bi;
        si += ar * bi + ai * br;
    }
    return {sr, si};
}

struct KernelWeights {
    SoA w;                   // w_0 = A_0, w_m = B_{m-1} + A_m
    std::vector<complexd> b; // raw B_k, for the closing d_0 term
};

KernelWeights build_weights(const SpectralDensity& sd, double carrier, double dt,
                            std::size_t n_steps) {
    KernelWeights kw;
    kw.w.resize(n_steps + 1);
    kw.b.resize(n_steps);
    complexd prev_b(0.0, 0.0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const PanelMoments m = panel_moments(sd, carrier, k * dt, dt);
        kw.w.set(k, k == 0 ? m.a : prev_b + m.a);
        kw.b[k] = m.b;
        prev_b = m.b;
    }
    kw.w.set(n_steps, prev_b);  // only the B part exists for the last lag
    return kw;
}

std::size_t step_count(double t_end, double dt) {
    if (!(t_end > 0.0)) throw std::invalid_argument("solve_c: t_end must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("solve_c: dt must be > 0");
    const double n = t_end / dt;
    if (n > 1e7) throw std::invalid_argument("solve_c: t_end/dt exceeds 1e7 steps");
    // round up so the grid covers t_end even when it is not a multiple of dt
    return static_cast<std::size_t>(std::ceil(n - 1e-9));
}

} // namespace

namespace {

// Interpolate in the frame rotating at the carrier: the rotated samples vary
// on the kernel scale, not the carrier period, so linear interpolation stays
// accurate between grid points (and is exact in the decoupled limit).
complexd interpolate_rotated(const std::vector<double>& times, const std::vector<complexd>& values,
                             double carrier, double t, const char* what) {
    const double step = times[1] - times[0];
    if (t < 0.0 || t > times.back() + 1e-12 * step)
        throw std::out_of_range(std::string(what) + ": t outside the grid");
    const double x = std::clamp(t / step, 0.0, double(times.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(x), times.size() - 2);
    const double frac = x - double(i);
    const complexd a = values[i] * std::exp(complexd(0.0, carrier * times[i]));
    const complexd b = values[i + 1] * std::exp(complexd(0.0, carrier * times[i + 1]));
    return (a * (1.0 - frac) + b * frac) * std::exp(complexd(0.0, -carrier * t));
}

} // namespace

complexd AmplitudeTrajectory::c_at(double t) const {
    return interpolate_rotated(times, c, omega0 + gamma, t, "AmplitudeTrajectory::c_at");
}

complexd AmplitudeTrajectory::dc_at(double t) const {
    if (!has_sensitivity())
        throw std::logic_error("AmplitudeTrajectory::dc_at: sensitivity not solved");
    return interpolate_rotated(times, dc_dgamma, omega0 + gamma, t, "AmplitudeTrajectory::dc_at");
}

double default_time_step(const SpectralDensity& sd, const ProbeConfig& probe) {
    const double carrier = probe.carrier();
    const double kernel_rate = sd.eta * std::tgamma(sd.s + 1.0) * sd.omega_c;
    const double depth = std::max(0.0, sd.integral_j_over_omega() - carrier);
    const double rate = carrier + kernel_rate + depth;
    return 0.015 / rate;
}

AmplitudeTrajectory solve_c(const SpectralDensity& sd, const ProbeConfig& probe, double t_end,
                            double dt) {
    const std::size_t n_steps = step_count(t_end, dt);
    const double carrier = probe.carrier();

    AmplitudeTrajectory traj;
    traj.method = Method::exact;
    traj.s = sd.s;
    traj.eta = sd.eta;
    traj.omega_c = sd.omega_c;
    traj.omega0 = probe.omega0;
    traj.gamma = probe.gamma;
    traj.times.resize(n_steps + 1);
    traj.c.resize(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) traj.times[i] = i * dt;
    traj.c[0] = 1.0;

    if (sd.eta == 0.0) {
        for (std::size_t i = 1; i <= n_steps; ++i)
            traj.c[i] = std::exp(complexd(0.0, -carrier * traj.times[i]));
        return traj;
    }

    const KernelWeights kw = build_weights(sd, carrier, dt, n_steps);
    const complexd w0 = kw.w.get(0);

    SoA d;
    d.resize(n_steps + 1);
    d.set(0, 1.0);
    complexd conv_n(0.0, 0.0);  // (K*d)(t_n)
    for (std::size_t n = 0; n < n_steps; ++n) {
        const complexd hist = history_sum(kw.w, d, n) + kw.b[n] * d.get(0);
        const complexd dn = d.get(n);
        const complexd d_next = (dn - 0.5 * dt * (conv_n + hist)) / (1.0 + 0.5 * dt * w0);
        d.set(n + 1, d_next);
        conv_n = w0 * d_next + hist;
        if (std::norm(d_next) > (1.0 + 1e-6) * (1.0 + 1e-6))
            throw instability_error(
                "solve_c: |c| exceeded 1 + 1e-6 at t = " + std::to_string((n + 1) * dt) +
                "; reduce dt (try " + std::to_string(dt / 2.0) + ")");
    }
    for (std::size_t i = 0; i <= n_steps; ++i)
        traj.c[i] = d.get(i) * std::exp(complexd(0.0, -carrier * traj.times[i]));
    return traj;
}

AmplitudeTrajectory solve_sensitivity(const SpectralDensity& sd, const ProbeConfig& probe,
                                      const AmplitudeTrajectory& trajectory) {
    if (trajectory.s != sd.s || trajectory.eta != sd.eta || trajectory.omega_c != sd.omega_c ||
        trajectory.omega0 != probe.omega0 || trajectory.gamma != probe.gamma)
        throw std::invalid_argument("solve_sensitivity: parameter mismatch with trajectory");
    if (trajectory.times.size() < 2)
        throw std::invalid_argument("solve_sensitivity: trajectory grid too short");

    AmplitudeTrajectory traj = trajectory;
    const std::size_t n_steps = traj.times.size() - 1;
    const double dt = traj.dt();
    const double carrier = probe.carrier();
    traj.dc_dgamma.assign(n_steps + 1, complexd(0.0, 0.0));

    // rotated amplitude d_n recovered from the stored c
    SoA d;
    d.resize(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i)
        d.set(i, traj.c[i] * std::exp(complexd(0.0, carrier * traj.times[i])));

    if (sd.eta == 0.0) {
        // s' = -i d with d = 1: s(t) = -i t exactly under the trapezoid rule
        for (std::size_t i = 0; i <= n_steps; ++i)
            traj.dc_dgamma[i] = complexd(0.0, -traj.times[i]) *
                                std::exp(complexd(0.0, -carrier * traj.times[i]));
        return traj;
    }

    const KernelWeights kw = build_weights(sd, carrier, dt, n_steps);
    const complexd w0 = kw.w.get(0);

    SoA sens;
    sens.resize(n_steps + 1);
    sens.set(0, 0.0);
    complexd conv_n(0.0, 0.0);
    const complexd mi(0.0, -1.0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        const complexd hist = history_sum(kw.w, sens, n);  // s_0 = 0, no closing term
        const complexd rhs = sens.get(n) +
                             0.5 * dt * (mi * d.get(n) - conv_n + mi * d.get(n + 1) - hist);
        const complexd s_next = rhs / (1.0 + 0.5 * dt * w0);
        sens.set(n + 1, s_next);
        conv_n = w0 * s_next + hist;
    }
    for (std::size_t i = 0; i <= n_steps; ++i)
        traj.dc_dgamma[i] = sens.get(i) * std::exp(complexd(0.0, -carrier * traj.times[i]));
    return traj;
}

AmplitudeTrajectory solve_with_sensitivity(const SpectralDensity& sd, const ProbeConfig& probe,
                                           double t_end, double dt) {
    return solve_sensitivity(sd, probe, solve_c(sd, probe, t_end, dt));
}

complexd markovian_c(const MarkovRates& rates, const ProbeConfig& probe, double t) {
    if (t < 0.0) throw std::domain_error("markovian_c: t must be >= 0");
    return std::exp(complexd(-rates.kappa * t, -(probe.carrier() + rates.delta) * t));
}

complexd markovian_c(const SpectralDensity& sd, const ProbeConfig& probe, double t) {
    return markovian_c(markov_rates(sd, probe), probe, t);
}

complexd asymptotic_c(const BoundState& bs, double t) {
    return bs.z * std::exp(complexd(0.0, -bs.varpi_b * t));
}

double transmission(complexd c_value) {
    const double mod2 = std::norm(c_value);
    if (mod2 > (1.0 + 1e-9) * (1.0 + 1e-9))
        throw std::domain_error("transmission: |c| must not exceed 1 + 1e-9");
    return 0.5 * (1.0 + mod2);
}

} // namespace nmqfi
