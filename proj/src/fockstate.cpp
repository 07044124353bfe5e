#include "nmqfi/fockstate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nmqfi/roots.hpp"

namespace nmqfi {

namespace {

struct EcsPieces {
    FockVector survivor;   // |alpha e^{-i phi}, 0>
    FockVector decayed;    // |0, c alpha>
    double norm2;          // N_alpha^2
    double coherence;      // exp[-(A/2)(1 - |c|^2)]
};

EcsPieces assemble_branches(double alpha, complexd c_value, double omega0_t, int cutoff) {
    if (!(alpha > 0.0)) throw std::invalid_argument("rho_of_t: alpha must be > 0");
    if (std::abs(c_value) > 1.0 + 1e-9)
        throw std::domain_error("rho_of_t: |c| must not exceed 1 + 1e-9");
    const double a2 = alpha * alpha;
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(cutoff + 1);
    vac(0) = 1.0;
    const complexd alpha1 = alpha * std::exp(complexd(0.0, -omega0_t));
    EcsPieces p;
    p.survivor = two_mode_product(coherent_vector(alpha1, cutoff), vac);
    p.decayed = two_mode_product(vac, coherent_vector(c_value * alpha, cutoff));
    p.norm2 = 1.0 / (2.0 * (1.0 + std::exp(-a2)));
    p.coherence = std::exp(-0.5 * a2 * (1.0 - std::norm(c_value)));
    return p;
}

} // namespace

int required_cutoff(double abs_alpha) {
    return static_cast<int>(std::ceil(abs_alpha * abs_alpha + 10.0 * abs_alpha + 20.0));
}

Eigen::VectorXcd coherent_vector(complexd alpha, int cutoff) {
    const double a = std::abs(alpha);
    const int needed = required_cutoff(a);
    if (cutoff < needed)
        throw std::invalid_argument("coherent_vector: cutoff " + std::to_string(cutoff) +
                                    " too small for |alpha| = " + std::to_string(a) +
                                    " (need >= " + std::to_string(needed) + ")");
    Eigen::VectorXcd v(cutoff + 1);
    v(0) = std::exp(-0.5 * a * a);
    for (int n = 1; n <= cutoff; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
    return v;
}

FockVector two_mode_product(const Eigen::VectorXcd& mode1, const Eigen::VectorXcd& mode2) {
    if (mode1.size() != mode2.size())
        throw std::invalid_argument("two_mode_product: mode dimensions differ");
    const int dim = static_cast<int>(mode1.size());
    FockVector out;
    out.cutoff = dim - 1;
    out.amplitudes.resize(dim * dim);
    for (int n1 = 0; n1 < dim; ++n1)
        for (int n2 = 0; n2 < dim; ++n2) out.amplitudes(n1 * dim + n2) = mode1(n1) * mode2(n2);
    return out;
}

FockVector apply_mode2_creation(const FockVector& v) {
    const int dim = v.dim();
    FockVector out;
    out.cutoff = v.cutoff;
    out.amplitudes = Eigen::VectorXcd::Zero(dim * dim);
    for (int n1 = 0; n1 < dim; ++n1)
        for (int n2 = 1; n2 < dim; ++n2)
            out.amplitudes(n1 * dim + n2) = std::sqrt(double(n2)) * v.amplitudes(n1 * dim + n2 - 1);
    return out;
}

FockVector ecs_input(double alpha, int cutoff) {
    if (!(alpha > 0.0)) throw std::invalid_argument("ecs_input: alpha must be > 0");
    const EcsPieces p = assemble_branches(alpha, complexd(1.0, 0.0), 0.0, cutoff);
    FockVector out;
    out.cutoff = cutoff;
    out.amplitudes = std::sqrt(p.norm2) * (p.survivor.amplitudes + p.decayed.amplitudes);
    return out;
}

double n_of_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("n_of_alpha: alpha must be > 0");
    const double a2 = alpha * alpha;
    return a2 / (1.0 + std::exp(-a2));
}

double alpha_of_n(double n_avg) {
    if (!(n_avg > 0.0)) throw std::invalid_argument("alpha_of_n: N must be > 0");
    // N(alpha) is strictly increasing; N <= |alpha|^2 <= 2N
    const double lo = std::sqrt(n_avg / 2.0) * 0.99;
    const double hi = std::sqrt(n_avg) + 1.0;
    return find_root_brent([&](double a) { return n_of_alpha(a) - n_avg; }, lo, hi, 1e-14);
}

TwoModeDensity rho_of_t(double alpha, complexd c_value, double omega0_t, int cutoff) {
    const EcsPieces p = assemble_branches(alpha, c_value, omega0_t, cutoff);
    const Eigen::VectorXcd& u = p.survivor.amplitudes;
    const Eigen::VectorXcd& v = p.decayed.amplitudes;

    TwoModeDensity rho;
    rho.cutoff = cutoff;
    rho.matrix = Eigen::MatrixXcd::Zero(u.size(), u.size());
    rho.matrix.noalias() += p.norm2 * u * u.adjoint();
    rho.matrix.noalias() += p.norm2 * v * v.adjoint();
    rho.matrix.noalias() += (p.norm2 * p.coherence) * u * v.adjoint();
    rho.matrix.noalias() += (p.norm2 * p.coherence) * v * u.adjoint();

    const double trace_dev = std::abs(rho.matrix.trace().real() - 1.0) +
                             std::abs(rho.matrix.trace().imag());
    if (trace_dev > 1e-6)
        throw std::runtime_error("rho_of_t: trace deviates from 1 by " +
                                 std::to_string(trace_dev) +
                                 " (cutoff or coherence-factor problem)");
    return rho;
}

Eigen::MatrixXcd rho_derivative(double alpha, complexd c_value, complexd dc_dgamma,
                                double omega0_t, int cutoff) {
    const EcsPieces p = assemble_branches(alpha, c_value, omega0_t, cutoff);
    const Eigen::VectorXcd& u = p.survivor.amplitudes;
    const Eigen::VectorXcd& v = p.decayed.amplitudes;
    const double a2 = alpha * alpha;

    // d|c|^2/dgamma and the derivative of the decayed branch:
    //   d|0, c a> = a dc a2^dag |0, c a> - (A/2) d|c|^2 |0, c a>
    const double dmod2 = 2.0 * std::real(std::conj(c_value) * dc_dgamma);
    const FockVector raised = apply_mode2_creation(p.decayed);
    const Eigen::VectorXcd w =
        alpha * dc_dgamma * raised.amplitudes - 0.5 * a2 * dmod2 * v;
    const double dcoherence = p.coherence * 0.5 * a2 * dmod2;

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(u.size(), u.size());
    out.noalias() += (p.norm2 * dcoherence) * u * v.adjoint();
    out.noalias() += (p.norm2 * dcoherence) * v * u.adjoint();
    out.noalias() += (p.norm2 * p.coherence) * u * w.adjoint();
    out.noalias() += (p.norm2 * p.coherence) * w * u.adjoint();
    out.noalias() += p.norm2 * w * v.adjoint();
    out.noalias() += p.norm2 * v * w.adjoint();
    return out;
}

TwoModeDensity rho_with_derivative(double alpha, complexd c_value, complexd dc_dgamma,
                                   double omega0_t, int cutoff) {
    TwoModeDensity rho = rho_of_t(alpha, c_value, omega0_t, cutoff);
    rho.d_gamma = rho_derivative(alpha, c_value, dc_dgamma, omega0_t, cutoff);
    return rho;
}

double expected_photon_number(const TwoModeDensity& rho) {
    const int dim = rho.cutoff + 1;
    double total = 0.0;
    for (int n1 = 0; n1 < dim; ++n1)
        for (int n2 = 0; n2 < dim; ++n2)
            total += (n1 + n2) * rho.matrix(n1 * dim + n2, n1 * dim + n2).real();
    return total;
}

} // namespace nmqfi
