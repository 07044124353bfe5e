#include "nmqfi/qfi.hpp"

#include <cmath>
#include <random>

namespace nmqfi {

namespace {

// Pair sum of the mixed-state formula over an eigensystem (lambda, M = V' rho' V).
double pair_sum(const Eigen::VectorXd& lambda, const Eigen::MatrixXcd& m, double eps_rank) {
    const Eigen::Index n = lambda.size();
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double denom = lambda(i) + lambda(j);
            if (denom > eps_rank) f += 2.0 * std::norm(m(i, j)) / denom;
        }
    }
    return f;
}

void check_positivity(const Eigen::VectorXd& lambda) {
    if (lambda.minCoeff() < -1e-8)
        throw invalid_state_error("qfi_mixed: density matrix has eigenvalue " +
                                  std::to_string(lambda.minCoeff()) + " below -1e-8");
}

double qfi_mixed_dense(const TwoModeDensity& rho, double eps_rank) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix);
    check_positivity(es.eigenvalues());
    const Eigen::MatrixXcd m = es.eigenvectors().adjoint() * rho.d_gamma * es.eigenvectors();
    return pair_sum(es.eigenvalues(), m, eps_rank);
}

// Orthonormal basis capturing range(rho) and range(rho'), found by randomized
// probing with a fixed seed and certified against residual tolerance.
double qfi_mixed_subspace(const TwoModeDensity& rho, double eps_rank) {
    const Eigen::Index n = rho.matrix.rows();
    const double scale = rho.matrix.norm() + rho.d_gamma.norm();
    std::mt19937 rng(0x5eedu);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_block = [&](Eigen::Index cols) {
        Eigen::MatrixXcd g(n, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < n; ++i) g(i, j) = complexd(gauss(rng), gauss(rng));
        return g;
    };

    for (int k = 8; k <= 128; k *= 2) {
        const Eigen::MatrixXcd g = random_block(k);
        Eigen::MatrixXcd probes(n, 2 * k);
        probes.leftCols(k).noalias() = rho.matrix * g;
        probes.rightCols(k).noalias() = rho.d_gamma * g;
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(probes);
        const Eigen::MatrixXcd q =
            qr.householderQ() * Eigen::MatrixXcd::Identity(n, std::min<Eigen::Index>(2 * k, n));

        // certification: both operators must map fresh probes into span(q)
        const Eigen::MatrixXcd fresh = random_block(4);
        const Eigen::MatrixXcd r1 = rho.matrix * fresh;
        const Eigen::MatrixXcd r2 = rho.d_gamma * fresh;
        const double res1 = (r1 - q * (q.adjoint() * r1)).norm();
        const double res2 = (r2 - q * (q.adjoint() * r2)).norm();
        const double probe_scale = r1.norm() + r2.norm() + scale * 1e-3;
        if (res1 + res2 < 1e-11 * probe_scale) {
            const Eigen::MatrixXcd rho_small = q.adjoint() * rho.matrix * q;
            const Eigen::MatrixXcd drho_small = q.adjoint() * rho.d_gamma * q;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_small);
            check_positivity(es.eigenvalues());
            const Eigen::MatrixXcd m = es.eigenvectors().adjoint() * drho_small * es.eigenvectors();
            return pair_sum(es.eigenvalues(), m, eps_rank);
        }
    }
    return qfi_mixed_dense(rho, eps_rank);  // dense fallback for high-rank input
}

} // namespace

double qfi_pure(const FockVector& psi, const FockVector& dpsi) {
    if (psi.cutoff != dpsi.cutoff)
        throw std::invalid_argument("qfi_pure: cutoff mismatch between psi and dpsi");
    const double nrm = psi.norm();
    if (std::abs(nrm - 1.0) > 1e-8)
        throw std::invalid_argument("qfi_pure: psi is not normalized (|psi| = " +
                                    std::to_string(nrm) + ")");
    const double dd = dpsi.amplitudes.squaredNorm();
    const complexd overlap = dpsi.amplitudes.dot(psi.amplitudes);
    const double f = 4.0 * (dd - std::norm(overlap));
    return f < 0.0 ? 0.0 : f;
}

double qfi_mixed(const TwoModeDensity& rho, double eps_rank, MixedMethod method) {
    if (!rho.has_d_gamma())
        throw std::invalid_argument("qfi_mixed: density matrix lacks d_gamma");
    if (method == MixedMethod::dense) return qfi_mixed_dense(rho, eps_rank);
    return qfi_mixed_subspace(rho, eps_rank);
}

double ecs_qfi(double alpha, complexd c_value, complexd dc_dgamma, double eps_rank) {
    if (!(alpha > 0.0)) throw std::invalid_argument("ecs_qfi: alpha must be > 0");
    const double a2 = alpha * alpha;
    const double mod2 = std::norm(c_value);
    if (mod2 > (1.0 + 1e-9) * (1.0 + 1e-9))
        throw std::domain_error("ecs_qfi: |c| must not exceed 1 + 1e-9");

    const double n2 = 1.0 / (2.0 * (1.0 + std::exp(-a2)));
    const double q = std::exp(-0.5 * a2 * (1.0 - mod2));
    const double g = std::exp(-0.5 * a2 * (1.0 + mod2));
    const double s2 = 1.0 - g * g;
    const double s = std::sqrt(s2);

    const complexd beta = c_value * alpha;
    const complexd dbeta = dc_dgamma * alpha;
    const double dmod2 = 2.0 * std::real(std::conj(c_value) * dc_dgamma);
    const double dq = q * 0.5 * a2 * dmod2;

    // Orthonormal frame e1, e2, e3 spanning {u, v, a2^dag v}; coefficients:
    //   u = (1, 0, 0), v = (g, s, 0), p = (0, conj(beta)/s, tau)
    const double tau2 = 1.0 + std::norm(beta) - std::norm(beta) / s2;
    const double tau = std::sqrt(std::max(tau2, 0.0));
    using V3 = Eigen::Vector3cd;
    const V3 u(1.0, 0.0, 0.0);
    const V3 v(g, s, 0.0);
    const V3 p(0.0, std::conj(beta) / s, tau);
    const V3 w = dbeta * p - complexd(0.5 * a2 * dmod2, 0.0) * v;

    Eigen::Matrix3cd rho3 = Eigen::Matrix3cd::Zero();
    rho3 += n2 * (u * u.adjoint() + v * v.adjoint());
    rho3 += (n2 * q) * (u * v.adjoint() + v * u.adjoint());

    Eigen::Matrix3cd drho3 = Eigen::Matrix3cd::Zero();
    drho3 += (n2 * dq) * (u * v.adjoint() + v * u.adjoint());
    drho3 += (n2 * q) * (u * w.adjoint() + w * u.adjoint());
    drho3 += n2 * (w * v.adjoint() + v * w.adjoint());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(rho3);
    const Eigen::Matrix3cd m = es.eigenvectors().adjoint() * drho3 * es.eigenvectors();
    double f = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double denom = es.eigenvalues()(i) + es.eigenvalues()(j);
            if (denom > eps_rank) f += 2.0 * std::norm(m(i, j)) / denom;
        }
    return f;
}

double qfi_ideal(double n_avg, double t) {
    if (n_avg < 0.0) throw std::domain_error("qfi_ideal: N must be >= 0");
    if (t < 0.0) throw std::domain_error("qfi_ideal: t must be >= 0");
    if (n_avg == 0.0) return 0.0;
    const double w = lambert_w(n_avg * std::exp(-n_avg));
    return 2.0 * n_avg * t * t * (1.0 + w) + n_avg * n_avg * t * t;
}

double qfi_asymptotic(double n_avg, double alpha, double t, double z) {
    if (!(z > 0.0) || z > 1.0 + 1e-12)
        throw std::domain_error("qfi_asymptotic: Z must lie in (0, 1]");
    const double n_check = n_of_alpha(alpha);
    if (std::abs(n_check - n_avg) > 1e-8 * std::max(1.0, n_avg))
        throw std::invalid_argument("qfi_asymptotic: alpha and N disagree (N(alpha) = " +
                                    std::to_string(n_check) + ")");
    const double w = lambert_w(n_avg * std::exp(-n_avg));
    const double z2 = z * z;
    const double z4 = z2 * z2;
    const double z6 = z4 * z2;
    const double t2 = t * t;
    return 2.0 * t2 * z4 * n_avg + 2.0 * t2 * z6 * n_avg * w +
           std::exp(-alpha * alpha * (1.0 - z2)) * t2 * z6 * n_avg * n_avg;
}

double qfi_markovian(double n_avg, double t, double kappa) {
    return 2.0 * n_avg * t * t * std::exp(-2.0 * kappa * t);
}

MarkovOptimum markovian_optimum(double n_avg, double kappa) {
    if (!(kappa > 0.0)) throw std::domain_error("markovian_optimum: kappa must be > 0");
    if (!(n_avg > 0.0)) throw std::domain_error("markovian_optimum: N must be > 0");
    return {1.0 / kappa, std::exp(1.0) * kappa / std::sqrt(2.0 * n_avg)};
}

double precision(double f_q, int mu) {
    if (mu < 1) throw std::invalid_argument("precision: mu must be a positive integer");
    if (f_q < 0.0) throw std::domain_error("precision: F_Q must be >= 0");
    if (f_q == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(double(mu) * f_q);
}

BenchmarkLimits benchmark_limits(double n_avg, double t) {
    if (!(n_avg > 0.0) || !(t > 0.0))
        throw std::domain_error("benchmark_limits: N and t must be > 0");
    return {1.0 / (std::sqrt(n_avg) * t), 1.0 / (n_avg * t),
            1.0 / (std::pow(n_avg, 0.75) * t)};
}

} // namespace nmqfi
