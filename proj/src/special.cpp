#include "nmqfi/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nmqfi {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209;

// Ascending series E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!).
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -x / static_cast<double>(k);
        const double inc = -term / static_cast<double>(k);
        sum += inc;
        if (std::abs(inc) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
}

// Continued fraction for exp(x) E1(x), x >= 1 (modified Lentz).
double e1_scaled_cf(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = a * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h;
}

} // namespace

double expint_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1: argument must be positive");
    if (x < 1.0) return e1_series(x);
    return std::exp(-x) * e1_scaled_cf(x);
}

double expint_e1_scaled(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1_scaled: argument must be positive");
    if (x < 1.0) return std::exp(x) * e1_series(x);
    return e1_scaled_cf(x);
}

double lambert_w(double x) {
    if (x < 0.0) throw std::domain_error("lambert_w: negative argument (principal branch on x >= 0)");
    if (x == 0.0) return 0.0;
    double w = std::log1p(x);
    if (w == 0.0) w = x;  // tiny x
    for (int it = 0; it < 60; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        const double dw = f / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-16 * (std::abs(w) + 1e-300)) break;
    }
    return w;
}

} // namespace nmqfi
