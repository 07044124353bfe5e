// quadrature.hpp — adaptive Gauss-Kronrod integration (thin wrapper over boost.math)

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nmqfi::quad {

// Adaptive (G7,K15) integration of f over [a, b]. Works for real- and
// complex-valued integrands; tol is the relative error target.
template <class F>
auto integrate(F&& f, double a, double b, double tol = 1e-11, unsigned max_depth = 15) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, tol);
}

} // namespace nmqfi::quad
