// special.hpp — scalar special functions used by the bath integrals and QFI closed forms

#pragma once

namespace nmqfi {

// Exponential integral E1(x) for x > 0. Power series below the crossover,
// modified Lentz continued fraction above it.
double expint_e1(double x);

// exp(x) * E1(x), stable for large x where E1 underflows.
double expint_e1_scaled(double x);

// Principal-branch Lambert W on x >= 0, solved to ~1e-15 relative by Halley
// iteration started from log1p(x).
double lambert_w(double x);

} // namespace nmqfi
