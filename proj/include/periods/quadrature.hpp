#ifndef PERIODS_QUADRATURE_HPP
#define PERIODS_QUADRATURE_HPP

#include <functional>

#include "periods/complex.hpp"

namespace periods {

// One tanh-sinh abscissa: s = tanh(pi/2 sinh(kh)) with 1 -+ s computed in a
// cancellation-free form so integrands with inverse-square-root endpoint
// singularities stay accurate.
struct QuadNode {
    Real s, one_minus_s, one_plus_s, w;
};

// Adaptive tanh-sinh quadrature of f over [-1, 1]; doubles the level until
// successive sums agree to 10^-target_digits (relative). Node tables are
// cached per (precision, level) and shared across threads.
Complex tanh_sinh(const std::function<Complex(const QuadNode&)>& f, long target_digits,
                  mpfr_prec_t prec);

} // namespace periods

#endif
