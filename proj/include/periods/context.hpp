#ifndef PERIODS_CONTEXT_HPP
#define PERIODS_CONTEXT_HPP

#include <mpfr.h>

#include "periods/errors.hpp"

namespace periods {

// Decimal working precision plus series truncation length. All numeric code
// takes the context explicitly; there is no global precision state, so values
// built under different contexts can coexist (and threads never race).
struct PrecisionContext {
    long digits = 200;       // decimal digits carried by every Real
    long series_order = 140; // truncation length of every series

    static constexpr long guard_digits = 20;

    PrecisionContext() = default;
    PrecisionContext(long d, long n) : digits(d), series_order(n) {
        if (d < 30 || n < 10)
            throw InvalidParameter("PrecisionContext requires digits >= 30, series_order >= 10");
    }

    // Internal mpfr precision: requested digits plus guard digits, in bits.
    mpfr_prec_t prec_bits() const {
        return static_cast<mpfr_prec_t>((digits + guard_digits) * 3.3219280948873626) + 64;
    }

    // Reference settings used throughout the numerical experiments.
    static PrecisionContext paper() { return PrecisionContext(1000, 350); }
    static PrecisionContext desk() { return PrecisionContext(200, 140); }
};

} // namespace periods

#endif
