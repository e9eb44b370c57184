#ifndef PERIODS_ODE_HPP
#define PERIODS_ODE_HPP

#include <optional>
#include <string>
#include <vector>

#include "periods/context.hpp"
#include "periods/logseries.hpp"
#include "periods/rational.hpp"

namespace periods {

// Linear ODE with exact integer-polynomial coefficients:
//   coeffs[0] f^(d) + coeffs[1] f^(d-1) + ... + coeffs[d] f = 0.
// Invariants: coeffs[0] != 0 and the coefficients are collectively
// content-normalized with positive leading coefficient on coeffs[0].
struct LinearODE {
    std::vector<RatPoly> coeffs;

    long order() const { return static_cast<long>(coeffs.size()) - 1; }
    const RatPoly& leading() const { return coeffs.front(); }

    void normalize_content();
    bool is_fuchsian() const;

    std::string json() const;
    static LinearODE from_json(const std::string& text);

    friend bool operator==(const LinearODE& a, const LinearODE& b) { return a.coeffs == b.coeffs; }
};

// Minimal annihilating ODE of an exact-rational seed series. Searches orders
// ascending, degrees ascending (coarse schedule, then exact descent), solves
// the linear systems modulo word-size primes, reconstructs the kernel vector
// by CRT + rational reconstruction, and verifies the result exactly before
// returning. Throws NoODEFound when the bounds are exhausted.
LinearODE find_min_ode(const RatSeries& seed, long max_order, long max_deg_start = 10,
                       long max_deg_limit = 60);

// Exact indicial polynomial at a rational point (regular or regular
// singular); the symbol is the exponent rho.
RatPoly indicial_polynomial(const LinearODE& ode, const Rat& z0);

// Order-(d+1) equation satisfied by every primitive of every solution.
LinearODE antiderivative_ode(const LinearODE& ode);

// An expansion point of an ODE: the numeric center plus its exact rational
// value when one exists (exactness buys an exact indicial polynomial).
struct ExpansionPoint {
    Complex z;
    std::optional<Rat> exact;
};

// Full basis of regular solutions at a regular singular (or regular) point,
// one LogSeries per solution, built by the Frobenius construction with the
// c0(rho) = prod f0(rho+k) normalization and per-class deduplication.
std::vector<LogSeries> frobenius_basis(const LinearODE& ode, const ExpansionPoint& at,
                                       const PrecisionContext& ctx);

// Basis with unit-triangular jets f_j^(k)(z0) = delta_jk (k <= j) at an
// ordinary point.
std::vector<LogSeries> holomorphic_basis(const LinearODE& ode, const ExpansionPoint& at,
                                         const PrecisionContext& ctx);

// Apply the operator to a candidate solution around `at`; the residual series
// of a true solution is ~0 through length() - order terms.
LogSeries apply_ode(const LinearODE& ode, const LogSeries& f, const ExpansionPoint& at,
                    const PrecisionContext& ctx);

// Exact-rational holomorphic solution at a rational ordinary point with the
// given initial jet (test oracle; mirrors holomorphic_basis over Q).
RatSeries exact_holomorphic_series(const LinearODE& ode, const Rat& z0,
                                   const std::vector<Rat>& jet, size_t len);

// Distinct complex roots of an exact polynomial (of its squarefree part),
// Durand-Kerner at the given precision. Multiplicities recovered exactly.
struct PolyRoot {
    Complex z;
    long multiplicity;
};
std::vector<PolyRoot> complex_roots(const RatPoly& p, mpfr_prec_t prec);

// Rational roots (with multiplicities) of an exact polynomial, found by
// rounding high-precision roots and verifying exactly.
std::vector<std::pair<Rat, long>> rational_roots(const RatPoly& p, long max_den = 64);

} // namespace periods

#endif
