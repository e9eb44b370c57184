#ifndef PERIODS_SURFACE_HPP
#define PERIODS_SURFACE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "periods/context.hpp"
#include "periods/ode.hpp"
#include "periods/rational.hpp"
#include "periods/series.hpp"

namespace periods {

// Real algebraic number: exact minimal polynomial plus a double seed locating
// the intended root; refined by Newton at the requested precision.
struct AlgebraicReal {
    RatPoly minpoly;
    double approx = 0;

    Real value(mpfr_prec_t prec) const;
};

struct InfinityTag {
    friend bool operator==(InfinityTag, InfinityTag) { return true; }
};

// Point of P^1 with exact provenance where available.
struct PointP1 {
    std::variant<Rat, AlgebraicReal, InfinityTag> v;

    static PointP1 rational(const Rat& q) { return {q}; }
    static PointP1 algebraic(AlgebraicReal a) { return {std::move(a)}; }
    static PointP1 infinity() { return {InfinityTag{}}; }

    bool is_infinity() const { return std::holds_alternative<InfinityTag>(v); }
    const Rat* exact_rational() const { return std::get_if<Rat>(&v); }
    Real value(mpfr_prec_t prec) const; // finite points only
    double approx() const;              // finite points only
    std::string str() const;
};

struct SingularFiber {
    PointP1 location;
    long kodaira_n = 0;
};

// Ordered roots of 4x^3 - g2(z) x - g3(z) at a real point: ascending when all
// real, ascending imaginary part otherwise.
struct RootTriple {
    Complex r1, r2, r3;
    bool all_real = false;

    const Complex& at(int u) const { return u == 1 ? r1 : (u == 2 ? r2 : r3); }
};

// Relatively minimal Weierstrass model over P^1 with semistable fibers:
// y^2 = 4x^3 - g2 x - g3 with g2 in O(4k), g3 in O(6k).
struct WeierstrassSurface {
    RatForm g2, g3;
    long k = 1;
    std::vector<SingularFiber> fibers; // filled by classify()

    WeierstrassSurface() = default;
    WeierstrassSurface(RatPoly g2poly, RatPoly g3poly, long twist);

    // The same surface seen from the w-chart (z w = -1): g(-1, w).
    WeierstrassSurface chart_w() const;

    RatForm discriminant() const; // g2^3 - 27 g3^2, degree 12k

    // g2^3 / Delta at a numeric point; nullopt encodes the pole (value oo).
    std::optional<Complex> j_invariant(const Complex& z) const;

    std::vector<SingularFiber> classify_fibers() const;
    void classify() { fibers = classify_fibers(); }
};

WeierstrassSurface mobius_pullback(const WeierstrassSurface& s, const Rat& a, const Rat& b,
                                   const Rat& c, const Rat& d);

RootTriple ordered_roots(const WeierstrassSurface& s, const Real& z);

// 2 * integral of dx / sqrt(4x^3 - g2 x - g3) over the straight segment from
// root u to root u+1 (u in {1,2}), fixed square-root branch along the
// segment; defined up to sign. quad_digits sets the tanh-sinh target.
Complex elliptic_period(const WeierstrassSurface& s, const Real& z, int u, long quad_digits);

// Exact Taylor series at a common singular point (center must be rational,
// both fibers semistable there) of the normalized product seed
//   (g2^1/g2^1(c))^(-1/4) (g2^2/g2^2(c))^(-1/4) 2F1(1/J1) 2F1(1/J2),
// scaled so the constant term is 1. The omitted scalar is irrational and
// drops out of everything downstream.
RatSeries seed_series_exact(const WeierstrassSurface& s1, const WeierstrassSurface& s2,
                            const Rat& center, size_t len);

// The same series wrapped as an anchored PowerSeries (public surface op).
PowerSeries seed_period_series(const WeierstrassSurface& s1, const WeierstrassSurface& s2,
                               const Rat& center, const PrecisionContext& ctx);

} // namespace periods

#endif
