#ifndef PERIODS_SERIES_HPP
#define PERIODS_SERIES_HPP

#include <vector>

#include "periods/complex.hpp"
#include "periods/context.hpp"
#include "periods/errors.hpp"
#include "periods/rational.hpp"

namespace periods {

// Plain coefficient vector over Complex, ascending powers. The workhorse of
// the Frobenius and continuation code; PowerSeries below adds the center and
// radius bookkeeping required at API boundaries.
class CSeries {
  public:
    std::vector<Complex> c;

    CSeries() = default;
    explicit CSeries(std::vector<Complex> v) : c(std::move(v)) {}
    static CSeries zero(size_t n, mpfr_prec_t prec) {
        return CSeries(std::vector<Complex>(n, Complex(prec)));
    }
    static CSeries from_rat(const RatSeries& s, mpfr_prec_t prec) {
        std::vector<Complex> v;
        v.reserve(s.c.size());
        for (const auto& q : s.c) v.emplace_back(q, prec);
        return CSeries(std::move(v));
    }

    size_t size() const { return c.size(); }
    bool empty() const { return c.empty(); }

    friend CSeries operator+(const CSeries& a, const CSeries& b) {
        size_t n = std::min(a.size(), b.size());
        CSeries r;
        r.c.reserve(n);
        for (size_t i = 0; i < n; i++) r.c.push_back(a.c[i] + b.c[i]);
        return r;
    }
    friend CSeries operator-(const CSeries& a, const CSeries& b) {
        size_t n = std::min(a.size(), b.size());
        CSeries r;
        r.c.reserve(n);
        for (size_t i = 0; i < n; i++) r.c.push_back(a.c[i] - b.c[i]);
        return r;
    }
    friend CSeries operator*(const CSeries& a, const CSeries& b) {
        size_t n = std::min(a.size(), b.size());
        if (n == 0) return {};
        mpfr_prec_t p = a.c[0].prec() > b.c[0].prec() ? a.c[0].prec() : b.c[0].prec();
        CSeries r = zero(n, p);
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; i + j < n; j++) r.c[i + j].add_mul(a.c[i], b.c[j]);
        return r;
    }
    friend CSeries operator*(const CSeries& a, const Complex& s) {
        CSeries r = a;
        for (auto& x : r.c) x *= s;
        return r;
    }

    CSeries derivative() const {
        CSeries r;
        if (c.size() <= 1) {
            if (c.size() == 1) r.c.push_back(Complex(c[0].prec()));
            return r;
        }
        r.c.reserve(c.size() - 1);
        for (size_t i = 1; i < c.size(); i++) r.c.push_back(c[i] * Real(static_cast<long>(i), c[i].prec()));
        return r;
    }
    CSeries integrate() const {
        CSeries r;
        r.c.reserve(c.size() + 1);
        r.c.push_back(Complex(c.empty() ? mpfr_prec_t(64) : c[0].prec()));
        for (size_t i = 0; i < c.size(); i++) r.c.push_back(c[i] / Real(static_cast<long>(i + 1), c[i].prec()));
        return r;
    }

    Complex eval(const Complex& w) const {
        Complex acc(w.prec());
        for (size_t i = c.size(); i-- > 0;) acc = acc * w + c[i];
        return acc;
    }
};

// Truncated Taylor series anchored at a center, with the distance to the
// nearest known singularity. Evaluation outside 0.75 of that radius is
// rejected (the continuation planner stays far inside anyway).
struct PowerSeries {
    Complex center;
    CSeries coeffs;
    Real radius_hint; // nonnegative; 0 means unknown

    static constexpr double eval_safety = 0.75;

    Complex eval(const Complex& z) const {
        Complex w = z - center;
        if (!radius_hint.is_zero() && !(w.abs() < radius_hint * Real(eval_safety, w.prec())))
            throw InvalidParameter("PowerSeries evaluation outside trusted radius");
        return coeffs.eval(w);
    }
};

enum class SeriesOp { add, mul, differentiate, integrate_termwise, compose_linear };

// Formal-series arithmetic on anchored series. compose_linear substitutes
// z -> alpha + beta z (recentring helper); binary ops demand equal centers.
inline PowerSeries series_arith(const PowerSeries& a, const PowerSeries& b, SeriesOp op) {
    auto same_center = [&]() {
        if (!(a.center - b.center).is_zero())
            throw CenterMismatch("series centers differ");
    };
    PowerSeries r;
    r.center = a.center;
    r.radius_hint = a.radius_hint;
    switch (op) {
        case SeriesOp::add:
            same_center();
            r.coeffs = a.coeffs + b.coeffs;
            if (!b.radius_hint.is_zero() && (r.radius_hint.is_zero() || b.radius_hint < r.radius_hint))
                r.radius_hint = b.radius_hint;
            break;
        case SeriesOp::mul:
            same_center();
            r.coeffs = a.coeffs * b.coeffs;
            if (!b.radius_hint.is_zero() && (r.radius_hint.is_zero() || b.radius_hint < r.radius_hint))
                r.radius_hint = b.radius_hint;
            break;
        case SeriesOp::differentiate:
            r.coeffs = a.coeffs.derivative();
            break;
        case SeriesOp::integrate_termwise:
            r.coeffs = a.coeffs.integrate();
            break;
        case SeriesOp::compose_linear: {
            // b encodes alpha + beta z in its first two coefficients
            if (b.coeffs.size() < 2) throw InvalidParameter("compose_linear needs alpha, beta");
            const Complex& alpha = b.coeffs.c[0];
            const Complex& beta = b.coeffs.c[1];
            mpfr_prec_t p = alpha.prec();
            CSeries acc = CSeries::zero(a.coeffs.size(), p);
            for (size_t i = a.coeffs.size(); i-- > 0;) {
                // acc = acc*(alpha + beta z) + a_i
                CSeries next = CSeries::zero(a.coeffs.size(), p);
                for (size_t j = 0; j < acc.size(); j++) {
                    next.c[j].add_mul(acc.c[j], alpha);
                    if (j + 1 < next.size()) next.c[j + 1].add_mul(acc.c[j], beta);
                }
                next.c[0] += a.coeffs.c[i];
                acc = std::move(next);
            }
            r.coeffs = std::move(acc);
            r.center = Complex(alpha.prec());
            r.radius_hint = Real(0L, alpha.prec());
            break;
        }
    }
    return r;
}

// Fractional power of a series with nonvanishing constant term, principal
// branch at the center. Same recurrence as the exact-rational variant.
inline PowerSeries fractional_power_series(const PowerSeries& f, const Rat& e) {
    if (f.coeffs.empty() || f.coeffs.c[0].is_zero())
        throw BranchPointAtCenter("fractional power of series vanishing at center");
    mpfr_prec_t p = f.coeffs.c[0].prec();
    size_t n = f.coeffs.size();
    Real er(e, p);
    PowerSeries r{f.center, CSeries::zero(n, p), f.radius_hint};
    Complex f0 = f.coeffs.c[0];
    r.coeffs.c[0] = f0.pow(er);
    for (size_t k = 1; k < n; k++) {
        Complex s(p);
        for (size_t j = 1; j <= k; j++) {
            Real w = er * Real(static_cast<long>(j), p) - Real(static_cast<long>(k - j), p);
            s += f.coeffs.c[j] * r.coeffs.c[k - j] * w;
        }
        r.coeffs.c[k] = s / (Real(static_cast<long>(k), p) * f0);
    }
    return r;
}

// Truncated polynomial ring C[eps]/(eps^M); carries the rho-direction jets in
// the Frobenius construction.
class EpsPoly {
  public:
    std::vector<Complex> c; // length M

    EpsPoly() = default;
    EpsPoly(size_t m, mpfr_prec_t prec) : c(m, Complex(prec)) {}
    static EpsPoly constant(const Complex& a, size_t m) {
        EpsPoly r(m, a.prec());
        r.c[0] = a;
        return r;
    }

    size_t order() const { return c.size(); }

    friend EpsPoly operator+(const EpsPoly& a, const EpsPoly& b) {
        EpsPoly r = a;
        for (size_t i = 0; i < r.c.size(); i++) r.c[i] += b.c[i];
        return r;
    }
    friend EpsPoly operator-(const EpsPoly& a, const EpsPoly& b) {
        EpsPoly r = a;
        for (size_t i = 0; i < r.c.size(); i++) r.c[i] -= b.c[i];
        return r;
    }
    friend EpsPoly operator*(const EpsPoly& a, const EpsPoly& b) {
        EpsPoly r(a.c.size(), a.c.empty() ? mpfr_prec_t(64) : a.c[0].prec());
        for (size_t i = 0; i < a.c.size(); i++)
            for (size_t j = 0; i + j < a.c.size(); j++) r.c[i + j].add_mul(a.c[i], b.c[j]);
        return r;
    }

    // Inverse of a unit (c[0] != 0).
    EpsPoly inverse() const {
        EpsPoly r(c.size(), c[0].prec());
        Complex one(1, c[0].prec());
        r.c[0] = one / c[0];
        for (size_t n = 1; n < c.size(); n++) {
            Complex s(c[0].prec());
            for (size_t k = 1; k <= n; k++) s.add_mul(c[k], r.c[n - k]);
            r.c[n] = -s / c[0];
        }
        return r;
    }

    // Divide by eps^v (drops the lowest v coefficients, which the caller
    // asserts are numerically zero).
    EpsPoly shift_down(size_t v) const {
        EpsPoly r(c.size(), c[0].prec());
        for (size_t i = v; i < c.size(); i++) r.c[i - v] = c[i];
        return r;
    }
};

} // namespace periods

#endif
