#ifndef PERIODS_COMPLEX_HPP
#define PERIODS_COMPLEX_HPP

#include <string>
#include <utility>

#include "periods/real.hpp"

namespace periods {

// Arbitrary-precision complex number over two Reals. Branch conventions for
// log/arg/pow follow arg in (-pi, pi]; values on the cut continue the upper
// branch (mpfr_atan2 with +0 imaginary part already lands on +pi).
class Complex {
  public:
    Real re, im;

    Complex() = default;
    explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(Real r) : re(std::move(r)), im(re.prec()) {}
    Complex(long r, mpfr_prec_t prec) : re(r, prec), im(prec) {}
    Complex(const mpq_class& q, mpfr_prec_t prec) : re(q, prec), im(prec) {}

    mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
    friend Complex operator*(const Real& b, const Complex& a) { return a * b; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
    Complex operator-() const { return {-re, -im}; }
    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }

    // Fused accumulate: *this += a*b without temporaries per component pair.
    void add_mul(const Complex& a, const Complex& b) {
        mpfr_fma(re.raw(), a.re.raw(), b.re.raw(), re.raw(), MPFR_RNDN);
        mpfr_fms(re.raw(), a.im.raw(), b.im.raw(), re.raw(), MPFR_RNDN);
        mpfr_neg(re.raw(), re.raw(), MPFR_RNDN);
        mpfr_fma(im.raw(), a.re.raw(), b.im.raw(), im.raw(), MPFR_RNDN);
        mpfr_fma(im.raw(), a.im.raw(), b.re.raw(), im.raw(), MPFR_RNDN);
    }

    Complex conj() const { return {re, -im}; }
    Real abs2() const { return re * re + im * im; }
    Real abs() const { return abs2().sqrt(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    // Principal argument in (-pi, pi].
    Real arg() const { return Real::atan2(im, re); }

    Complex log() const { return {abs().log(), arg()}; }
    Complex exp() const {
        Real m = re.exp();
        return {m * im.cos(), m * im.sin()};
    }
    Complex sqrt() const {
        // principal branch
        Real m = abs().sqrt();
        Real a = arg() / 2;
        return {m * a.cos(), m * a.sin()};
    }
    // Principal z^e for real exponent e.
    Complex pow(const Real& e) const {
        Real m = abs().log() * e;
        Real a = arg() * e;
        Real r = m.exp();
        return {r * a.cos(), r * a.sin()};
    }
    Complex pow_si(long n) const {
        mpfr_prec_t p = prec();
        Complex acc(1, p), base = *this;
        bool inv = n < 0;
        unsigned long k = inv ? -static_cast<unsigned long>(n) : n;
        while (k) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        if (inv) acc = Complex(1, p) / acc;
        return acc;
    }

    static Complex i(mpfr_prec_t prec) { return {Real(0L, prec), Real(1L, prec)}; }

    std::string str(long n) const {
        return re.str(n) + (im.sign() < 0 ? " - " : " + ") + im.abs().str(n) + "*I";
    }
};

inline Real abs_dist(const Complex& a, const Complex& b) { return (a - b).abs(); }

} // namespace periods

#endif
