#ifndef PERIODS_RATIONAL_HPP
#define PERIODS_RATIONAL_HPP

#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <vector>

#include "periods/complex.hpp"
#include "periods/errors.hpp"

namespace periods {

using Rat = mpq_class;
using Int = mpz_class;

// Dense univariate polynomial with exact rational coefficients, ascending
// degree, trailing zeros stripped. Doubles as one chart of a homogeneous
// bivariate form when paired with a homogenization degree (see RatForm).
class RatPoly {
  public:
    std::vector<Rat> c;

    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { strip(); }
    static RatPoly constant(const Rat& a) { return RatPoly(std::vector<Rat>{a}); }
    static RatPoly monomial(const Rat& a, size_t k) {
        std::vector<Rat> v(k + 1);
        v[k] = a;
        return RatPoly(std::move(v));
    }

    void strip() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    const Rat& coeff(size_t k) const {
        static const Rat zero(0);
        return k < c.size() ? c[k] : zero;
    }

    friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
        std::vector<Rat> v(std::max(a.c.size(), b.c.size()), Rat(0));
        for (size_t i = 0; i < a.c.size(); i++) v[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); i++) v[i] += b.c[i];
        return RatPoly(std::move(v));
    }
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) {
        std::vector<Rat> v(std::max(a.c.size(), b.c.size()), Rat(0));
        for (size_t i = 0; i < a.c.size(); i++) v[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); i++) v[i] -= b.c[i];
        return RatPoly(std::move(v));
    }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rat> v(a.c.size() + b.c.size() - 1, Rat(0));
        for (size_t i = 0; i < a.c.size(); i++)
            for (size_t j = 0; j < b.c.size(); j++) v[i + j] += a.c[i] * b.c[j];
        return RatPoly(std::move(v));
    }
    friend RatPoly operator*(const RatPoly& a, const Rat& s) {
        RatPoly r = a;
        for (auto& x : r.c) x *= s;
        r.strip();
        return r;
    }
    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c == b.c; }

    RatPoly derivative() const {
        if (c.size() <= 1) return {};
        std::vector<Rat> v(c.size() - 1);
        for (size_t i = 1; i < c.size(); i++) v[i - 1] = c[i] * Rat(static_cast<long>(i));
        return RatPoly(std::move(v));
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }
    Complex eval(const Complex& x) const {
        Complex acc(x.prec());
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + Complex(Real(c[i], x.prec()));
        return acc;
    }
    Real eval(const Real& x) const {
        Real acc(x.prec());
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + Real(c[i], x.prec());
        return acc;
    }

    // Taylor shift p(x) -> p(x0 + x), exact.
    RatPoly shift(const Rat& x0) const {
        RatPoly out;
        for (size_t i = c.size(); i-- > 0;) {
            // out = out * (x + x0) + c[i]
            std::vector<Rat> v(out.c.size() + 1, Rat(0));
            for (size_t j = 0; j < out.c.size(); j++) {
                v[j + 1] += out.c[j];
                v[j] += out.c[j] * x0;
            }
            if (v.empty()) v.push_back(Rat(0));
            v[0] += c[i];
            out = RatPoly(std::move(v));
        }
        return out;
    }

    // Euclidean division over Q.
    static void divmod(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
        if (b.is_zero()) throw InvalidParameter("polynomial division by zero");
        r = a;
        q = {};
        while (!r.is_zero() && r.degree() >= b.degree()) {
            long k = r.degree() - b.degree();
            Rat f = r.c.back() / b.c.back();
            RatPoly t = RatPoly::monomial(f, static_cast<size_t>(k));
            q = q + t;
            r = r - t * b;
        }
    }

    static RatPoly gcd(RatPoly a, RatPoly b) {
        while (!b.is_zero()) {
            RatPoly q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        if (!a.is_zero()) {
            Rat lead = a.c.back();
            for (auto& x : a.c) x /= lead;
        }
        return a;
    }

    // Multiplicity of rational root x0 (0 if not a root).
    long root_multiplicity(const Rat& x0) const {
        RatPoly p = *this;
        long m = 0;
        while (!p.is_zero() && p.eval(x0) == 0) {
            RatPoly q, r;
            divmod(p, RatPoly({-x0, Rat(1)}), q, r);
            p = q;
            m++;
        }
        return m;
    }

    // Squarefree part (over Q, monic-normalized).
    RatPoly squarefree_part() const {
        if (degree() < 1) return *this;
        RatPoly g = gcd(*this, derivative());
        if (g.degree() < 1) return *this;
        RatPoly q, r;
        divmod(*this, g, q, r);
        return q;
    }

    // Scale coefficients to coprime integers, leading coefficient positive.
    RatPoly primitive_integer() const {
        if (is_zero()) return {};
        Int den(1);
        for (const auto& x : c) {
            Int d = x.get_den();
            Int g;
            mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
            den = den / g * d;
        }
        std::vector<Rat> v(c.size());
        Int content(0);
        for (size_t i = 0; i < c.size(); i++) {
            Rat t = c[i] * Rat(den);
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), t.get_num().get_mpz_t());
            v[i] = t;
        }
        if (content == 0) content = 1;
        if (v.back() < 0) content = -content;
        for (auto& x : v) x /= Rat(content);
        return RatPoly(std::move(v));
    }

    std::string str(const std::string& var = "z") const;
};

// Homogeneous bivariate form of degree homdeg, stored in the z-chart
// (coefficients of z^i = X^i Y^(homdeg-i)). chart_w gives the other chart,
// g(-1, w), per the transition z w = -1.
struct RatForm {
    RatPoly p;
    long homdeg = 0;

    RatForm() = default;
    RatForm(RatPoly q, long d) : p(std::move(q)), homdeg(d) {
        if (p.degree() > homdeg) throw InvalidParameter("form degree exceeds homogenization");
    }

    RatPoly chart_w() const {
        std::vector<Rat> v(static_cast<size_t>(homdeg) + 1, Rat(0));
        for (size_t i = 0; i < p.c.size(); i++) {
            Rat s = (i % 2 == 0) ? p.c[i] : -p.c[i];
            v[static_cast<size_t>(homdeg) - i] = s;
        }
        return RatPoly(std::move(v));
    }

    // Pullback by [X:Y] -> [aX+bY : cX+dY], again a form of the same degree.
    RatForm pullback(const Rat& a, const Rat& b, const Rat& cc, const Rat& d) const {
        RatPoly num({b, a});  // a z + b, as polynomial in z with Y=1
        RatPoly den({d, cc});
        RatPoly acc;
        RatPoly num_pow = RatPoly::constant(Rat(1));
        std::vector<RatPoly> den_pows(static_cast<size_t>(homdeg) + 1);
        den_pows[0] = RatPoly::constant(Rat(1));
        for (long i = 1; i <= homdeg; i++) den_pows[static_cast<size_t>(i)] = den_pows[static_cast<size_t>(i - 1)] * den;
        for (long i = 0; i <= homdeg; i++) {
            if (i < static_cast<long>(p.c.size()) && p.c[static_cast<size_t>(i)] != 0)
                acc = acc + num_pow * den_pows[static_cast<size_t>(homdeg - i)] * p.c[static_cast<size_t>(i)];
            num_pow = num_pow * num;
        }
        return RatForm(acc, homdeg);
    }
};

// Truncated power series with exact rational coefficients (center implicit).
// All operations truncate to the shorter operand; this is the exact layer the
// ODE search runs on.
class RatSeries {
  public:
    std::vector<Rat> c;

    RatSeries() = default;
    explicit RatSeries(std::vector<Rat> coeffs) : c(std::move(coeffs)) {}
    static RatSeries from_poly(const RatPoly& p, size_t n) {
        std::vector<Rat> v(n, Rat(0));
        for (size_t i = 0; i < p.c.size() && i < n; i++) v[i] = p.c[i];
        return RatSeries(std::move(v));
    }

    size_t size() const { return c.size(); }

    friend RatSeries operator+(const RatSeries& a, const RatSeries& b) {
        size_t n = std::min(a.size(), b.size());
        std::vector<Rat> v(n);
        for (size_t i = 0; i < n; i++) v[i] = a.c[i] + b.c[i];
        return RatSeries(std::move(v));
    }
    friend RatSeries operator-(const RatSeries& a, const RatSeries& b) {
        size_t n = std::min(a.size(), b.size());
        std::vector<Rat> v(n);
        for (size_t i = 0; i < n; i++) v[i] = a.c[i] - b.c[i];
        return RatSeries(std::move(v));
    }
    friend RatSeries operator*(const RatSeries& a, const RatSeries& b) {
        size_t n = std::min(a.size(), b.size());
        std::vector<Rat> v(n, Rat(0));
        for (size_t i = 0; i < n; i++) {
            if (a.c[i] == 0) continue;
            for (size_t j = 0; i + j < n; j++)
                if (b.c[j] != 0) v[i + j] += a.c[i] * b.c[j];
        }
        return RatSeries(std::move(v));
    }
    friend RatSeries operator*(const RatSeries& a, const Rat& s) {
        RatSeries r = a;
        for (auto& x : r.c) x *= s;
        return r;
    }

    RatSeries derivative() const {
        if (c.empty()) return {};
        std::vector<Rat> v(c.size() - 1);
        for (size_t i = 1; i < c.size(); i++) v[i - 1] = c[i] * Rat(static_cast<long>(i));
        return RatSeries(std::move(v));
    }
    RatSeries integrate() const {
        std::vector<Rat> v(c.size() + 1, Rat(0));
        for (size_t i = 0; i < c.size(); i++) v[i + 1] = c[i] / Rat(static_cast<long>(i + 1));
        return RatSeries(std::move(v));
    }
    // Multiply by z^k, keeping length.
    RatSeries shift_up(size_t k) const {
        std::vector<Rat> v(c.size(), Rat(0));
        for (size_t i = 0; i + k < c.size(); i++) v[i + k] = c[i];
        return RatSeries(std::move(v));
    }

    RatSeries inverse() const {
        if (c.empty() || c[0] == 0) throw InvalidParameter("series inverse needs nonzero constant term");
        std::vector<Rat> v(c.size(), Rat(0));
        v[0] = 1 / c[0];
        for (size_t n = 1; n < c.size(); n++) {
            Rat s(0);
            for (size_t k = 1; k <= n; k++)
                if (k < c.size() && c[k] != 0) s += c[k] * v[n - k];
            v[n] = -s / c[0];
        }
        return RatSeries(std::move(v));
    }

    // f^e for rational e, requiring f(0) = 1 (the exact layer keeps the
    // irrational scalar factored out; see seed construction).
    RatSeries pow(const Rat& e) const {
        if (c.empty() || c[0] != 1)
            throw BranchPointAtCenter("rational series power needs unit constant term");
        // g' f = e f' g, g0 = 1  =>  n g_n = sum_{k=1..n} (e k - (n-k)) f_k g_{n-k}
        std::vector<Rat> v(c.size(), Rat(0));
        v[0] = 1;
        for (size_t n = 1; n < c.size(); n++) {
            Rat s(0);
            for (size_t k = 1; k <= n; k++)
                if (c[k] != 0) s += (e * Rat(static_cast<long>(k)) - Rat(static_cast<long>(n - k))) * c[k] * v[n - k];
            v[n] = s / Rat(static_cast<long>(n));
        }
        return RatSeries(std::move(v));
    }

    // Composition this(g) with g(0) = 0 (Horner over series).
    RatSeries compose(const RatSeries& g) const {
        if (!g.c.empty() && g.c[0] != 0)
            throw InvalidParameter("series composition needs zero constant term");
        size_t n = std::min(size(), g.size());
        RatSeries acc(std::vector<Rat>(n, Rat(0)));
        RatSeries gg(std::vector<Rat>(g.c.begin(), g.c.begin() + static_cast<long>(n)));
        for (size_t i = n; i-- > 0;) {
            acc = acc * gg;
            acc.c[0] += c[i];
        }
        return acc;
    }

    Complex eval(const Complex& x) const {
        Complex acc(x.prec());
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + Complex(Real(c[i], x.prec()));
        return acc;
    }
};

inline std::string RatPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t i = 0; i < c.size(); i++) {
        if (c[i] == 0) continue;
        if (!out.empty()) out += (c[i] > 0 ? " + " : " - ");
        else if (c[i] < 0) out += "-";
        Rat a = abs(c[i]);
        std::string coeff = a.get_str();
        if (i == 0) out += coeff;
        else {
            if (coeff != "1") out += coeff + "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

// 2F1(a,b;c;x) truncated Taylor series via the defining coefficient
// recurrence, exact.
inline RatSeries hypergeometric_2f1(const Rat& a, const Rat& b, const Rat& c, size_t order) {
    if (c <= 0 && c.get_den() == 1)
        throw InvalidParameter("2F1 parameter c is a nonpositive integer");
    std::vector<Rat> v(order, Rat(0));
    if (order == 0) return RatSeries(std::move(v));
    v[0] = 1;
    for (size_t k = 0; k + 1 < order; k++) {
        Rat kk(static_cast<long>(k));
        Rat den = (c + kk) * (kk + 1);
        if (den == 0) throw InvalidParameter("2F1 recurrence pole");
        v[k + 1] = v[k] * (a + kk) * (b + kk) / den;
    }
    return RatSeries(std::move(v));
}

} // namespace periods

#endif
