#ifndef PERIODS_LOGSERIES_HPP
#define PERIODS_LOGSERIES_HPP

#include <vector>

#include "periods/series.hpp"

namespace periods {

// w^rho * sum_t parts[t](w) * log(w)^t around a (regular or regular singular)
// expansion point, w = z - center. rho is an exact rational; the branch of
// log and of w^rho is principal with arg in (-pi, pi].
//
// This closed family supports exactly the calculus the continuation needs:
// d/dz, primitive vanishing at the center, evaluation, and the deck
// transformation of one counterclockwise loop around the center.
struct LogSeries {
    Rat rho;
    std::vector<CSeries> parts; // parts[t] multiplies log^t

    size_t log_order() const { return parts.size(); }
    size_t length() const { return parts.empty() ? 0 : parts[0].size(); }
    mpfr_prec_t prec() const {
        for (const auto& p : parts)
            if (!p.empty()) return p.c[0].prec();
        return 64;
    }

    static LogSeries holomorphic(CSeries s) {
        LogSeries r;
        r.rho = 0;
        r.parts.push_back(std::move(s));
        return r;
    }

    void trim_zero_parts(const Real& tol) {
        while (parts.size() > 1) {
            bool allz = true;
            for (const auto& x : parts.back().c)
                if (!(x.abs() < tol)) { allz = false; break; }
            if (!allz) break;
            parts.pop_back();
        }
    }

    LogSeries operator*(const Complex& s) const {
        LogSeries r = *this;
        for (auto& p : r.parts) p = p * s;
        return r;
    }
    LogSeries operator+(const LogSeries& o) const {
        if (!(rho == o.rho)) throw InvalidParameter("LogSeries sum with mismatched exponent");
        LogSeries r = *this;
        while (r.parts.size() < o.parts.size()) r.parts.push_back(CSeries::zero(length(), prec()));
        for (size_t t = 0; t < o.parts.size(); t++) r.parts[t] = r.parts[t] + o.parts[t];
        return r;
    }

    // d/dz: term c w^(rho+k) log^t -> (rho+k) c w^(rho+k-1) log^t + t c w^(rho+k-1) log^(t-1).
    LogSeries derivative() const {
        mpfr_prec_t p = prec();
        LogSeries r;
        r.rho = rho - 1;
        r.parts.assign(parts.size(), CSeries::zero(length(), p));
        for (size_t t = 0; t < parts.size(); t++) {
            for (size_t k = 0; k < parts[t].size(); k++) {
                Real ex(rho + Rat(static_cast<long>(k)), p);
                r.parts[t].c[k] += parts[t].c[k] * ex;
                if (t > 0) r.parts[t - 1].c[k] += parts[t].c[k] * Real(static_cast<long>(t), p);
            }
        }
        return r;
    }

    // Primitive vanishing at the center; needs rho + k + 1 != 0 throughout,
    // which holds for every catalog exponent (all >= 0).
    LogSeries primitive() const {
        mpfr_prec_t p = prec();
        size_t n = length() + 1;
        LogSeries r;
        r.rho = rho;
        r.parts.assign(parts.size(), CSeries::zero(n, p));
        for (size_t t = 0; t < parts.size(); t++) {
            for (size_t k = 0; k < parts[t].size(); k++) {
                Rat s = rho + Rat(static_cast<long>(k)) + 1;
                if (s == 0) throw InvalidParameter("primitive hits exponent -1");
                // int w^(s-1) log^t = w^s sum_i (-1)^i t!/(t-i)! / s^(i+1) log^(t-i)
                Real inv_s = Real(1L, p) / Real(s, p);
                Complex fac = parts[t].c[k] * inv_s;
                long fall = 1;
                for (size_t i = 0; i <= t; i++) {
                    r.parts[t - i].c[k + 1] += (i % 2 == 0) ? fac : -fac;
                    fall = static_cast<long>(t - i);
                    fac = fac * Real(fall, p) * inv_s;
                }
            }
        }
        return r;
    }

    Complex eval(const Complex& w) const {
        mpfr_prec_t p = w.prec();
        Complex lw = w.log();
        Complex acc(p);
        for (size_t t = parts.size(); t-- > 0;) acc = acc * lw + parts[t].eval(w);
        if (!(rho == 0)) acc = acc * (lw * Real(rho, p)).exp();
        return acc;
    }

    // Evaluate value and the first (count-1) z-derivatives at center + w.
    std::vector<Complex> eval_jet(const Complex& w, size_t count) const {
        std::vector<Complex> out;
        out.reserve(count);
        LogSeries cur = *this;
        for (size_t i = 0; i < count; i++) {
            out.push_back(cur.eval(w));
            if (i + 1 < count) cur = cur.derivative();
        }
        return out;
    }

    // Counterclockwise loop around the center: w^rho gains e^(2 pi i rho),
    // log(w) gains 2 pi i.
    LogSeries monodromy_ccw() const {
        mpfr_prec_t p = prec();
        Real two_pi = Real::pi(p) * 2;
        Complex twopii(Real(0L, p), two_pi);
        // e^(2 pi i rho)
        Real ang = two_pi * Real(rho, p);
        Complex phase(ang.cos(), ang.sin());
        LogSeries r;
        r.rho = rho;
        r.parts.assign(parts.size(), CSeries::zero(length(), p));
        // binomial expansion of (log + 2 pi i)^t
        for (size_t t = 0; t < parts.size(); t++) {
            Complex pw(1, p);
            Int binom(1);
            for (size_t i = 0; i <= t; i++) {
                // contributes parts[t] * C(t,i) (2 pi i)^i to log^(t-i)
                Complex f = pw * Real(Rat(binom), p);
                r.parts[t - i] = r.parts[t - i] + parts[t] * f;
                pw = pw * twopii;
                binom = binom * static_cast<long>(t - i) / static_cast<long>(i + 1);
            }
        }
        for (auto& q : r.parts) q = q * phase;
        return r;
    }
};

} // namespace periods

#endif
