#include "periods/surface.hpp"

#include <algorithm>

#include "periods/quadrature.hpp"

namespace periods {

// ------------------------------------------------------------------ points

Real AlgebraicReal::value(mpfr_prec_t prec) const {
    // Newton from the double seed; all catalog points are simple roots
    Real x(approx, prec);
    RatPoly dp = minpoly.derivative();
    for (int it = 0; it < 64; it++) {
        Real f = minpoly.eval(x);
        Real d = dp.eval(x);
        if (d.is_zero()) break;
        Real step = f / d;
        x -= step;
        if (step.abs() < x.abs() * Real::pow10(-((prec * 30L) / 100L), prec) + Real::pow10(-((prec * 30L) / 100L), prec))
            break;
    }
    return x;
}

Real PointP1::value(mpfr_prec_t prec) const {
    if (const Rat* q = std::get_if<Rat>(&v)) return Real(*q, prec);
    if (const AlgebraicReal* a = std::get_if<AlgebraicReal>(&v)) return a->value(prec);
    throw InvalidParameter("value() of the point at infinity");
}

double PointP1::approx() const {
    if (const Rat* q = std::get_if<Rat>(&v)) return q->get_d();
    if (const AlgebraicReal* a = std::get_if<AlgebraicReal>(&v)) return a->approx;
    throw InvalidParameter("approx() of the point at infinity");
}

std::string PointP1::str() const {
    if (const Rat* q = std::get_if<Rat>(&v)) return q->get_str();
    if (const AlgebraicReal* a = std::get_if<AlgebraicReal>(&v)) {
        char buf[64];
        snprintf(buf, sizeof buf, "root(%s)~%.6f", a->minpoly.str().c_str(), a->approx);
        return buf;
    }
    return "inf";
}

// ----------------------------------------------------------------- surface

WeierstrassSurface::WeierstrassSurface(RatPoly g2poly, RatPoly g3poly, long twist) : k(twist) {
    g2 = RatForm(std::move(g2poly), 4 * k);
    g3 = RatForm(std::move(g3poly), 6 * k);
    RatPoly delta = (g2.p * g2.p * g2.p) - (g3.p * g3.p) * Rat(27);
    if (delta.is_zero()) throw NonSemistablePoint("discriminant identically zero");
}

WeierstrassSurface WeierstrassSurface::chart_w() const {
    WeierstrassSurface w;
    w.k = k;
    w.g2 = RatForm(g2.chart_w(), 4 * k);
    w.g3 = RatForm(g3.chart_w(), 6 * k);
    w.classify();
    return w;
}

RatForm WeierstrassSurface::discriminant() const {
    RatPoly d = (g2.p * g2.p * g2.p) - (g3.p * g3.p) * Rat(27);
    return RatForm(d, 12 * k);
}

std::optional<Complex> WeierstrassSurface::j_invariant(const Complex& z) const {
    mpfr_prec_t prec = z.prec();
    RatPoly delta = discriminant().p;
    Complex g2v = g2.p.eval(z);
    Complex dv = delta.eval(z);
    Real scale(1L, prec);
    for (const auto& c : delta.c) {
        Real a = Real(c, prec).abs();
        if (a > scale) scale = a;
    }
    Real tol = scale * Real::pow10(-(prec * 25L) / 100L, prec);
    if (dv.abs() < tol) {
        if (g2v.abs() < tol) throw NonSemistablePoint("g2 and discriminant vanish together");
        return std::nullopt;
    }
    return g2v.pow_si(3) / dv;
}

std::vector<SingularFiber> WeierstrassSurface::classify_fibers() const {
    std::vector<SingularFiber> out;
    RatPoly delta = discriminant().p;
    RatPoly g2z = g2.p;

    // constant J: no semistable degenerations anywhere
    // (g2^3 proportional to Delta as polynomials)
    {
        RatPoly g23 = g2z * g2z * g2z;
        if (!delta.is_zero() && !g23.is_zero()) {
            // cross-multiply leading coefficients
            RatPoly lhs = g23 * delta.c.back();
            RatPoly rhs = delta * g23.c.back();
            if (lhs == rhs) return out;
        }
    }

    if (delta.is_zero()) throw NonSemistablePoint("discriminant identically zero");

    // finite singular fibers: rational roots exactly, the rest through their
    // squarefree factors
    RatPoly remaining = delta;
    auto rroots = rational_roots(delta, 1000);
    for (const auto& [root, mult] : rroots) {
        if (g2z.eval(root) == 0)
            throw NonSemistablePoint("additive fiber at z = " + root.get_str());
        out.push_back({PointP1::rational(root), mult});
        RatPoly lin({-root, Rat(1)}), q, r;
        for (long i = 0; i < mult; i++) {
            RatPoly::divmod(remaining, lin, q, r);
            remaining = q;
        }
    }
    if (remaining.degree() > 0) {
        auto roots = complex_roots(remaining, 192);
        for (const auto& r : roots) {
            if (!(r.z.im.abs() < Real::pow10(-20, 192)))
                throw NonSemistablePoint("singular fiber over a non-real point (unsupported catalog)");
            // exact semistability: the squarefree factor of this root must be
            // coprime to g2
            AlgebraicReal a{remaining.squarefree_part(), r.z.re.to_double()};
            RatPoly g = RatPoly::gcd(a.minpoly, g2z);
            if (g.degree() > 0)
                throw NonSemistablePoint("additive fiber over an algebraic point");
            // multiplicity of this root inside `remaining`
            out.push_back({PointP1::algebraic(std::move(a)), r.multiplicity});
        }
    }

    // fiber at infinity: vanishing order of Delta in the w-chart
    long n_inf = 12 * k - (delta.degree());
    if (n_inf > 0) {
        if (g2z.degree() != 4 * k)
            throw NonSemistablePoint("additive fiber at infinity");
        out.push_back({PointP1::infinity(), n_inf});
    }

    // sort by real position, infinity last
    std::sort(out.begin(), out.end(), [](const SingularFiber& a, const SingularFiber& b) {
        if (a.location.is_infinity()) return false;
        if (b.location.is_infinity()) return true;
        return a.location.approx() < b.location.approx();
    });
    return out;
}

WeierstrassSurface mobius_pullback(const WeierstrassSurface& s, const Rat& a, const Rat& b,
                                   const Rat& c, const Rat& d) {
    if (a * d - b * c == 0) throw InvalidMobius("degenerate fractional-linear map");
    WeierstrassSurface out;
    out.k = s.k;
    out.g2 = s.g2.pullback(a, b, c, d);
    out.g3 = s.g3.pullback(a, b, c, d);
    out.classify();
    return out;
}

// ------------------------------------------------------------------- roots

RootTriple ordered_roots(const WeierstrassSurface& s, const Real& z) {
    mpfr_prec_t prec = z.prec();
    Real g2v = s.g2.p.eval(z);
    Real g3v = s.g3.p.eval(z);
    // depressed cubic x^3 + p x + q = 0 for 4x^3 - g2 x - g3
    Real p = -g2v / 4, q = -g3v / 4;
    Real disc = p * p * p * Real(-4L, prec) - q * q * Real(27L, prec);
    RootTriple out;
    if (disc.sign() > 0) {
        // three real roots, trigonometric form
        Real m = (p / -3).sqrt();
        if (m.is_zero()) throw SingularFiberPoint("triple root");
        Real arg = q * 3 / (p * m * 2);
        // clamp into [-1, 1]
        if (arg > Real(1L, prec)) arg = Real(1L, prec);
        if (arg < Real(-1L, prec)) arg = Real(-1L, prec);
        Real theta = arg.acos();
        Real third = Real::pi(prec) * 2 / 3;
        std::vector<Real> xs;
        for (int j = 0; j < 3; j++)
            xs.push_back(m * 2 * ((theta / 3) - third * j).cos());
        std::sort(xs.begin(), xs.end());
        out.all_real = true;
        out.r1 = Complex(xs[0]);
        out.r2 = Complex(xs[1]);
        out.r3 = Complex(xs[2]);
    } else if (disc.sign() < 0) {
        // one real root + conjugate pair (Cardano)
        Real s2 = (q * q / 4 + p * p * p / 27).sqrt();
        Real u3 = -q / 2 + s2, v3 = -q / 2 - s2;
        Real u = u3.cbrt(), vcb = v3.cbrt();
        Real re_root = u + vcb;
        Real sigma = -re_root / 2;
        Real tau = (u - vcb).abs() * Real(3L, prec).sqrt() / 2;
        out.all_real = false;
        out.r1 = Complex(sigma, -tau);
        out.r2 = Complex(re_root, Real(0L, prec));
        out.r3 = Complex(sigma, tau);
    } else {
        throw SingularFiberPoint("repeated root of the fiber cubic");
    }
    return out;
}

// ----------------------------------------------------------------- periods

namespace {

// sqrt of the affine factor x(t) - r along the segment, on a branch cut
// opposite the bisector of the endpoint directions (continuous along the
// whole segment since the argument sweep is a subarc of a half-circle).
struct FactorBranch {
    Complex base;   // x(mid) - r at t = 0
    Complex slope;  // half-length direction
    Complex rot;    // e^(-i phi0)
    Complex halfrot; // e^(+i phi0 / 2)

    void init(const Complex& A, const Complex& B, const Complex& r, mpfr_prec_t prec) {
        Complex gA = A - r, gB = B - r;
        base = (gA + gB) / Real(2L, prec);
        slope = (gB - gA) / Real(2L, prec);
        Complex v(prec);
        Real na = gA.abs(), nb = gB.abs();
        if (!na.is_zero()) v += gA / na;
        if (!nb.is_zero()) v += gB / nb;
        Real phi0 = v.arg();
        rot = Complex((-phi0).cos(), (-phi0).sin());
        Real h = phi0 / 2;
        halfrot = Complex(h.cos(), h.sin());
    }
    Complex sqrt_at(const Real& t) const {
        Complex g = base + slope * t;
        return (g * rot).sqrt() * halfrot;
    }
    // endpoint-factor variant: g = slope' * (1 -+ t) with the small factor
    // passed explicitly to dodge cancellation
    Complex sqrt_linear(const Complex& coeff, const Real& small) const {
        return (coeff * rot).sqrt() * halfrot * small.sqrt();
    }
};

} // namespace

Complex elliptic_period(const WeierstrassSurface& s, const Real& z, int u, long quad_digits) {
    if (u != 1 && u != 2) throw InvalidParameter("period index must be 1 or 2");
    mpfr_prec_t prec = z.prec();
    RootTriple rt = ordered_roots(s, z);
    const Complex& A = rt.at(u);
    const Complex& B = rt.at(u + 1);
    const Complex& C = rt.at(u == 1 ? 3 : 1);
    Complex half = (B - A) / Real(2L, prec);
    Complex mid = (B + A) / Real(2L, prec);
    if (half.is_zero()) throw SingularFiberPoint("coincident segment endpoints");

    // x - A = half (1+t), x - B = -half (1-t), x - C tracked by FactorBranch
    FactorBranch fA, fB, fC;
    fA.init(A, B, A, prec);
    fB.init(A, B, B, prec);
    fC.init(A, B, C, prec);

    auto integrand = [&](const QuadNode& n) -> Complex {
        Complex sA = fA.sqrt_linear(half, n.one_plus_s);
        Complex sB = fB.sqrt_linear(-half, n.one_minus_s);
        Complex sC = fC.sqrt_at(n.s);
        return (half * n.w) / (sA * sB * sC);
    };
    // P_u = 2 int dx / (2 sqrt((x-A)(x-B)(x-C)))
    return tanh_sinh(integrand, quad_digits, prec);
}

// ------------------------------------------------------------- seed series

RatSeries seed_series_exact(const WeierstrassSurface& s1, const WeierstrassSurface& s2,
                            const Rat& center, size_t len) {
    auto factor = [&](const WeierstrassSurface& s) {
        RatPoly g2s = s.g2.p.shift(center);
        RatPoly g3s = s.g3.p.shift(center);
        Rat g20 = g2s.coeff(0);
        if (g20 == 0) throw InvalidSeedCenter("g2 vanishes at seed center (additive fiber)");
        RatSeries g2n = RatSeries::from_poly(g2s * (1 / g20), len); // unit constant term
        RatSeries quarter = g2n.pow(Rat(-1, 4));
        // 1/J = Delta / g2^3
        RatSeries g23 = g2n * g2n * g2n * Rat(g20 * g20 * g20);
        RatPoly deltas = (g2s * g2s * g2s) - (g3s * g3s) * Rat(27);
        RatSeries invj = RatSeries::from_poly(deltas, len) * g23.inverse();
        if (invj.c.empty() || invj.c[0] != 0)
            throw InvalidSeedCenter("1/J does not vanish at seed center");
        RatSeries h = hypergeometric_2f1(Rat(1, 12), Rat(5, 12), Rat(1), len).compose(invj);
        return quarter * h;
    };
    return factor(s1) * factor(s2);
}

PowerSeries seed_period_series(const WeierstrassSurface& s1, const WeierstrassSurface& s2,
                               const Rat& center, const PrecisionContext& ctx) {
    RatSeries s = seed_series_exact(s1, s2, center, static_cast<size_t>(ctx.series_order));
    mpfr_prec_t prec = ctx.prec_bits();
    PowerSeries out;
    out.center = Complex(center, prec);
    out.coeffs = CSeries::from_rat(s, prec);
    // distance to the nearest other singular fiber of either surface
    Real radius(0L, prec);
    bool first = true;
    for (const WeierstrassSurface* sp : {&s1, &s2}) {
        auto fibers = sp->fibers.empty() ? sp->classify_fibers() : sp->fibers;
        for (const auto& f : fibers) {
            if (f.location.is_infinity()) continue;
            Real d = (f.location.value(prec) - Real(center, prec)).abs();
            if (d.is_zero()) continue;
            if (first || d < radius) { radius = d; first = false; }
        }
    }
    out.radius_hint = first ? Real(0L, prec) : radius;
    return out;
}

} // namespace periods
