#include <doctest.h>

#include "periods/catalog.hpp"
#include "periods/ode.hpp"
#include "periods/surface.hpp"

using namespace periods;

namespace {
const PrecisionContext ctx(60, 60);
const mpfr_prec_t P = ctx.prec_bits();
Real tol(long d) { return Real::pow10(-d, P); }

RatPoly poly(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return RatPoly(std::move(v));
}

bool proportional(const LinearODE& a, const LinearODE& b) {
    if (a.order() != b.order()) return false;
    const RatPoly &pa = a.coeffs[0], &pb = b.coeffs[0];
    if (pa.degree() != pb.degree()) return false;
    Rat mu = pb.c.back() / pa.c.back();
    for (size_t j = 0; j < a.coeffs.size(); j++)
        if (!(a.coeffs[j] * mu == b.coeffs[j])) return false;
    return true;
}

// exact single-factor seed g2^(-1/4) 2F1(...; 1/J) for one surface
RatSeries single_seed(const WeierstrassSurface& s, size_t len) {
    RatPoly g2s = s.g2.p;
    RatPoly g3s = s.g3.p;
    Rat g20 = g2s.coeff(0);
    RatSeries g2n = RatSeries::from_poly(g2s * (1 / g20), len);
    RatSeries quarter = g2n.pow(Rat(-1, 4));
    RatSeries g23 = g2n * g2n * g2n * Rat(g20 * g20 * g20);
    RatPoly deltas = (g2s * g2s * g2s) - (g3s * g3s) * Rat(27);
    RatSeries invj = RatSeries::from_poly(deltas, len) * g23.inverse();
    RatSeries h = hypergeometric_2f1(Rat(1, 12), Rat(5, 12), Rat(1), len).compose(invj);
    return quarter * h;
}
} // namespace

TEST_CASE("find_min_ode on the geometric series") {
    std::vector<Rat> c(40, Rat(1));
    LinearODE ode = find_min_ode(RatSeries(c), 3, 1, 10);
    CHECK(ode.order() == 1);
    LinearODE want;
    want.coeffs = {poly({1, -1}), poly({-1})};
    CHECK(proportional(ode, want));
}

TEST_CASE("section-4 operators recovered exactly") {
    ExampleSpec ex = load_example("type2-swap-bc");

    // z(2z+1)(z-4) f'' + (6z^2-14z-4) f' + (2z-2) f = 0
    {
        LinearODE ode1 = find_min_ode(single_seed(ex.s1, 60), 3, 3, 20);
        LinearODE want;
        want.coeffs = {poly({0, -4, -7, 2}), poly({-4, -14, 6}), poly({-2, 2})};
        CHECK(ode1.order() == 2);
        CHECK(proportional(ode1, want));
    }
    // z(2z+9)(2z+1) f'' + (12z^2+40z+9) f' + (4z+6) f = 0
    {
        LinearODE ode2 = find_min_ode(single_seed(ex.s2, 60), 3, 3, 20);
        LinearODE want;
        want.coeffs = {poly({0, 9, 20, 4}), poly({9, 40, 12}), poly({6, 4})};
        CHECK(ode2.order() == 2);
        CHECK(proportional(ode2, want));
    }
    // the order-4 operator: full leading coefficient plus the printed extreme
    // coefficients of the lower-order terms
    {
        RatSeries seed = seed_series_exact(ex.s1, ex.s2, Rat(0), 140);
        LinearODE phi = find_min_ode(seed, 4, 10, 60);
        CHECK(phi.order() == 4);
        RatPoly lead = poly({0, 0, 1}) * poly({1, 4}) * poly({360, 7, 14}) * poly({1, 2}) *
                       poly({1, 2}) * poly({9, 2}) * poly({9, 2}) * poly({-4, 1}) * poly({-4, 1});
        Rat mu = lead.c.back() / phi.coeffs[0].c.back();
        CHECK(phi.coeffs[0] * mu == lead);
        RatPoly p1 = phi.coeffs[1] * mu;
        CHECK(p1.coeff(10) == 13440);
        CHECK(p1.coeff(9) == 33600);
        CHECK(p1.coeff(8) == 71360);
        CHECK(p1.coeff(2) == 21316608);
        CHECK(p1.coeff(1) == 2332800);
        CHECK(p1.coeff(0) == 0);
        RatPoly p2 = phi.coeffs[2] * mu;
        CHECK(p2.coeff(9) == 57344);
        CHECK(p2.coeff(8) == 129024);
        CHECK(p2.coeff(7) == 988352);
        CHECK(p2.coeff(1) == 25093152);
        CHECK(p2.coeff(0) == 1866240);
        RatPoly p3 = phi.coeffs[3] * mu;
        CHECK(p3.coeff(8) == 75264);
        CHECK(p3.coeff(7) == 150528);
        CHECK(p3.coeff(6) == 2196896);
        CHECK(p3.coeff(1) == 29102904);
        CHECK(p3.coeff(0) == 5298048);
        RatPoly p4 = phi.coeffs[4] * mu;
        CHECK(p4.coeff(7) == 21504);
        CHECK(p4.coeff(6) == 37632);
        CHECK(p4.coeff(5) == 914880);
        CHECK(p4.coeff(1) == -1921500);
        CHECK(p4.coeff(0) == -160704);
        CHECK(phi.is_fuchsian());
    }
}

TEST_CASE("self-product seed has an order-3 operator") {
    ExampleSpec ex = load_example("typeI-1128");
    RatSeries seed = seed_series_exact(ex.s1, ex.s2, Rat(0), 120);
    LinearODE phi = find_min_ode(seed, 4, 10, 60);
    CHECK(phi.order() == 3);
    CHECK(phi.is_fuchsian());
}

TEST_CASE("indicial polynomials") {
    LinearODE euler;
    euler.coeffs = {poly({0, 0, 1}), poly({0, 1}), poly({-1})};
    CHECK(indicial_polynomial(euler, Rat(0)) == poly({-1, 0, 1}));
    LinearODE dd;
    dd.coeffs = {poly({1}), poly({0}), poly({0})};
    CHECK(indicial_polynomial(dd, Rat(0)) == poly({0, -1, 1}));
    // section-4 operator at a = -9/2: quartic with congruent roots mod Z
    ExampleSpec ex = load_example("type2-swap-bc");
    RatSeries seed = seed_series_exact(ex.s1, ex.s2, Rat(0), 140);
    LinearODE phi = find_min_ode(seed, 4, 10, 60);
    RatPoly ind = indicial_polynomial(phi, Rat(-9, 2));
    CHECK(ind.degree() == 4);
    auto roots = rational_roots(ind, 12);
    long count = 0;
    for (const auto& [r, m] : roots) count += m;
    CHECK(count == 4);
    bool congruent_pair = false;
    for (const auto& [r1, m1] : roots)
        for (const auto& [r2, m2] : roots)
            if ((m1 > 1 && r1 == r2) || (!(r1 == r2) && Rat(r1 - r2).get_den() == 1))
                congruent_pair = true;
    CHECK(congruent_pair);
}

TEST_CASE("holomorphic basis: cos/sin and exp") {
    LinearODE harmonic;
    harmonic.coeffs = {poly({1}), poly({0}), poly({1})};
    auto basis = holomorphic_basis(harmonic, {Complex(0, P), Rat(0)}, ctx);
    REQUIRE(basis.size() == 2);
    CHECK((basis[0].parts[0].c[0] - Complex(1, P)).abs() < tol(50));
    CHECK((basis[0].parts[0].c[2].re + Real(0.5, P)).abs() < tol(50));
    CHECK((basis[1].parts[0].c[1] - Complex(1, P)).abs() < tol(50));
    CHECK((basis[1].parts[0].c[3].re + Real(Rat(1, 6), P)).abs() < tol(50));

    LinearODE expo;
    expo.coeffs = {poly({1}), poly({-1})};
    auto eb = holomorphic_basis(expo, {Complex(0, P), Rat(0)}, ctx);
    REQUIRE(eb.size() == 1);
    Real fact(1L, P);
    for (size_t k = 1; k < 8; k++) {
        fact *= Real(static_cast<long>(k), P);
        CHECK((eb[0].parts[0].c[k].re - Real(1L, P) / fact).abs() < tol(48));
    }
}

TEST_CASE("frobenius basis shapes") {
    // z f'' + f' = 0: solutions {1, log z}
    LinearODE ode;
    ode.coeffs = {poly({0, 1}), poly({1}), poly({0})};
    auto basis = frobenius_basis(ode, {Complex(0, P), Rat(0)}, ctx);
    REQUIRE(basis.size() == 2);
    bool has_log = false;
    for (const auto& f : basis) has_log = has_log || f.log_order() > 1;
    CHECK(has_log);
    // each solves the equation
    for (const auto& f : basis) {
        LogSeries r = apply_ode(ode, f, {Complex(0, P), Rat(0)}, ctx);
        Real worst(0L, P);
        for (const auto& part : r.parts)
            for (size_t k = 0; k + 4 < part.size(); k++)
                if (part.c[k].abs() > worst) worst = part.c[k].abs();
        CHECK(worst < tol(45));
    }

    // f'' = 0: apparent/degenerate path, no logs
    LinearODE dd;
    dd.coeffs = {poly({1}), poly({0}), poly({0})};
    auto hb = frobenius_basis(dd, {Complex(0, P), Rat(0)}, ctx);
    REQUIRE(hb.size() == 2);
    for (const auto& f : hb) CHECK(f.log_order() == 1);
}

TEST_CASE("frobenius residuals for the section-4 operator") {
    ExampleSpec ex = load_example("type2-swap-bc");
    RatSeries seed = seed_series_exact(ex.s1, ex.s2, Rat(0), 140);
    PrecisionContext c2(60, 80);
    LinearODE phi = find_min_ode(seed, 4, 10, 60);
    ExpansionPoint at_a{Complex(Real(Rat(-9, 2), P), Real(0L, P)), Rat(-9, 2)};
    auto basis = frobenius_basis(phi, at_a, c2);
    REQUIRE(basis.size() == 4);
    for (const auto& f : basis) {
        LogSeries r = apply_ode(phi, f, at_a, c2);
        Real worst(0L, P), scale(0L, P);
        for (const auto& part : f.parts)
            for (const auto& x : part.c)
                if (x.abs() > scale) scale = x.abs();
        for (const auto& part : r.parts)
            for (size_t k = 0; k + 6 < part.size(); k++)
                if (part.c[k].abs() > worst) worst = part.c[k].abs();
        // residual scaled by the operator's coefficient size
        CHECK(worst < scale * Real::pow10(12, P) * tol(c2.digits - 15));
    }
    ExpansionPoint at_m2{Complex(Real(-2L, P), Real(0L, P)), Rat(-2)};
    auto hb = holomorphic_basis(phi, at_m2, c2);
    REQUIRE(hb.size() == 4);
    for (const auto& f : hb) {
        LogSeries r = apply_ode(phi, f, at_m2, c2);
        Real worst(0L, P), scale(0L, P);
        for (const auto& part : f.parts)
            for (const auto& x : part.c)
                if (x.abs() > scale) scale = x.abs();
        for (const auto& part : r.parts)
            for (size_t k = 0; k + 6 < part.size(); k++)
                if (part.c[k].abs() > worst) worst = part.c[k].abs();
        CHECK(worst < scale * Real::pow10(12, P) * tol(c2.digits - 15));
    }
}

TEST_CASE("antiderivative lift") {
    LinearODE d1;
    d1.coeffs = {poly({1}), poly({0})};
    LinearODE d2 = antiderivative_ode(d1);
    CHECK(d2.order() == 2);
    CHECK(d2.coeffs[0] == poly({1}));
    CHECK(d2.coeffs[2].is_zero());
    LinearODE g;
    g.coeffs = {poly({1, -1}), poly({-1})};
    LinearODE gp = antiderivative_ode(g);
    CHECK(gp.coeffs[0] == poly({1, -1}));
    CHECK(gp.coeffs[1] == poly({-1}));
    CHECK(gp.coeffs[2].is_zero());
}

TEST_CASE("find_min_ode idempotence on regenerated solutions") {
    LinearODE g;
    g.coeffs = {poly({1, -1}), poly({-1})};
    RatSeries sol = exact_holomorphic_series(g, Rat(0), {Rat(1)}, 50);
    LinearODE back = find_min_ode(sol, 3, 1, 10);
    CHECK(proportional(back, g));

    LinearODE ode2;
    ode2.coeffs = {poly({0, 9, 20, 4}), poly({9, 40, 12}), poly({6, 4})};
    RatSeries sol2 = exact_holomorphic_series(ode2, Rat(1), {Rat(2), Rat(-3)}, 80);
    LinearODE back2 = find_min_ode(sol2, 3, 3, 20);
    CHECK(back2.order() == 2);
    // found equation annihilates the regenerated series exactly (it divides
    // the recentered original on the operator level)
    std::vector<RatSeries> der{sol2, sol2.derivative()};
    der.push_back(der[1].derivative());
    RatSeries acc(std::vector<Rat>(78, Rat(0)));
    for (long j = 0; j <= 2; j++) {
        RatPoly pj = back2.coeffs[static_cast<size_t>(2 - j)];
        for (size_t m = 0; m < pj.c.size(); m++)
            for (size_t t = m; t < acc.size(); t++)
                if (t - m < der[static_cast<size_t>(j)].size())
                    acc.c[t] += pj.c[m] * der[static_cast<size_t>(j)].c[t - m];
    }
    for (const auto& x : acc.c) CHECK(x == 0);
}

TEST_CASE("indicial roots of catalog operators are small rationals") {
    for (const char* id : {"typeI-1236", "type2-swap-bc"}) {
        ExampleSpec ex = load_example(id);
        RatSeries seed = seed_series_exact(ex.s1, ex.s2, Rat(0), 140);
        LinearODE phi = find_min_ode(seed, 4, 10, 60);
        for (const auto& f : ex.s1.fibers) {
            const Rat* q = f.location.exact_rational();
            if (!q) continue;
            RatPoly ind = indicial_polynomial(phi, *q);
            auto roots = rational_roots(ind, 12);
            long total = 0;
            for (const auto& [r, m] : roots) {
                CHECK(r.get_den() <= 12);
                total += m;
            }
            CHECK(total == ind.degree());
        }
    }
}

TEST_CASE("ode json round trip") {
    LinearODE g;
    g.coeffs = {poly({0, 9, 20, 4}), poly({9, 40, 12}), poly({6, 4})};
    LinearODE back = LinearODE::from_json(g.json());
    CHECK(back == g);
}
