#include <doctest.h>

#include "periods/logseries.hpp"
#include "periods/quadrature.hpp"
#include "periods/rational.hpp"
#include "periods/series.hpp"

using namespace periods;

namespace {
const PrecisionContext ctx(60, 40);
const mpfr_prec_t P = ctx.prec_bits();

Real tol(long d) { return Real::pow10(-d, P); }

PowerSeries from_rat(std::initializer_list<long> nums, std::initializer_list<long> dens) {
    std::vector<Rat> c;
    auto n = nums.begin();
    auto d = dens.begin();
    for (; n != nums.end(); ++n, ++d) c.emplace_back(*n, *d);
    PowerSeries p;
    p.center = Complex(0, P);
    p.coeffs = CSeries::from_rat(RatSeries(std::move(c)), P);
    p.radius_hint = Real(0L, P);
    return p;
}
} // namespace

TEST_CASE("series arithmetic basics") {
    // (1 + z)(1 - z) = 1 - z^2
    PowerSeries a = from_rat({1, 1, 0}, {1, 1, 1});
    PowerSeries b = from_rat({1, -1, 0}, {1, 1, 1});
    PowerSeries p = series_arith(a, b, SeriesOp::mul);
    CHECK(p.coeffs.c[0].re.to_double() == doctest::Approx(1));
    CHECK(p.coeffs.c[1].abs().to_double() == doctest::Approx(0));
    CHECK(p.coeffs.c[2].re.to_double() == doctest::Approx(-1));

    // integrate_termwise(1 + 2z) = z + z^2
    PowerSeries c = from_rat({1, 2}, {1, 1});
    PowerSeries ci = series_arith(c, c, SeriesOp::integrate_termwise);
    CHECK(ci.coeffs.c[0].abs().to_double() == doctest::Approx(0));
    CHECK(ci.coeffs.c[1].re.to_double() == doctest::Approx(1));
    CHECK(ci.coeffs.c[2].re.to_double() == doctest::Approx(1));

    // differentiate then integrate = identity minus constant
    PowerSeries s = from_rat({7, 3, 5, 11}, {2, 1, 4, 3});
    PowerSeries ds = series_arith(s, s, SeriesOp::differentiate);
    PowerSeries back = series_arith(ds, ds, SeriesOp::integrate_termwise);
    for (size_t k = 1; k < 4; k++)
        CHECK((back.coeffs.c[k] - s.coeffs.c[k]).abs() < tol(50));
    CHECK(back.coeffs.c[0].abs() < tol(50));

    // center mismatch raises
    PowerSeries off = a;
    off.center = Complex(1, P);
    CHECK_THROWS_AS(series_arith(a, off, SeriesOp::add), CenterMismatch);
}

TEST_CASE("series multiplication against exact convolution oracle") {
    std::vector<Rat> ar, br;
    long state = 12345;
    auto rnd = [&]() {
        state = (state * 1103515245 + 12345) % 2147483647;
        return Rat(state % 19 - 9, 1 + state % 7);
    };
    for (int i = 0; i < 25; i++) ar.push_back(rnd());
    for (int i = 0; i < 25; i++) br.push_back(rnd());
    RatSeries A(ar), B(br);
    RatSeries exact = A * B;
    CSeries num = CSeries::from_rat(A, P) * CSeries::from_rat(B, P);
    for (size_t k = 0; k < 25; k++) {
        Complex want(exact.c[k], P);
        CHECK((num.c[k] - want).abs() < tol(ctx.digits - 5));
    }
}

TEST_CASE("hypergeometric 2F1 series") {
    RatSeries h = hypergeometric_2f1(Rat(1, 12), Rat(5, 12), Rat(1), 8);
    CHECK(h.c[0] == 1);
    CHECK(h.c[1] == Rat(5, 144));
    RatSeries zero_a = hypergeometric_2f1(Rat(0), Rat(5, 12), Rat(1), 8);
    for (size_t k = 1; k < 8; k++) CHECK(zero_a.c[k] == 0);
    CHECK_THROWS_AS(hypergeometric_2f1(Rat(1, 2), Rat(1, 2), Rat(-2), 8), InvalidParameter);

    // evaluation on [0, 1/2] against direct summation at doubled precision
    mpfr_prec_t P2 = PrecisionContext(2 * ctx.digits, ctx.series_order).prec_bits();
    RatSeries full = hypergeometric_2f1(Rat(1, 12), Rat(5, 12), Rat(1), 900);
    for (double x : {0.0, 0.11, 0.27, 0.5}) {
        Complex at(Real(x, P), Real(0L, P));
        Complex mine = hypergeometric_2f1(Rat(1, 12), Rat(5, 12), Rat(1), 300).eval(at);
        Complex oracle = full.eval(Complex(Real(x, P2), Real(0L, P2)));
        CHECK((mine - oracle).abs() < tol(ctx.digits - 5));
    }
}

TEST_CASE("fractional power series") {
    // (1 + z)^(-1/4) binomial series
    PowerSeries f = from_rat({1, 1, 0, 0, 0}, {1, 1, 1, 1, 1});
    PowerSeries g = fractional_power_series(f, Rat(-1, 4));
    CHECK(g.coeffs.c[0].re.to_double() == doctest::Approx(1));
    CHECK(g.coeffs.c[1].re.to_double() == doctest::Approx(-0.25));
    CHECK(g.coeffs.c[2].re.to_double() == doctest::Approx(5.0 / 32));

    // constant 4 to the 1/2 is 2
    PowerSeries four = from_rat({4, 0}, {1, 1});
    PowerSeries two = fractional_power_series(four, Rat(1, 2));
    CHECK((two.coeffs.c[0] - Complex(2, P)).abs() < tol(50));

    // 12 + O(z): constant term 12^(-1/4) against a direct mpfr oracle
    PowerSeries twelve = from_rat({12, 5, 3}, {1, 2, 7});
    PowerSeries r = fractional_power_series(twelve, Rat(-1, 4));
    Real want = Real(12L, P).pow(Real(-0.25, P));
    CHECK((r.coeffs.c[0].re - want).abs() < tol(50));

    // round trip f^p -> (f^p)^(1/p)
    PowerSeries rt = fractional_power_series(fractional_power_series(twelve, Rat(-3, 5)), Rat(-5, 3));
    for (size_t k = 0; k < 3; k++)
        CHECK((rt.coeffs.c[k] - twelve.coeffs.c[k]).abs() < tol(ctx.digits - 10));

    PowerSeries zero = from_rat({0, 1}, {1, 1});
    CHECK_THROWS_AS(fractional_power_series(zero, Rat(1, 2)), BranchPointAtCenter);

    // exact rational route
    RatSeries rs({Rat(1), Rat(1)});
    RatSeries rp = rs.pow(Rat(-1, 4));
    CHECK(rp.c[1] == Rat(-1, 4));
}

TEST_CASE("exact rational series compose and inverse") {
    RatSeries g({Rat(0), Rat(1), Rat(1)});  // z + z^2
    RatSeries f({Rat(1), Rat(2), Rat(3)});  // 1 + 2u + 3u^2
    RatSeries c = f.compose(g);
    CHECK(c.c[0] == 1);
    CHECK(c.c[1] == 2);
    CHECK(c.c[2] == 5);
    RatSeries inv = f.inverse();
    RatSeries one = f * inv;
    CHECK(one.c[0] == 1);
    for (size_t k = 1; k < 3; k++) CHECK(one.c[k] == 0);
}

TEST_CASE("log-series calculus") {
    // F = w^(1/2) (1 + w) log(w): primitive then derivative round trip
    LogSeries f;
    f.rho = Rat(1, 2);
    f.parts = {CSeries::zero(6, P), CSeries::zero(6, P)};
    f.parts[1].c[0] = Complex(1, P);
    f.parts[1].c[1] = Complex(1, P);
    LogSeries g = f.primitive();
    LogSeries gp = g.derivative();
    Complex w(Real(0.37, P), Real(0.11, P));
    CHECK((gp.eval(w) - f.eval(w)).abs() < tol(ctx.digits - 8));

    // monodromy of log: one loop adds 2 pi i
    LogSeries lone;
    lone.rho = 0;
    lone.parts = {CSeries::zero(3, P), CSeries::zero(3, P)};
    lone.parts[1].c[0] = Complex(1, P);
    LogSeries looped = lone.monodromy_ccw();
    Complex v0 = lone.eval(w), v1 = looped.eval(w);
    Complex want = v0 + Complex(Real(0L, P), Real::pi(P) * 2);
    CHECK((v1 - want).abs() < tol(ctx.digits - 8));

    // monodromy of w^(1/3): phase e^(2 pi i / 3)
    LogSeries cube;
    cube.rho = Rat(1, 3);
    cube.parts = {CSeries::zero(3, P)};
    cube.parts[0].c[0] = Complex(1, P);
    Complex ratio = cube.monodromy_ccw().eval(w) / cube.eval(w);
    Real ang = Real::pi(P) * 2 / 3;
    CHECK((ratio - Complex(ang.cos(), ang.sin())).abs() < tol(ctx.digits - 8));
}

TEST_CASE("tanh-sinh endpoint singularity") {
    // int_{-1}^{1} ds / sqrt(1 - s^2) = pi
    auto f = [&](const QuadNode& n) {
        Real d = (n.one_minus_s * n.one_plus_s).sqrt();
        return Complex(n.w / d, Real(0L, P));
    };
    Complex got = tanh_sinh(f, ctx.digits, P);
    CHECK((got.re - Real::pi(P)).abs() < tol(ctx.digits - 4));
    CHECK(got.im.abs() < tol(ctx.digits - 4));
}
