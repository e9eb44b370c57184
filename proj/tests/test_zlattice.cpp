#include <doctest.h>

#include "periods/context.hpp"
#include "periods/zlattice.hpp"
#include "periods/rational.hpp"

using namespace periods;

namespace {

IntMat mk(std::initializer_list<long> v) {
    IntMat m(4, 4);
    auto it = v.begin();
    for (size_t i = 0; i < 4; i++)
        for (size_t j = 0; j < 4; j++) m(i, j) = *it++;
    return m;
}

// Brute-force oracles built from first principles via Smith normal form,
// independent of the hnf-based helpers inside the implementation.
Subgroup oracle_col_kernel(const IntMat& A) {
    IntMat D, U, V;
    snf(A, D, U, V);
    std::vector<std::vector<Int>> rows;
    size_t t = std::min(A.rows(), A.cols());
    for (size_t j = 0; j < A.cols(); j++) {
        bool zero_col = j >= t || D(j, j) == 0;
        if (!zero_col) continue;
        std::vector<Int> x(A.cols());
        for (size_t i = 0; i < A.cols(); i++) x[i] = V(i, j);
        rows.push_back(std::move(x));
    }
    if (rows.empty()) return Subgroup::zero(A.cols());
    return Subgroup::span_rows(IntMat::from_rows(rows));
}

Subgroup oracle_col_image(const IntMat& A) {
    std::vector<std::vector<Int>> rows;
    for (size_t j = 0; j < A.cols(); j++) {
        std::vector<Int> x(A.rows());
        for (size_t i = 0; i < A.rows(); i++) x[i] = A(i, j);
        rows.push_back(std::move(x));
    }
    return Subgroup::span_rows(IntMat::from_rows(rows));
}

Subgroup oracle_saturate(const Subgroup& H) {
    if (H.basis.rows() == 0) return H;
    IntMat D, U, V;
    snf(H.basis, D, U, V);
    IntMat Vinv = V.inverse_unimodular();
    std::vector<std::vector<Int>> rows;
    for (size_t i = 0; i < H.basis.rows(); i++) {
        std::vector<Int> x(H.ambient);
        for (size_t j = 0; j < H.ambient; j++) x[j] = Vinv(i, j);
        rows.push_back(std::move(x));
    }
    return Subgroup::span_rows(IntMat::from_rows(rows));
}

} // namespace

TEST_CASE("vanishing cycles on the local model for all small (n,m)") {
    for (long n = 0; n <= 10; n++)
        for (long m = 0; m <= 10; m++) {
            IntMat T = local_model_theta(n, m);
            IntMat A = T - IntMat::identity(4);
            IntMat A2 = A * A;
            long r2 = 0;
            {
                IntMat D, U, V;
                snf(A2, D, U, V);
                for (size_t i = 0; i < 4; i++)
                    if (D(i, i) != 0) r2++;
            }
            Subgroup want_x = oracle_col_kernel(A.pow(static_cast<unsigned>(1 + r2)));
            Subgroup got_x = vanishing_cycles_X(T, n, m);
            CHECK(got_x == want_x);
            if (n * m != 0) CHECK(got_x == oracle_col_kernel(A2));
            else CHECK(got_x == oracle_col_kernel(A));

            if (n * m == 0 && n + m != 1) continue; // outside the small-resolution formula
            Subgroup got_xh = vanishing_cycles_Xhat(T, n, m);
            Subgroup want_xh = oracle_col_image(A) + oracle_saturate(oracle_col_image(A2));
            CHECK(got_xh == want_xh);
            Subgroup im = oracle_col_image(A);
            Subgroup sat = oracle_saturate(im);
            CHECK(got_xh.contains(im));
            CHECK(sat.contains(got_xh));
            CHECK(got_x.contains(sat));
            if (n > 0 && m > 0) {
                Int d;
                mpz_gcd(d.get_mpz_t(), Int(n).get_mpz_t(), Int(m).get_mpz_t());
                bool strict1 = !(im == got_xh);
                bool strict2 = !(got_xh == sat);
                CHECK(strict1 == (d != 1));
                CHECK(strict2 == (d != 1));
            }
        }
}

TEST_CASE("vanishing cycle formulas match the stated special cases") {
    IntMat T11 = local_model_theta(1, 1);
    Subgroup x11 = vanishing_cycles_X(T11, 1, 1);
    IntMat want_rows(3, 4);
    want_rows(0, 0) = 1;
    want_rows(1, 1) = 1;
    want_rows(2, 2) = 1;
    CHECK(x11 == Subgroup::span_rows(want_rows));
    Subgroup xh11 = vanishing_cycles_Xhat(T11, 1, 1);
    IntMat rows2(2, 4);
    rows2(0, 0) = 1;
    rows2(1, 1) = 1;
    rows2(1, 2) = 1;
    CHECK(xh11 == Subgroup::span_rows(rows2));

    Subgroup xh23 = vanishing_cycles_Xhat(local_model_theta(2, 3), 2, 3);
    IntMat rows3(2, 4);
    rows3(0, 0) = 1;
    rows3(1, 1) = 2;
    rows3(1, 2) = 3;
    CHECK(xh23 == Subgroup::span_rows(rows3));

    IntMat T01 = local_model_theta(0, 1);
    Subgroup x01 = vanishing_cycles_X(T01, 0, 1);
    Subgroup xh01 = vanishing_cycles_Xhat(T01, 0, 1);
    CHECK(x01 == xh01);
    IntMat rows01(2, 4);
    rows01(0, 0) = 1;
    rows01(1, 2) = 1;
    CHECK(x01 == Subgroup::span_rows(rows01));

    CHECK(vanishing_cycles_X(IntMat::identity(4), 0, 0) == Subgroup::full(4));
    CHECK_THROWS_AS(vanishing_cycles_Xhat(IntMat::identity(4), 0, 0), OutsideSchoenHypotheses);
    CHECK_THROWS_AS(vanishing_cycles_Xhat(local_model_theta(0, 2), 0, 2),
                    OutsideSchoenHypotheses);
    CHECK_THROWS_AS(vanishing_cycles_X(local_model_theta(1, 2), 2, 2), NotLocalModel);
}

TEST_CASE("vanishing cycles are conjugation covariant") {
    IntMat P = mk({1, 2, 0, 1, 0, 1, 1, 0, 0, 0, 1, 3, 0, 0, 0, 1});
    IntMat Pi = P.inverse_unimodular();
    IntMat T = P * local_model_theta(2, 3) * Pi;
    auto conj = local_model_conjugator(T, 2, 3);
    REQUIRE(conj.has_value());
    Subgroup got = vanishing_cycles_Xhat(T, 2, 3);
    Subgroup model = vanishing_cycles_Xhat(local_model_theta(2, 3), 2, 3);
    std::vector<std::vector<Int>> rows;
    for (size_t i = 0; i < model.basis.rows(); i++) {
        std::vector<Int> v(4, Int(0));
        for (size_t c = 0; c < 4; c++)
            for (size_t j = 0; j < 4; j++) v[c] += P(c, j) * model.basis(i, j);
        rows.push_back(std::move(v));
    }
    CHECK(got == Subgroup::span_rows(IntMat::from_rows(rows)));
}

TEST_CASE("lattice recovery from values") {
    mpfr_prec_t P = PrecisionContext(120, 20).prec_bits();
    auto C = [&](double re, double im) { return Complex(Real(re, P), Real(im, P)); };
    PeriodLattice lat = lattice_from_values(
        {C(1, 0), Complex(Real(Rat(1, 3), P), Real(0L, P)), C(0, 1)}, 90);
    CHECK(lat.rank == 2);
    REQUIRE(lat.basis.size() == 2);
    CHECK((lat.basis[0].re - Real(Rat(1, 3), P)).abs() < Real::pow10(-80, P));
    CHECK(lat.basis[0].im.abs() < Real::pow10(-80, P));
    CHECK((lat.basis[1].im - Real(1L, P)).abs() < Real::pow10(-80, P));

    Real a("9.33008402224084314607567710247", P);
    Real b("5.78079155417729576440335389298", P);
    PeriodLattice l2 = lattice_from_values(
        {Complex(a * 2, Real(0L, P)), Complex(a, Real(0L, P)),
         Complex(Real(0L, P), b * 4), Complex(Real(0L, P), b)},
        25);
    CHECK(l2.rank == 2);
    CHECK((l2.basis[0].re - a).abs() < Real::pow10(-20, P));
    CHECK((l2.basis[1].im - b).abs() < Real::pow10(-20, P));

    Complex mu(Real(1.25, P), Real(-0.5, P));
    std::vector<Complex> scaled;
    for (auto v : {Complex(a * 2, Real(0L, P)), Complex(a, Real(0L, P)),
                   Complex(Real(0L, P), b * 4), Complex(Real(0L, P), b)})
        scaled.push_back(v * mu);
    PeriodLattice l3 = lattice_from_values(scaled, 25);
    CHECK(l3.rank == 2);
    for (const auto& v : l3.basis) {
        std::vector<Int> coeffs;
        CHECK(express_in_group(v, {l2.basis[0] * mu, l2.basis[1] * mu}, 25, Int("10000000000"),
                               coeffs));
    }
}

TEST_CASE("lattice index") {
    mpfr_prec_t P = PrecisionContext(120, 20).prec_bits();
    Real a("9.33008402224084314607567710247", P);
    Real b("5.78079155417729576440335389298", P);
    PeriodLattice sup;
    sup.rank = 2;
    sup.basis = {Complex(a, Real(0L, P)), Complex(Real(0L, P), b)};
    PeriodLattice sub;
    sub.rank = 2;
    sub.basis = {Complex(a * 2, Real(0L, P)), Complex(Real(0L, P), b * 4)};
    CHECK(lattice_index(sub, sup, 80) == 8);
    CHECK(lattice_index(sup, sup, 80) == 1);
    CHECK(lattice_equal(sup, sup, 80));
    CHECK(!lattice_equal(sub, sup, 80));
    PeriodLattice bad = sub;
    bad.basis[0] = Complex(a * Real(0.5, P), Real(0L, P)) + Complex(Real(0L, P), b * Real(0.125, P));
    CHECK_THROWS_AS(lattice_index(bad, sup, 80), NotASublattice);
}
