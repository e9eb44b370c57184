#include <doctest.h>

#include "periods/catalog.hpp"

using namespace periods;

TEST_CASE("twelve examples with the stated counts") {
    auto all = list_examples();
    CHECK(all.size() == 12);
    int t1 = 0, t2 = 0, t3 = 0;
    for (const auto& ex : all) {
        if (ex.type == 'I') t1++;
        if (ex.type == '2') t2++;
        if (ex.type == '3') t3++;
    }
    CHECK(t1 == 4);
    CHECK(t2 == 5);
    CHECK(t3 == 3);
    // X1(8): k = 2 hence 3 weights; X1(10): k = 3 and 10-component vectors
    ExampleSpec x8 = load_example("x1-8");
    CHECK(x8.k == 2);
    CHECK(2 * x8.k - 1 == 3);
    CHECK(x8.rhat.size() == 3);
    CHECK(x8.rhat[0].size() == 6);
    ExampleSpec x10 = load_example("x1-10");
    CHECK(x10.k == 3);
    CHECK(x10.rhat.size() == 5);
    CHECK(x10.rhat[0].size() == 10);
}

TEST_CASE("catalog fiber lists match classification") {
    for (const auto& ex : list_examples()) {
        // merge the classified fibers of both surfaces and compare with the
        // reference list stored in the data file
        auto merged = ex.fibers;
        REQUIRE(!merged.empty());
        long total1 = 0, total2 = 0;
        for (const auto& f : merged) {
            total1 += f.n1;
            total2 += f.n2;
        }
        CHECK(total1 == 12 * ex.k);
        CHECK(total2 == 12 * ex.k);
    }
}

TEST_CASE("modular combination data reproduces the reference bases") {
    mpfr_prec_t P = PrecisionContext(60, 20).prec_bits();
    Real tol = Real::pow10(-27, P);
    for (const auto& ex : list_examples()) {
        if (!ex.modular || ex.ref_xhat.empty()) continue;
        Complex pw1(Real(ex.modular->pw1_re, P), Real(ex.modular->pw1_im, P));
        Complex pw2(Real(ex.modular->pw2_re, P), Real(ex.modular->pw2_im, P));
        REQUIRE(ex.modular->combos.size() == ex.ref_xhat.size());
        for (size_t i = 0; i < ex.modular->combos.size(); i++) {
            const auto& c = ex.modular->combos[i];
            Complex alpha(Real(c.a_re, P), Real(c.a_im, P));
            Complex beta(Real(c.b_re, P), Real(c.b_im, P));
            Complex v = alpha * pw1 + beta * pw2;
            Real best(1L, P);
            for (const auto& r : ex.ref_xhat) {
                Complex rv = r.value(P);
                Real d1 = (v - rv).abs(), d2 = (v + rv).abs();
                if (d1 < best) best = d1;
                if (d2 < best) best = d2;
            }
            CHECK(best < tol);
        }
    }
}

TEST_CASE("isogenous pair shares reference lattices") {
    ExampleSpec a = load_example("typeI-1128");
    ExampleSpec b = load_example("typeI-2244");
    REQUIRE(a.ref_xhat.size() == b.ref_xhat.size());
    for (size_t i = 0; i < a.ref_xhat.size(); i++) {
        CHECK(a.ref_xhat[i].re == b.ref_xhat[i].re);
        CHECK(a.ref_xhat[i].im == b.ref_xhat[i].im);
    }
}

TEST_CASE("section 4 reference tables satisfy their identities") {
    mpfr_prec_t P = PrecisionContext(60, 20).prec_bits();
    Section4Tables t = load_section4_tables();
    REQUIRE(t.q.size() == 5);
    REQUIRE(t.M.size() == 5);
    // M_e M_d M_c M_b M_a = I
    IntMat prod = t.M[4] * t.M[3] * t.M[2] * t.M[1] * t.M[0];
    CHECK(prod == IntMat::identity(4));
    IntMat tp = t.Theta[0] * t.Theta[1] * t.Theta[2] * t.Theta[3] * t.Theta[4];
    CHECK(tp == IntMat::identity(4));
    // sum of r vectors vanishes at table precision
    for (size_t c = 0; c < 4; c++) {
        Complex s(P);
        for (size_t j = 0; j < 5; j++) s += t.r[j][c].value(P);
        CHECK(s.abs() < Real::pow10(-36, P));
    }
}

TEST_CASE("surface record parser") {
    WeierstrassSurface s = parse_surface_record("k 1\ng2 12 24 0 -48 12\n"
                                                "g3 8 24 12 56 48 -48 8\n");
    CHECK(s.k == 1);
    CHECK(s.fibers.size() == 4);
    CHECK_THROWS_AS(parse_surface_record("k 1\n"), InputError);
}
