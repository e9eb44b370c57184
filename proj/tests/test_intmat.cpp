#include <doctest.h>

#include "periods/intmat.hpp"
#include "periods/lll.hpp"
#include "periods/rational.hpp"
#include "periods/context.hpp"

using namespace periods;

namespace {

IntMat mat(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Int>> r;
    for (const auto& row : rows) {
        std::vector<Int> v;
        for (long x : row) v.emplace_back(x);
        r.push_back(std::move(v));
    }
    return IntMat::from_rows(r);
}

// independent rational rank by fraction-full Gaussian elimination
long rational_rank(const IntMat& A) {
    size_t m = A.rows(), n = A.cols();
    std::vector<std::vector<mpq_class>> M(m, std::vector<mpq_class>(n));
    for (size_t i = 0; i < m; i++)
        for (size_t j = 0; j < n; j++) M[i][j] = mpq_class(A(i, j));
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; col++) {
        size_t pr = row;
        while (pr < m && M[pr][col] == 0) pr++;
        if (pr == m) continue;
        std::swap(M[pr], M[row]);
        mpq_class inv = 1 / M[row][col];
        for (size_t j = 0; j < n; j++) M[row][j] *= inv;
        for (size_t i = 0; i < m; i++)
            if (i != row && M[i][col] != 0) {
                mpq_class f = M[i][col];
                for (size_t j = 0; j < n; j++) M[i][j] -= f * M[row][j];
            }
        row++;
    }
    return static_cast<long>(row);
}

} // namespace

TEST_CASE("hnf kernel basics") {
    // sum map 2 -> 1: kernel {(1, -1)}
    Subgroup k = hnf_kernel(mat({{1}, {1}}));
    REQUIRE(k.basis.rows() == 1);
    CHECK(((k.basis(0, 0) == 1 && k.basis(0, 1) == -1) ||
           (k.basis(0, 0) == -1 && k.basis(0, 1) == 1)));
    // identity: trivial kernel
    CHECK(hnf_kernel(IntMat::identity(3)).basis.rows() == 0);
}

TEST_CASE("kernel of random integer matrices matches rational-rank oracle") {
    unsigned long state = 99;
    auto rnd = [&]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<long>((state >> 33) % 11) - 5;
    };
    for (int trial = 0; trial < 20; trial++) {
        IntMat A(6, 4);
        for (size_t i = 0; i < 6; i++)
            for (size_t j = 0; j < 4; j++) A(i, j) = rnd();
        Subgroup K = hnf_kernel(A);
        // every kernel row annihilates A
        for (size_t i = 0; i < K.basis.rows(); i++) {
            for (size_t j = 0; j < 4; j++) {
                Int s(0);
                for (size_t t = 0; t < 6; t++) s += K.basis(i, t) * A(t, j);
                CHECK(s == 0);
            }
        }
        // dimension agrees with rank-nullity over Q (independent elimination)
        CHECK(static_cast<long>(K.basis.rows()) == 6 - rational_rank(A));
    }
}

TEST_CASE("saturation") {
    Subgroup h{2, mat({{2, 4}})};
    Subgroup s = saturate(h);
    REQUIRE(s.basis.rows() == 1);
    CHECK(s.basis(0, 0) == 1);
    CHECK(s.basis(0, 1) == 2);
    // idempotence
    CHECK(saturate(s) == s);
    // im((Theta-I)^2) for (n,m)=(2,3): <(12,0,0,0)> saturates to <(1,0,0,0)>
    Subgroup h2{4, mat({{12, 0, 0, 0}})};
    Subgroup s2 = saturate(h2);
    REQUIRE(s2.basis.rows() == 1);
    CHECK(s2.basis(0, 0) == 1);
    CHECK(s2.basis(0, 1) == 0);
}

TEST_CASE("smith normal form and solve") {
    IntMat A = mat({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}});
    IntMat D, U, V;
    snf(A, D, U, V);
    CHECK(U * A * V == D);
    // diagonal divisibility
    CHECK(D(0, 0) != 0);
    CHECK(D(1, 1) % D(0, 0) == 0);

    std::vector<Int> b{Int(2), Int(4), Int(4)};
    std::vector<Int> x;
    REQUIRE(solve_left(A, b, x));
    std::vector<Int> chk(3, Int(0));
    for (size_t j = 0; j < 3; j++)
        for (size_t i = 0; i < 3; i++) chk[j] += x[i] * A(i, j);
    for (size_t j = 0; j < 3; j++) CHECK(chk[j] == b[j]);
}

TEST_CASE("complete_basis extends a saturated subgroup") {
    Subgroup h = saturate(Subgroup{4, mat({{1, 2, 3, 4}, {0, 5, 1, 2}})});
    IntMat V = complete_basis(h);
    Int det = V.det();
    CHECK((det == 1 || det == -1));
    // first rows span h
    Subgroup first = Subgroup::span_rows(mat({{0, 0, 0, 0}}));
    IntMat top(h.basis.rows(), 4);
    for (size_t i = 0; i < h.basis.rows(); i++)
        for (size_t j = 0; j < 4; j++) top(i, j) = V(i, j);
    CHECK(Subgroup::span_rows(top) == h);
    (void)first;
}

TEST_CASE("integer relations by LLL") {
    mpfr_prec_t P = PrecisionContext(80, 20).prec_bits();
    // v = (1, 1/3, i): relations of rank 1: 1 - 3*(1/3) = 0
    std::vector<Complex> v{Complex(Real(1L, P)), Complex(Real(Rat(1, 3), P)), Complex::i(P)};
    IntMat rels = integer_relations(v, 60, Int(1000));
    REQUIRE(rels.rows() == 1);
    CHECK(rels(0, 2) == 0);
    // relation proportional to (1, -3, 0) (either sign)
    CHECK(rels(0, 0) * 3 == -rels(0, 1) * 1);

    std::vector<Int> coeffs;
    CHECK(express_in_group(Complex(Real(Rat(5, 3), P)), {v[0], v[1]}, 60, Int(1000), coeffs));
    CHECK(coeffs[0] * 3 + coeffs[1] == 5); // 5/3 = a*1 + b/3
}
