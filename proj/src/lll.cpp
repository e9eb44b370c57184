#include "periods/lll.hpp"

#include <gmpxx.h>

namespace periods {

namespace {

mpq_class dot_row(const std::vector<std::vector<mpq_class>>& M, const IntMat& B, size_t i, size_t j) {
    // <B_i, M_j>
    mpq_class s(0);
    for (size_t k = 0; k < B.cols(); k++)
        if (B(i, k) != 0) s += mpq_class(B(i, k)) * M[j][k];
    return s;
}

} // namespace

void lll_reduce(IntMat& B) {
    size_t n = B.rows();
    if (n <= 1) return;
    size_t dim = B.cols();
    // Gram-Schmidt data, recomputed incrementally
    std::vector<std::vector<mpq_class>> gs(n, std::vector<mpq_class>(dim));
    std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n, mpq_class(0)));
    std::vector<mpq_class> norm2(n);

    auto recompute = [&](size_t from) {
        for (size_t i = from; i < n; i++) {
            for (size_t k = 0; k < dim; k++) gs[i][k] = mpq_class(B(i, k));
            for (size_t j = 0; j < i; j++) {
                if (norm2[j] == 0) { mu[i][j] = 0; continue; }
                mu[i][j] = dot_row(gs, B, i, j) / norm2[j];
                for (size_t k = 0; k < dim; k++) gs[i][k] -= mu[i][j] * gs[j][k];
            }
            norm2[i] = 0;
            for (size_t k = 0; k < dim; k++) norm2[i] += gs[i][k] * gs[i][k];
        }
    };
    recompute(0);

    const mpq_class delta(99, 100);
    size_t k = 1;
    while (k < n) {
        // size reduction
        for (size_t j = k; j-- > 0;) {
            mpq_class m = mu[k][j];
            mpz_class q;
            mpz_class num = m.get_num(), den = m.get_den();
            // round to nearest
            mpz_class num2 = 2 * num + den, den2 = 2 * den;
            mpz_fdiv_q(q.get_mpz_t(), num2.get_mpz_t(), den2.get_mpz_t());
            if (q != 0) {
                for (size_t c = 0; c < B.cols(); c++) B(k, c) -= q * B(j, c);
                recompute(k);
            }
        }
        if (norm2[k - 1] == 0 ||
            norm2[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) {
            k++;
        } else {
            for (size_t c = 0; c < B.cols(); c++) swap(B(k, c), B(k - 1, c));
            recompute(k - 1);
            k = k > 1 ? k - 1 : 1;
        }
    }
}

IntMat integer_relations(const std::vector<Complex>& v, long rel_digits, const Int& coeff_bound) {
    size_t n = v.size();
    if (n == 0) return IntMat(0, 0);
    mpfr_prec_t p = v[0].prec();
    Real scale = Real::pow10(rel_digits, p);
    IntMat B(n, n + 2);
    for (size_t i = 0; i < n; i++) {
        B(i, i) = 1;
        B(i, n) = (v[i].re * scale).round_to_int();
        B(i, n + 1) = (v[i].im * scale).round_to_int();
    }
    lll_reduce(B);
    // accept rows whose embedded part is far below the scale and whose
    // coefficients are small
    Int thresh;
    Real t = Real::pow10(rel_digits / 3, p);
    thresh = t.round_to_int();
    std::vector<std::vector<Int>> rels;
    for (size_t i = 0; i < n; i++) {
        Int e1 = B(i, n), e2 = B(i, n + 1);
        if (abs(e1) > thresh || abs(e2) > thresh) continue;
        bool small = true, nonzero = false;
        std::vector<Int> row(n);
        for (size_t j = 0; j < n; j++) {
            row[j] = B(i, j);
            if (abs(row[j]) > coeff_bound) small = false;
            if (row[j] != 0) nonzero = true;
        }
        if (small && nonzero) rels.push_back(std::move(row));
    }
    if (rels.empty()) return IntMat(0, n);
    return Subgroup::span_rows(IntMat::from_rows(rels)).basis;
}

bool express_in_group(const Complex& target, const std::vector<Complex>& gens, long rel_digits,
                      const Int& coeff_bound, std::vector<Int>& coeffs) {
    std::vector<Complex> all;
    all.push_back(target);
    for (const auto& g : gens) all.push_back(g);
    IntMat rels = integer_relations(all, rel_digits, coeff_bound);
    for (size_t i = 0; i < rels.rows(); i++) {
        Int c0 = rels(i, 0);
        if (c0 == 1 || c0 == -1) {
            coeffs.assign(gens.size(), Int(0));
            for (size_t j = 0; j < gens.size(); j++)
                coeffs[j] = (c0 == 1) ? -rels(i, j + 1) : rels(i, j + 1);
            return true;
        }
    }
    return false;
}

} // namespace periods
