#ifndef PERIODS_INTMAT_HPP
#define PERIODS_INTMAT_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

#include "periods/errors.hpp"

namespace periods {

using Int = mpz_class;

// Dense exact integer matrix, row-major. Sized for rank-4 monodromy work and
// small relation lattices, so the algorithms favor clarity over asymptotics.
class IntMat {
  public:
    IntMat() = default;
    IntMat(size_t r, size_t c) : rows_(r), cols_(c), a_(r * c, Int(0)) {}
    static IntMat identity(size_t n) {
        IntMat m(n, n);
        for (size_t i = 0; i < n; i++) m(i, i) = 1;
        return m;
    }
    static IntMat from_rows(const std::vector<std::vector<Int>>& rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Int& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

    friend IntMat operator*(const IntMat& a, const IntMat& b);
    friend IntMat operator+(const IntMat& a, const IntMat& b);
    friend IntMat operator-(const IntMat& a, const IntMat& b);
    friend bool operator==(const IntMat& a, const IntMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    IntMat transpose() const;
    IntMat pow(unsigned k) const;
    Int det() const;                       // Bareiss
    long rank() const;                     // rational rank
    IntMat inverse_unimodular() const;     // requires |det| = 1

    std::vector<Int> mul_vec(const std::vector<Int>& v) const;

    std::string str() const;

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// Row-style Hermite normal form H = U A with U unimodular; returns H and
// optionally U. Zero rows of H are moved to the bottom; pivots positive,
// entries above a pivot reduced into [0, pivot).
IntMat hnf(const IntMat& A, IntMat* U = nullptr);

// Smith normal form D = U A V.
void snf(const IntMat& A, IntMat& D, IntMat& U, IntMat& V);

// Basis (as rows, HNF-canonical) of { x : x A = 0 }.
IntMat kernel_rows(const IntMat& A);

// Subgroup of Z^n given by an HNF row basis; two equal subgroups compare
// equal representation-wise.
struct Subgroup {
    size_t ambient = 0;
    IntMat basis; // HNF rows, full row rank

    static Subgroup zero(size_t n) { return {n, IntMat(0, n)}; }
    static Subgroup full(size_t n) { return {n, IntMat::identity(n)}; }
    static Subgroup span_rows(const IntMat& rows);

    long rank() const { return static_cast<long>(basis.rows()); }
    bool contains(const std::vector<Int>& v) const;
    bool contains(const Subgroup& other) const;
    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.ambient == b.ambient && a.basis == b.basis;
    }
    friend Subgroup operator+(const Subgroup& a, const Subgroup& b);
};

// HNF basis of the integer row kernel of M (spec: hnf_kernel).
Subgroup hnf_kernel(const IntMat& M);

// Smallest subgroup containing H with torsion-free quotient, via SNF.
Subgroup saturate(const Subgroup& H);

// Image (row span) of A.
Subgroup image_rows(const IntMat& A);

// Extend a saturated subgroup basis to a basis of Z^n; returns V in GL_n(Z)
// whose first rank(H) rows span H.
IntMat complete_basis(const Subgroup& H);

// Solve x A = b over Z (row vector convention); returns false if no integer
// solution exists; any one solution is produced.
bool solve_left(const IntMat& A, const std::vector<Int>& b, std::vector<Int>& x);

} // namespace periods

#endif
