#include "periods/intmat.hpp"

#include <sstream>

namespace periods {

IntMat IntMat::from_rows(const std::vector<std::vector<Int>>& rows) {
    if (rows.empty()) return {};
    IntMat m(rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); i++) {
        if (rows[i].size() != m.cols_) throw InvalidParameter("ragged rows");
        for (size_t j = 0; j < m.cols_; j++) m(i, j) = rows[i][j];
    }
    return m;
}

IntMat operator*(const IntMat& a, const IntMat& b) {
    if (a.cols_ != b.rows_) throw InvalidParameter("matrix product shape mismatch");
    IntMat r(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; i++)
        for (size_t k = 0; k < a.cols_; k++) {
            if (a(i, k) == 0) continue;
            for (size_t j = 0; j < b.cols_; j++) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

IntMat operator+(const IntMat& a, const IntMat& b) {
    IntMat r = a;
    for (size_t i = 0; i < r.rows_; i++)
        for (size_t j = 0; j < r.cols_; j++) r(i, j) += b(i, j);
    return r;
}

IntMat operator-(const IntMat& a, const IntMat& b) {
    IntMat r = a;
    for (size_t i = 0; i < r.rows_; i++)
        for (size_t j = 0; j < r.cols_; j++) r(i, j) -= b(i, j);
    return r;
}

IntMat IntMat::transpose() const {
    IntMat r(cols_, rows_);
    for (size_t i = 0; i < rows_; i++)
        for (size_t j = 0; j < cols_; j++) r(j, i) = (*this)(i, j);
    return r;
}

IntMat IntMat::pow(unsigned k) const {
    IntMat acc = identity(rows_), base = *this;
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

std::vector<Int> IntMat::mul_vec(const std::vector<Int>& v) const {
    if (v.size() != cols_) throw InvalidParameter("matrix-vector shape mismatch");
    std::vector<Int> r(rows_, Int(0));
    for (size_t i = 0; i < rows_; i++)
        for (size_t j = 0; j < cols_; j++) r[i] += (*this)(i, j) * v[j];
    return r;
}

Int IntMat::det() const {
    if (rows_ != cols_) throw InvalidParameter("det of non-square matrix");
    size_t n = rows_;
    if (n == 0) return 1;
    IntMat m = *this;
    Int prev(1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; k++) {
        if (m(k, k) == 0) {
            size_t p = k + 1;
            while (p < n && m(p, k) == 0) p++;
            if (p == n) return 0;
            for (size_t j = 0; j < n; j++) swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; i++)
            for (size_t j = k + 1; j < n; j++)
                m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

long IntMat::rank() const {
    IntMat h = hnf(*this);
    long r = 0;
    for (size_t i = 0; i < h.rows(); i++) {
        bool nz = false;
        for (size_t j = 0; j < h.cols(); j++)
            if (h(i, j) != 0) { nz = true; break; }
        if (nz) r++;
    }
    return r;
}

IntMat IntMat::inverse_unimodular() const {
    IntMat U;
    IntMat h = hnf(*this, &U);
    if (rows_ != cols_) throw InvalidParameter("inverse of non-square matrix");
    for (size_t i = 0; i < rows_; i++)
        for (size_t j = 0; j < cols_; j++) {
            Int want = (i == j) ? 1 : 0;
            if (h(i, j) != want) throw InvalidParameter("matrix is not unimodular");
        }
    return U;
}

std::string IntMat::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < rows_; i++) {
        os << "[";
        for (size_t j = 0; j < cols_; j++) os << (j ? " " : "") << (*this)(i, j).get_str();
        os << "]";
        if (i + 1 < rows_) os << "\n";
    }
    return os.str();
}

IntMat hnf(const IntMat& A, IntMat* Uout) {
    size_t m = A.rows(), n = A.cols();
    IntMat H = A, U = IntMat::identity(m);
    size_t row = 0;
    for (size_t col = 0; col < n && row < m; col++) {
        // find a pivot; reduce the column below `row` by gcd steps
        size_t piv = row;
        bool found = false;
        for (size_t i = row; i < m; i++)
            if (H(i, col) != 0) { piv = i; found = true; break; }
        if (!found) continue;
        if (piv != row) {
            for (size_t j = 0; j < n; j++) swap(H(piv, j), H(row, j));
            for (size_t j = 0; j < m; j++) swap(U(piv, j), U(row, j));
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = row + 1; i < m; i++) {
                if (H(i, col) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), H(i, col).get_mpz_t(), H(row, col).get_mpz_t());
                for (size_t j = 0; j < n; j++) H(i, j) -= q * H(row, j);
                for (size_t j = 0; j < m; j++) U(i, j) -= q * U(row, j);
                if (H(i, col) != 0) {
                    for (size_t j = 0; j < n; j++) swap(H(i, j), H(row, j));
                    for (size_t j = 0; j < m; j++) swap(U(i, j), U(row, j));
                    changed = true;
                }
            }
        }
        if (H(row, col) < 0) {
            for (size_t j = 0; j < n; j++) H(row, j) = -H(row, j);
            for (size_t j = 0; j < m; j++) U(row, j) = -U(row, j);
        }
        // reduce entries above the pivot into [0, pivot)
        for (size_t i = 0; i < row; i++) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), H(i, col).get_mpz_t(), H(row, col).get_mpz_t());
            if (q == 0) continue;
            for (size_t j = 0; j < n; j++) H(i, j) -= q * H(row, j);
            for (size_t j = 0; j < m; j++) U(i, j) -= q * U(row, j);
        }
        row++;
    }
    if (Uout) *Uout = U;
    return H;
}

void snf(const IntMat& A, IntMat& D, IntMat& U, IntMat& V) {
    size_t m = A.rows(), n = A.cols();
    D = A;
    U = IntMat::identity(m);
    V = IntMat::identity(n);
    auto row_op = [&](size_t i, size_t k, const Int& q) { // row_i -= q row_k
        for (size_t j = 0; j < n; j++) D(i, j) -= q * D(k, j);
        for (size_t j = 0; j < m; j++) U(i, j) -= q * U(k, j);
    };
    auto col_op = [&](size_t j, size_t k, const Int& q) { // col_j -= q col_k
        for (size_t i = 0; i < m; i++) D(i, j) -= q * D(i, k);
        for (size_t i = 0; i < n; i++) V(i, j) -= q * V(i, k);
    };
    auto row_swap = [&](size_t i, size_t k) {
        for (size_t j = 0; j < n; j++) swap(D(i, j), D(k, j));
        for (size_t j = 0; j < m; j++) swap(U(i, j), U(k, j));
    };
    auto col_swap = [&](size_t j, size_t k) {
        for (size_t i = 0; i < m; i++) swap(D(i, j), D(i, k));
        for (size_t i = 0; i < n; i++) swap(V(i, j), V(i, k));
    };
    size_t t = 0;
    while (t < m && t < n) {
        // locate a nonzero entry
        size_t pi = t, pj = t;
        bool found = false;
        for (size_t i = t; i < m && !found; i++)
            for (size_t j = t; j < n && !found; j++)
                if (D(i, j) != 0) { pi = i; pj = j; found = true; }
        if (!found) break;
        row_swap(t, pi);
        col_swap(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = t + 1; i < m; i++) {
                if (D(i, t) == 0) continue;
                Int q = D(i, t) / D(t, t);
                row_op(i, t, q);
                if (D(i, t) != 0) { row_swap(t, i); clean = false; }
            }
            for (size_t j = t + 1; j < n; j++) {
                if (D(t, j) == 0) continue;
                Int q = D(t, j) / D(t, t);
                col_op(j, t, q);
                if (D(t, j) != 0) { col_swap(t, j); clean = false; }
            }
            if (clean) {
                // enforce divisibility d_t | D(i,j)
                for (size_t i = t + 1; i < m && clean; i++)
                    for (size_t j = t + 1; j < n && clean; j++)
                        if (D(i, j) % D(t, t) != 0) {
                            row_op(t, i, Int(-1)); // add row i to row t
                            clean = false;
                        }
            }
        }
        if (D(t, t) < 0) {
            for (size_t j = 0; j < n; j++) D(t, j) = -D(t, j);
            for (size_t j = 0; j < m; j++) U(t, j) = -U(t, j);
        }
        t++;
    }
}

IntMat kernel_rows(const IntMat& A) {
    IntMat U;
    IntMat H = hnf(A, &U);
    std::vector<std::vector<Int>> ker;
    for (size_t i = 0; i < H.rows(); i++) {
        bool zero = true;
        for (size_t j = 0; j < H.cols(); j++)
            if (H(i, j) != 0) { zero = false; break; }
        if (zero) {
            std::vector<Int> row(U.cols());
            for (size_t j = 0; j < U.cols(); j++) row[j] = U(i, j);
            ker.push_back(std::move(row));
        }
    }
    if (ker.empty()) return IntMat(0, A.rows());
    IntMat K = IntMat::from_rows(ker);
    IntMat KH = hnf(K);
    // drop zero rows (there are none: kernel rows are independent)
    std::vector<std::vector<Int>> out;
    for (size_t i = 0; i < KH.rows(); i++) {
        bool zero = true;
        for (size_t j = 0; j < KH.cols(); j++)
            if (KH(i, j) != 0) { zero = false; break; }
        if (!zero) {
            std::vector<Int> row(KH.cols());
            for (size_t j = 0; j < KH.cols(); j++) row[j] = KH(i, j);
            out.push_back(std::move(row));
        }
    }
    return out.empty() ? IntMat(0, A.rows()) : IntMat::from_rows(out);
}

Subgroup Subgroup::span_rows(const IntMat& rows) {
    IntMat H = hnf(rows);
    std::vector<std::vector<Int>> nz;
    for (size_t i = 0; i < H.rows(); i++) {
        bool zero = true;
        for (size_t j = 0; j < H.cols(); j++)
            if (H(i, j) != 0) { zero = false; break; }
        if (!zero) {
            std::vector<Int> row(H.cols());
            for (size_t j = 0; j < H.cols(); j++) row[j] = H(i, j);
            nz.push_back(std::move(row));
        }
    }
    Subgroup s;
    s.ambient = rows.cols();
    s.basis = nz.empty() ? IntMat(0, rows.cols()) : IntMat::from_rows(nz);
    return s;
}

bool Subgroup::contains(const std::vector<Int>& v) const {
    // reduce v against the HNF rows
    std::vector<Int> w = v;
    for (size_t i = 0; i < basis.rows(); i++) {
        size_t piv = 0;
        while (piv < ambient && basis(i, piv) == 0) piv++;
        if (piv == ambient) continue;
        if (w[piv] % basis(i, piv) != 0) return false;
        Int q = w[piv] / basis(i, piv);
        for (size_t j = 0; j < ambient; j++) w[j] -= q * basis(i, j);
    }
    for (const auto& x : w)
        if (x != 0) return false;
    return true;
}

bool Subgroup::contains(const Subgroup& other) const {
    for (size_t i = 0; i < other.basis.rows(); i++) {
        std::vector<Int> v(ambient);
        for (size_t j = 0; j < ambient; j++) v[j] = other.basis(i, j);
        if (!contains(v)) return false;
    }
    return true;
}

Subgroup operator+(const Subgroup& a, const Subgroup& b) {
    if (a.ambient != b.ambient) throw InvalidParameter("subgroup sum ambient mismatch");
    IntMat stacked(a.basis.rows() + b.basis.rows(), a.ambient);
    for (size_t i = 0; i < a.basis.rows(); i++)
        for (size_t j = 0; j < a.ambient; j++) stacked(i, j) = a.basis(i, j);
    for (size_t i = 0; i < b.basis.rows(); i++)
        for (size_t j = 0; j < a.ambient; j++) stacked(a.basis.rows() + i, j) = b.basis(i, j);
    return Subgroup::span_rows(stacked);
}

Subgroup hnf_kernel(const IntMat& M) {
    IntMat K = kernel_rows(M);
    Subgroup s;
    s.ambient = M.rows();
    s.basis = K;
    return s;
}

Subgroup saturate(const Subgroup& H) {
    if (H.basis.rows() == 0) return H;
    // Double orthogonal complement: K = integer vectors orthogonal to the
    // rows of B; the saturation is the integer vectors orthogonal to K.
    // kernel_rows output is saturated, so one round trip suffices.
    IntMat K = kernel_rows(H.basis.transpose());
    if (K.rows() == 0) return Subgroup::full(H.ambient);
    Subgroup s = hnf_kernel(K.transpose());
    s.ambient = H.ambient;
    return s;
}

Subgroup image_rows(const IntMat& A) { return Subgroup::span_rows(A); }

IntMat complete_basis(const Subgroup& H) {
    size_t n = H.ambient, r = H.basis.rows();
    if (r == 0) return IntMat::identity(n);
    IntMat D, U, V;
    snf(H.basis, D, U, V);
    for (size_t i = 0; i < r; i++)
        if (D(i, i) != 1)
            throw InvalidParameter("complete_basis requires a saturated subgroup");
    // H.basis = U^{-1} D V^{-1}? snf computes D = U A V, so A = U^{-1} D V^{-1};
    // row span of A = row span of D V^{-1} = first r rows of V^{-1}.
    IntMat Vinv = V.inverse_unimodular();
    return Vinv;
}

bool solve_left(const IntMat& A, const std::vector<Int>& b, std::vector<Int>& x) {
    // x A = b  <=>  A^T x^T = b^T; use SNF of A: D = U A V =>
    // x A = b  <=>  (x U^{-1}) D = b V. Solve y D = c componentwise.
    IntMat D, U, V;
    snf(A, D, U, V);
    std::vector<Int> c(A.cols(), Int(0));
    for (size_t j = 0; j < A.cols(); j++)
        for (size_t k = 0; k < A.cols(); k++) c[j] += b[k] * V(k, j);
    std::vector<Int> y(A.rows(), Int(0));
    size_t t = std::min(A.rows(), A.cols());
    for (size_t j = 0; j < A.cols(); j++) {
        if (j < t && D(j, j) != 0) {
            if (c[j] % D(j, j) != 0) return false;
            y[j] = c[j] / D(j, j);
        } else if (c[j] != 0) {
            return false;
        }
    }
    // x = y U
    x.assign(A.rows(), Int(0));
    for (size_t j = 0; j < A.rows(); j++)
        for (size_t k = 0; k < A.rows(); k++) x[j] += y[k] * U(k, j);
    return true;
}

} // namespace periods
