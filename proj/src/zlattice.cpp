#include "periods/zlattice.hpp"

#include "periods/rational.hpp"

#include <algorithm>

namespace periods {

IntMat local_model_theta(long n, long m) {
    IntMat t = IntMat::identity(4);
    t(0, 1) = m;
    t(0, 2) = n;
    t(0, 3) = n * m;
    t(1, 3) = n;
    t(2, 3) = m;
    return t;
}

namespace {

bool verify_conjugator(const IntMat& T, const IntMat& P, long n, long m) {
    Int det = P.det();
    if (det != 1 && det != -1) return false;
    return T * P == P * local_model_theta(n, m);
}

// nm >= 1: columns p1..p4 with T p1 = p1, T p2 = p2 + m p1, T p3 = p3 + n p1,
// T p4 = p4 + n p2 + m p3 + n m p1. The solution family of (p2, p3) shifts by
// the kernel of A in a way that moves det(P) affinely, so det = +-1 is solved
// exactly with an extended gcd rather than searched.
std::optional<IntMat> conjugator_nm(const IntMat& T, long n, long m) {
    IntMat A = T - IntMat::identity(4);
    IntMat A2 = A * A;
    Subgroup s = saturate(image_rows(A2.transpose()));
    if (s.rank() != 1) return std::nullopt;
    for (int sign = 0; sign < 2; sign++) {
        std::vector<Int> p1(4);
        for (size_t j = 0; j < 4; j++) p1[j] = sign ? -s.basis(0, j) : s.basis(0, j);
        // p4: A^2 p4 = 2 n m p1
        std::vector<Int> rhs4(4);
        for (size_t i = 0; i < 4; i++) rhs4[i] = 2 * n * m * p1[i];
        std::vector<Int> p4;
        if (!solve_left(A2.transpose(), rhs4, p4)) continue;
        // v = A p4 - n m p1
        std::vector<Int> v(4, Int(0));
        for (size_t i = 0; i < 4; i++) {
            for (size_t j = 0; j < 4; j++) v[i] += A(i, j) * p4[j];
            v[i] -= n * m * p1[i];
        }
        // coupled system for x = (p2, p3): A p2 = m p1; A p3 = n p1;
        // n p2 + m p3 = v  (12 equations, 8 unknowns)
        IntMat M(12, 8);
        std::vector<Int> b(12, Int(0));
        for (size_t i = 0; i < 4; i++) {
            for (size_t j = 0; j < 4; j++) {
                M(i, j) = A(i, j);
                M(4 + i, 4 + j) = A(i, j);
            }
            M(8 + i, i) = n;
            M(8 + i, 4 + i) = m;
            b[i] = m * p1[i];
            b[4 + i] = n * p1[i];
            b[8 + i] = v[i];
        }
        std::vector<Int> x;
        if (!solve_left(M.transpose(), b, x)) continue;
        IntMat hom = kernel_rows(M.transpose()); // rows h in Z^8 with M h = 0
        auto build = [&](const std::vector<Int>& y) {
            IntMat P(4, 4);
            for (size_t i = 0; i < 4; i++) {
                P(i, 0) = p1[i];
                P(i, 1) = y[i];
                P(i, 2) = y[4 + i];
                P(i, 3) = p4[i];
            }
            return P;
        };
        Int det0 = build(x).det();
        // det is affine in the kernel shifts (quadratic terms cancel since the
        // shift directions live in the 2-dim kernel of A alongside p1)
        std::vector<Int> delta(hom.rows());
        for (size_t h = 0; h < hom.rows(); h++) {
            std::vector<Int> y = x;
            for (size_t j = 0; j < 8; j++) y[j] += hom(h, j);
            delta[h] = build(y).det() - det0;
        }
        for (Int target : {Int(1), Int(-1)}) {
            // solve det0 + sum t_h delta_h = target with Bezout coefficients
            Int need = target - det0;
            std::vector<Int> bez(hom.rows(), Int(0));
            Int cur(0);
            for (size_t h = 0; h < hom.rows(); h++) {
                Int gg, u, w;
                mpz_gcdext(gg.get_mpz_t(), u.get_mpz_t(), w.get_mpz_t(), cur.get_mpz_t(),
                           delta[h].get_mpz_t());
                for (size_t k = 0; k < h; k++) bez[k] *= u;
                bez[h] = w;
                cur = gg;
            }
            if (cur == 0) {
                if (need != 0) continue;
            } else if (need % cur != 0) {
                continue;
            }
            std::vector<Int> y = x;
            if (cur != 0) {
                Int scale = need / cur;
                for (size_t h = 0; h < hom.rows(); h++)
                    for (size_t j = 0; j < 8; j++) y[j] += bez[h] * scale * hom(h, j);
            }
            IntMat P = build(y);
            if (verify_conjugator(T, P, n, m)) return P;
        }
    }
    return std::nullopt;
}

// n = 0 (or symmetrically m = 0): A = T - I has A^2 = 0 and im A = m ker A;
// a complement basis (s2, s4) of ker A gives P = (A s2 / m, s2, A s4 / m, s4)
// up to the choice of which factor degenerates.
std::optional<IntMat> conjugator_degenerate(const IntMat& T, long n, long m) {
    long mm = n == 0 ? m : n;
    IntMat A = T - IntMat::identity(4);
    if (!(A * A == IntMat(4, 4))) return std::nullopt;
    Subgroup ker = hnf_kernel(A.transpose());
    if (ker.rank() != 2) return std::nullopt;
    IntMat V = complete_basis(ker);
    std::vector<Int> s2(4), s4(4);
    for (size_t j = 0; j < 4; j++) {
        s2[j] = V(2, j);
        s4[j] = V(3, j);
    }
    auto img = [&](const std::vector<Int>& sv, std::vector<Int>& out) {
        out.assign(4, Int(0));
        for (size_t i = 0; i < 4; i++)
            for (size_t j = 0; j < 4; j++) out[i] += A(i, j) * sv[j];
        for (size_t i = 0; i < 4; i++) {
            if (out[i] % mm != 0) return false;
            out[i] /= mm;
        }
        return true;
    };
    std::vector<Int> i2, i4;
    if (!img(s2, i2) || !img(s4, i4)) return std::nullopt;
    // two arrangements depending on which surface carries the I_m fiber
    for (int arr = 0; arr < 2; arr++) {
        IntMat P(4, 4);
        for (size_t i = 0; i < 4; i++) {
            if (n == 0) {
                // model: uv -> m uu + uv, vv -> m vu + vv
                P(i, 0) = arr ? i4[i] : i2[i];
                P(i, 1) = arr ? s4[i] : s2[i];
                P(i, 2) = arr ? i2[i] : i4[i];
                P(i, 3) = arr ? s2[i] : s4[i];
            } else {
                // model: vu -> n uu + vu, vv -> n uv + vv
                P(i, 0) = arr ? i4[i] : i2[i];
                P(i, 2) = arr ? s4[i] : s2[i];
                P(i, 1) = arr ? i2[i] : i4[i];
                P(i, 3) = arr ? s2[i] : s4[i];
            }
        }
        if (verify_conjugator(T, P, n, m)) return P;
    }
    return std::nullopt;
}

} // namespace

std::optional<IntMat> local_model_conjugator(const IntMat& T, long n, long m) {
    if (n == 0 && m == 0)
        return T == IntMat::identity(4) ? std::optional<IntMat>(IntMat::identity(4))
                                        : std::nullopt;
    if (n == 0 || m == 0) return conjugator_degenerate(T, n, m);
    return conjugator_nm(T, n, m);
}

namespace {

Subgroup column_kernel(const IntMat& A) { return hnf_kernel(A.transpose()); }

Subgroup column_image(const IntMat& A) { return image_rows(A.transpose()); }

} // namespace

Subgroup vanishing_cycles_X(const IntMat& T, long n, long m) {
    if (!local_model_conjugator(T, n, m))
        throw NotLocalModel("monodromy is not conjugate to the I_n x I_m model (n=" +
                            std::to_string(n) + ", m=" + std::to_string(m) + ")");
    IntMat A = T - IntMat::identity(4);
    IntMat A2 = A * A;
    long r2 = A2.rank();
    IntMat power = A.pow(static_cast<unsigned>(1 + r2));
    return column_kernel(power);
}

Subgroup vanishing_cycles_Xhat(const IntMat& T, long n, long m) {
    if (n == 0 && m == 0)
        throw OutsideSchoenHypotheses("both fibers regular");
    if ((n == 0 && m >= 2) || (m == 0 && n >= 2))
        throw OutsideSchoenHypotheses("I_0 x I_m with m >= 2 has no small-resolution formula here");
    if (!local_model_conjugator(T, n, m))
        throw NotLocalModel("monodromy is not conjugate to the I_n x I_m model");
    IntMat A = T - IntMat::identity(4);
    IntMat A2 = A * A;
    return column_image(A) + saturate(column_image(A2));
}

// ------------------------------------------------------------ lattice work

namespace {

bool abs_less(const Complex& a, const Complex& b) {
    Real d = a.abs2() - b.abs2();
    mpfr_prec_t p = a.prec();
    Real tol = (a.abs2() + b.abs2() + Real(1L, p)) * Real::pow10(-25, p);
    if (d.abs() < tol) {
        // tie: order by argument
        return a.arg() < b.arg();
    }
    return d.sign() < 0;
}

// extract a Z-basis from generators: relations -> complete to GL_N(Z) ->
// nonvanishing images
std::vector<Complex> group_basis(const std::vector<Complex>& values, long rel_digits,
                                 const Int& coeff_bound) {
    IntMat rels = integer_relations(values, rel_digits, coeff_bound);
    size_t N = values.size();
    mpfr_prec_t prec = values.empty() ? 64 : values[0].prec();
    if (rels.rows() == 0) return values;
    Subgroup K{N, rels};
    IntMat V = complete_basis(saturate(K));
    // first rank(K) rows of V span the relation lattice; the images of the
    // remaining rows are a basis
    std::vector<Complex> out;
    for (size_t i = rels.rows(); i < N; i++) {
        Complex acc(prec);
        for (size_t j = 0; j < N; j++) {
            if (V(i, j) == 0) continue;
            acc += values[j] * Real(Rat(V(i, j)), prec);
        }
        out.push_back(acc);
    }
    return out;
}

// Gauss reduction of a rank-2 discrete lattice in C.
void gauss_reduce(Complex& u, Complex& v) {
    mpfr_prec_t p = u.prec();
    for (int it = 0; it < 200; it++) {
        if (abs_less(v, u)) std::swap(u, v);
        // v -= round(<v,u>/<u,u>) u  (real inner product on R^2)
        Real ip = v.re * u.re + v.im * u.im;
        Real n2 = u.abs2();
        Int q = (ip / n2).round_to_int();
        if (q == 0) return;
        Complex qc(Real(Rat(q), p), Real(0L, p));
        v -= u * qc.re;
    }
}

} // namespace

PeriodLattice lattice_from_values(const std::vector<Complex>& values, long rel_digits,
                                  const Int& coeff_bound) {
    PeriodLattice lat;
    if (values.empty()) return lat;
    mpfr_prec_t prec = values[0].prec();
    // drop numerically-zero inputs
    std::vector<Complex> vals;
    Real scale(0L, prec);
    for (const auto& v : values) {
        Real a = v.abs();
        if (a > scale) scale = a;
    }
    if (scale.is_zero()) return lat;
    for (const auto& v : values)
        if (!(v.abs() < scale * Real::pow10(-rel_digits, prec))) vals.push_back(v);

    auto basis_full = group_basis(vals, rel_digits, coeff_bound);
    auto basis_half = group_basis(vals, rel_digits / 2, coeff_bound);
    if (basis_full.size() != basis_half.size())
        throw PrecisionExhausted("integer-relation rank unstable across precisions");
    lat.rank = static_cast<long>(basis_full.size());
    lat.basis = std::move(basis_full);

    if (lat.rank == 1) {
        // canonical sign: positive real part, else positive imaginary part
        Complex& v = lat.basis[0];
        if (v.re.sign() < 0 || (v.re.abs() < v.abs() * Real::pow10(-30, prec) && v.im.sign() < 0))
            v = -v;
    } else if (lat.rank == 2) {
        gauss_reduce(lat.basis[0], lat.basis[1]);
        // conjugation-adapted form when the lattice is conjugation stable:
        // try to exhibit a real generator x and an imaginary one iy; if the
        // lattice is strictly bigger than Zx + Z iy it is the index-2 case
        // with basis (x +- iy)/2.
        Real tol = scale * Real::pow10(-(rel_digits * 2) / 3, prec);
        const Complex &u = lat.basis[0], &v = lat.basis[1];
        std::vector<Complex> cand;
        for (long cu = -2; cu <= 2; cu++)
            for (long cv = -2; cv <= 2; cv++) {
                if (cu == 0 && cv == 0) continue;
                cand.push_back(u * Real(cu, prec) + v * Real(cv, prec));
            }
        std::optional<Complex> best_re, best_im;
        for (const auto& c : cand) {
            if (c.im.abs() < tol && (c.re.sign() > 0)) {
                if (!best_re || c.re < best_re->re) best_re = c;
            }
            if (c.re.abs() < tol && (c.im.sign() > 0)) {
                if (!best_im || c.im < best_im->im) best_im = c;
            }
        }
        if (best_re && best_im) {
            // index of Zx + Z iy inside the lattice: 1 or 2
            Real det_lat = (u.re * v.im - u.im * v.re).abs();
            Real det_split = (best_re->re * best_im->im).abs();
            Real ratio = det_split / det_lat;
            if ((ratio - Real(1L, prec)).abs() < Real(0.1, prec)) {
                lat.basis = {*best_re, *best_im};
            } else if ((ratio - Real(2L, prec)).abs() < Real(0.1, prec)) {
                Complex w = (*best_re + *best_im) / Real(2L, prec);
                lat.basis = {w, w.conj()};
            }
        }
    }
    std::sort(lat.basis.begin(), lat.basis.end(), abs_less);
    return lat;
}

Int lattice_index(const PeriodLattice& sub, const PeriodLattice& sup, long rel_digits) {
    if (sub.rank != sup.rank) throw NotASublattice("rank mismatch");
    size_t r = static_cast<size_t>(sub.rank);
    IntMat C(r, r);
    for (size_t i = 0; i < r; i++) {
        std::vector<Int> coeffs;
        if (!express_in_group(sub.basis[i], sup.basis, rel_digits, Int("10000000000"), coeffs))
            throw NotASublattice("basis element has no integral expansion");
        for (size_t j = 0; j < r; j++) C(i, j) = coeffs[j];
    }
    Int d = C.det();
    if (d == 0) throw NotASublattice("degenerate change of basis");
    return d < 0 ? Int(-d) : d;
}

bool lattice_equal(const PeriodLattice& a, const PeriodLattice& b, long rel_digits) {
    if (a.rank != b.rank) return false;
    try {
        return lattice_index(a, b, rel_digits) == 1 && lattice_index(b, a, rel_digits) == 1;
    } catch (const EngineError&) {
        return false;
    }
}

} // namespace periods
