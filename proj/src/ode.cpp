#include "periods/ode.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include <nlohmann/json.hpp>

#include "periods/errors.hpp"

namespace periods {

// ---------------------------------------------------------------- LinearODE

void LinearODE::normalize_content() {
    if (coeffs.empty() || coeffs[0].is_zero())
        throw InvalidParameter("ODE leading coefficient vanishes identically");
    // common denominator and content across all coefficient polynomials
    Int den(1), content(0);
    for (const auto& p : coeffs)
        for (const auto& x : p.c) {
            Int d = x.get_den(), g;
            mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
            den = den / g * d;
        }
    for (auto& p : coeffs)
        for (auto& x : p.c) {
            x *= Rat(den);
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_num().get_mpz_t());
        }
    if (content == 0) content = 1;
    if (coeffs[0].c.back() < 0) content = -content;
    for (auto& p : coeffs) {
        for (auto& x : p.c) x /= Rat(content);
        p.strip();
    }
}

namespace {

// Yun squarefree decomposition: p ~ prod out[i]^(i+1), out[i] squarefree,
// monic, pairwise coprime (constant factors dropped).
std::vector<RatPoly> yun_decomposition(const RatPoly& p) {
    std::vector<RatPoly> out;
    if (p.degree() < 1) return out;
    RatPoly a0 = RatPoly::gcd(p, p.derivative());
    RatPoly b, c, q, r;
    RatPoly::divmod(p, a0, b, r);
    RatPoly::divmod(p.derivative(), a0, c, r);
    RatPoly d = c - b.derivative();
    while (b.degree() > 0) {
        RatPoly ai = RatPoly::gcd(b, d);
        out.push_back(ai);
        RatPoly::divmod(b, ai, q, r);
        b = q;
        RatPoly::divmod(d, ai, c, r);
        d = c - b.derivative();
    }
    return out;
}

bool divides(const RatPoly& d, const RatPoly& p) {
    if (p.is_zero()) return true;
    RatPoly q, r;
    RatPoly::divmod(p, d, q, r);
    return r.is_zero();
}

RatPoly poly_pow(const RatPoly& p, long k) {
    RatPoly r = RatPoly::constant(Rat(1));
    for (long i = 0; i < k; i++) r = r * p;
    return r;
}

} // namespace

bool LinearODE::is_fuchsian() const {
    long d = order();
    auto factors = yun_decomposition(coeffs[0]);
    for (size_t i = 0; i < factors.size(); i++) {
        if (factors[i].degree() < 1) continue;
        long mult = static_cast<long>(i) + 1;
        // at each root of factors[i]: ord(coeffs[j]) >= mult - j
        for (long j = 1; j <= d; j++) {
            long need = mult - j;
            if (need <= 0) continue;
            if (!divides(poly_pow(factors[i], need), coeffs[static_cast<size_t>(j)]))
                return false;
        }
    }
    return true;
}

std::string LinearODE::json() const {
    nlohmann::json j;
    j["order"] = order();
    auto& arr = j["coeffs"] = nlohmann::json::array();
    for (const auto& p : coeffs) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : p.c) row.push_back(x.get_str());
        arr.push_back(row);
    }
    return j.dump();
}

LinearODE LinearODE::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    LinearODE ode;
    for (const auto& row : j.at("coeffs")) {
        std::vector<Rat> c;
        for (const auto& s : row) c.emplace_back(s.get<std::string>());
        for (auto& x : c) x.canonicalize();
        ode.coeffs.emplace_back(std::move(c));
    }
    return ode;
}

LinearODE antiderivative_ode(const LinearODE& ode) {
    LinearODE out = ode;
    out.coeffs.push_back(RatPoly{});
    return out;
}

// ------------------------------------------------------- modular nullspace

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// fixed word-size primes (below 2^62)
constexpr u64 kPrimes[] = {
    4611686018427387847ULL, 4611686018427387817ULL, 4611686018427387787ULL,
    4611686018427387761ULL, 4611686018427387731ULL, 4611686018427387707ULL,
    4611686018427387631ULL, 4611686018427387617ULL, 4611686018427387559ULL,
    4611686018427387547ULL, 4611686018427387517ULL, 4611686018427387469ULL,
    4611686018427387431ULL, 4611686018427387397ULL, 4611686018427387377ULL,
    4611686018427387317ULL,
};
constexpr size_t kNumPrimes = sizeof(kPrimes) / sizeof(kPrimes[0]);

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a % p, p - 2, p); }

// Rat mod p; false if the denominator vanishes mod p.
bool rat_mod(const Rat& x, u64 p, u64& out) {
    Int num = x.get_num(), den = x.get_den();
    u64 d = mpz_fdiv_ui(den.get_mpz_t(), p);
    if (d == 0) return false;
    u64 n = mpz_fdiv_ui(num.get_mpz_t(), p);
    out = mulmod(n, invmod(d, p), p);
    return true;
}

struct ModMatrix {
    size_t rows, cols;
    std::vector<u64> a;
    u64 p;
    u64& at(size_t i, size_t j) { return a[i * cols + j]; }
};

// Row echelon; returns pivot column list. Deterministic: first nonzero pivot.
std::vector<size_t> echelon(ModMatrix& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; col++) {
        size_t pr = row;
        while (pr < m.rows && m.at(pr, col) == 0) pr++;
        if (pr == m.rows) continue;
        if (pr != row)
            for (size_t j = col; j < m.cols; j++) std::swap(m.at(pr, j), m.at(row, j));
        u64 inv = invmod(m.at(row, col), m.p);
        for (size_t j = col; j < m.cols; j++) m.at(row, j) = mulmod(m.at(row, j), inv, m.p);
        for (size_t i = 0; i < m.rows; i++) {
            if (i == row || m.at(i, col) == 0) continue;
            u64 f = m.at(i, col);
            for (size_t j = col; j < m.cols; j++) {
                u64 t = mulmod(f, m.at(row, j), m.p);
                m.at(i, j) = (m.at(i, j) + m.p - t) % m.p;
            }
        }
        pivots.push_back(col);
        row++;
    }
    return pivots;
}

struct SearchShape {
    long order;
    long deg;
    size_t unknowns() const {
        return static_cast<size_t>(order + 1) * static_cast<size_t>(deg + 1);
    }
};

// Build the annihilator system for sum_j p_j(z) S^(j)(z) = 0 mod p.
// Unknown (j, m) = coefficient of z^m in p_j, column index j*(deg+1)+m.
bool build_system(const std::vector<RatSeries>& derivs, const SearchShape& s, u64 p, ModMatrix& m) {
    size_t N = derivs[0].size();
    size_t eqs = N - static_cast<size_t>(s.order);
    size_t U = s.unknowns();
    m.rows = eqs;
    m.cols = U;
    m.p = p;
    m.a.assign(eqs * U, 0);
    std::vector<std::vector<u64>> dmod(static_cast<size_t>(s.order) + 1);
    for (long j = 0; j <= s.order; j++) {
        dmod[static_cast<size_t>(j)].resize(derivs[static_cast<size_t>(j)].size());
        for (size_t k = 0; k < derivs[static_cast<size_t>(j)].size(); k++)
            if (!rat_mod(derivs[static_cast<size_t>(j)].c[k], p, dmod[static_cast<size_t>(j)][k]))
                return false;
    }
    for (size_t t = 0; t < eqs; t++)
        for (long j = 0; j <= s.order; j++)
            for (long mm = 0; mm <= s.deg; mm++) {
                if (static_cast<long>(t) < mm) continue;
                size_t src = t - static_cast<size_t>(mm);
                if (src >= dmod[static_cast<size_t>(j)].size()) continue;
                m.at(t, static_cast<size_t>(j * (s.deg + 1) + mm)) = dmod[static_cast<size_t>(j)][src];
            }
    return true;
}

// Kernel dimension and, when wanted, the kernel vector normalized so its
// first free coordinate is 1 (deterministic across good primes).
long kernel_mod(const std::vector<RatSeries>& derivs, const SearchShape& s, u64 p,
                std::vector<u64>* vec) {
    ModMatrix m;
    if (!build_system(derivs, s, p, m)) return -1; // bad prime
    auto pivots = echelon(m);
    long dim = static_cast<long>(m.cols - pivots.size());
    if (!vec || dim < 1) return dim;
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    size_t free_col = 0;
    while (free_col < m.cols && is_pivot[free_col]) free_col++;
    vec->assign(m.cols, 0);
    (*vec)[free_col] = 1;
    // back-substitute: pivot row i has leading 1 at pivots[i]
    for (size_t i = 0; i < pivots.size(); i++) {
        u64 v = m.at(i, free_col);
        (*vec)[pivots[i]] = v ? p - v : 0;
    }
    return dim;
}

bool rational_reconstruct(const Int& x, const Int& mod, Rat& out) {
    Int bound;
    mpz_sqrt(bound.get_mpz_t(), Int(mod / 2).get_mpz_t());
    Int r0 = mod, r1 = x % mod, s0 = 0, s1 = 1;
    if (r1 < 0) r1 += mod;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1; r1 = r2; s0 = s1; s1 = s2;
    }
    if (s1 == 0) return false;
    Int den = s1 < 0 ? Int(-s1) : s1;
    if (den > bound) return false;
    Int num = s1 < 0 ? Int(-r1) : r1;
    Int g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Int gm;
    mpz_gcd(gm.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    if (gm != 1) return false;
    out = Rat(num, den);
    out.canonicalize();
    return true;
}

} // namespace

LinearODE find_min_ode(const RatSeries& seed, long max_order, long max_deg_start,
                       long max_deg_limit) {
    long N = static_cast<long>(seed.size());
    std::vector<RatSeries> derivs{seed};
    for (long j = 1; j <= max_order; j++) derivs.push_back(derivs.back().derivative());

    auto feasible = [&](const SearchShape& s) {
        return N - s.order >= static_cast<long>(s.unknowns()) + 5;
    };
    auto dim_at = [&](const SearchShape& s, size_t prime_idx) {
        return kernel_mod(derivs, s, kPrimes[prime_idx], nullptr);
    };

    for (long r = 1; r <= max_order; r++) {
        long found_deg = -1;
        for (long D = max_deg_start; D <= max_deg_limit; D += 5) {
            SearchShape s{r, D};
            if (!feasible(s)) break;
            long dim = dim_at(s, 0);
            if (dim > 0 && dim_at(s, 1) == dim) { found_deg = D; break; }
        }
        if (found_deg < 0) continue;
        // exact minimal degree
        long Dmin = found_deg;
        while (Dmin > 0) {
            SearchShape s{r, Dmin - 1};
            long dim = dim_at(s, 0);
            if (dim > 0 && dim_at(s, 1) == dim) Dmin--;
            else break;
        }
        SearchShape shape{r, Dmin};
        // CRT + rational reconstruction of the (projectively unique) kernel vector
        size_t U = shape.unknowns();
        std::vector<Int> residue(U, Int(0));
        Int modulus(1);
        for (size_t pi = 0; pi < kNumPrimes; pi++) {
            std::vector<u64> vec;
            long dim = kernel_mod(derivs, shape, kPrimes[pi], &vec);
            if (dim < 1) continue;
            Int p(static_cast<unsigned long>(kPrimes[pi]));
            if (modulus == 1) {
                for (size_t k = 0; k < U; k++) residue[k] = Int(static_cast<unsigned long>(vec[k]));
                modulus = p;
            } else {
                // CRT combine
                Int pinv, g;
                mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
                mpz_invert(pinv.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
                for (size_t k = 0; k < U; k++) {
                    Int vk(static_cast<unsigned long>(vec[k]));
                    Int diff = ((vk - residue[k]) % p + p) % p;
                    residue[k] = residue[k] + modulus * ((diff * pinv) % p);
                }
                modulus *= p;
            }
            // attempt reconstruction
            std::vector<Rat> sol(U);
            bool ok = true;
            for (size_t k = 0; k < U && ok; k++)
                ok = rational_reconstruct(residue[k], modulus, sol[k]);
            if (!ok) continue;
            LinearODE ode;
            for (long j = r; j >= 0; j--) {
                std::vector<Rat> c(sol.begin() + j * (shape.deg + 1),
                                   sol.begin() + (j + 1) * (shape.deg + 1));
                ode.coeffs.emplace_back(std::move(c));
            }
            if (ode.coeffs[0].is_zero()) continue;
            // exact verification against the full seed truncation
            RatSeries acc(std::vector<Rat>(static_cast<size_t>(N - r), Rat(0)));
            bool zero = true;
            for (long j = 0; j <= r && zero; j++) {
                const RatPoly& pj = ode.coeffs[static_cast<size_t>(r - j)];
                for (size_t mdeg = 0; mdeg < pj.c.size(); mdeg++) {
                    if (pj.c[mdeg] == 0) continue;
                    for (size_t t = mdeg; t < acc.size(); t++) {
                        size_t src = t - mdeg;
                        if (src < derivs[static_cast<size_t>(j)].size())
                            acc.c[t] += pj.c[mdeg] * derivs[static_cast<size_t>(j)].c[src];
                    }
                }
            }
            for (const auto& x : acc.c)
                if (x != 0) { zero = false; break; }
            if (!zero) continue;
            ode.normalize_content();
            return ode;
        }
        throw NoODEFound("kernel found mod p but rational reconstruction failed (order " +
                         std::to_string(r) + ")");
    }
    throw NoODEFound("no annihilating ODE within order " + std::to_string(max_order) +
                     ", degree " + std::to_string(max_deg_limit) +
                     " (raise series_order and retry)");
}

// --------------------------------------------------------------- indicial

namespace {

// Falling factorial [X]_k = X (X-1) ... (X-k+1) as an exact polynomial.
RatPoly falling_factorial_poly(long k) {
    RatPoly r = RatPoly::constant(Rat(1));
    for (long t = 0; t < k; t++) r = r * RatPoly({Rat(-t), Rat(1)});
    return r;
}

} // namespace

RatPoly indicial_polynomial(const LinearODE& ode, const Rat& z0) {
    long d = ode.order();
    // shift exactly; v0 = multiplicity of z0 in the leading coefficient
    std::vector<RatPoly> q;
    for (const auto& p : ode.coeffs) q.push_back(p.shift(z0));
    long v0 = 0;
    while (v0 <= q[0].degree() && q[0].coeff(static_cast<size_t>(v0)) == 0) v0++;
    if (q[0].is_zero()) throw NotRegularSingular("leading coefficient identically zero");
    RatPoly f0 = falling_factorial_poly(d);
    for (long j = 1; j <= d; j++) {
        long idx = v0 - j;
        Rat pj0 = idx < 0 ? Rat(0) : q[static_cast<size_t>(j)].coeff(static_cast<size_t>(idx));
        if (idx > 0) {
            // regular-singular check at this point: lower-order terms must vanish
            for (long t = 0; t < idx; t++)
                if (q[static_cast<size_t>(j)].coeff(static_cast<size_t>(t)) != 0)
                    throw NotRegularSingular("coefficient " + std::to_string(j) +
                                             " too singular at expansion point");
        }
        f0 = f0 + falling_factorial_poly(d - j) * (pj0 / q[0].coeff(static_cast<size_t>(v0)));
    }
    return f0;
}

// ------------------------------------------------------------- root finding

namespace {

std::vector<Complex> durand_kerner(const std::vector<Complex>& monic, mpfr_prec_t prec) {
    long n = static_cast<long>(monic.size()) - 1; // degree; monic[n] = 1
    std::vector<Complex> x;
    if (n <= 0) return x;
    Real radius(1L, prec);
    for (long i = 0; i < n; i++) {
        Real a = monic[static_cast<size_t>(i)].abs();
        if (a > radius) radius = a;
    }
    radius = radius + Real(1L, prec);
    Real angle0(0.61803398875, prec);
    for (long k = 0; k < n; k++) {
        Real ang = Real::pi(prec) * 2 * Real(static_cast<double>(k) / n, prec) + angle0;
        x.push_back(Complex(ang.cos(), ang.sin()) * (radius * Real(0.7, prec)));
    }
    auto eval = [&](const Complex& z) {
        Complex acc(monic.back());
        for (size_t i = monic.size() - 1; i-- > 0;) acc = acc * z + monic[i];
        return acc;
    };
    // root accuracy target: feeds rationalization and distance estimates only
    Real tol = Real::pow10(-42, prec);
    for (int it = 0; it < 300; it++) {
        Real worst(0L, prec);
        for (long k = 0; k < n; k++) {
            Complex den(1, prec);
            for (long j = 0; j < n; j++)
                if (j != k) den = den * (x[static_cast<size_t>(k)] - x[static_cast<size_t>(j)]);
            Complex delta = eval(x[static_cast<size_t>(k)]) / den;
            x[static_cast<size_t>(k)] -= delta;
            Real m = delta.abs();
            if (m > worst) worst = m;
        }
        if (worst < tol * (radius + Real(1L, prec))) break;
    }
    return x;
}

} // namespace

std::vector<PolyRoot> complex_roots(const RatPoly& p, mpfr_prec_t prec) {
    std::vector<PolyRoot> out;
    if (p.degree() < 1) return out;
    auto factors = yun_decomposition(p);
    for (size_t i = 0; i < factors.size(); i++) {
        if (factors[i].degree() < 1) continue;
        std::vector<Complex> monic;
        Rat lead = factors[i].c.back();
        for (const auto& c : factors[i].c) monic.push_back(Complex(c / lead, prec));
        for (const auto& z : durand_kerner(monic, prec))
            out.push_back({z, static_cast<long>(i) + 1});
    }
    return out;
}

namespace {

// Best rational approximation with bounded denominator (continued fractions).
Rat rationalize(double x, long max_den) {
    bool neg = x < 0;
    if (neg) x = -x;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 40; it++) {
        double fl = std::floor(v);
        long a = static_cast<long>(fl);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double frac = v - fl;
        if (frac < 1e-12) break;
        v = 1.0 / frac;
    }
    Rat r(p1, q1 == 0 ? 1 : q1);
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

} // namespace

std::vector<std::pair<Rat, long>> rational_roots(const RatPoly& p, long max_den) {
    std::vector<std::pair<Rat, long>> out;
    for (const auto& root : complex_roots(p, 128)) {
        if (!(root.z.im.abs() < Real::pow10(-10, 128))) continue;
        Rat cand = rationalize(root.z.re.to_double(), max_den);
        if (p.eval(cand) == 0) {
            bool dup = false;
            for (auto& existing : out)
                if (existing.first == cand) dup = true;
            if (!dup) out.emplace_back(cand, root.multiplicity);
        }
    }
    return out;
}

// ------------------------------------------------------------ series bases

namespace {

// Taylor shift of an exact polynomial to a numeric center, by Horner over
// polynomials in t: acc <- acc * (c + t) + a_i.
CSeries shift_poly(const RatPoly& p, const Complex& c, size_t len, mpfr_prec_t prec) {
    CSeries out = CSeries::zero(len, prec);
    std::vector<Complex> acc;
    for (size_t i = p.c.size(); i-- > 0;) {
        std::vector<Complex> next(std::min(len, acc.size() + 1), Complex(prec));
        for (size_t j = 0; j < acc.size(); j++) {
            if (j < next.size()) next[j].add_mul(acc[j], c);
            if (j + 1 < next.size()) next[j + 1] += acc[j];
        }
        if (next.empty()) next.push_back(Complex(prec));
        next[0] += Complex(Real(p.c[i], prec));
        acc = std::move(next);
    }
    for (size_t i = 0; i < acc.size() && i < len; i++) out.c[i] = acc[i];
    return out;
}

CSeries series_from_rat(const RatPoly& p, size_t len, mpfr_prec_t prec) {
    CSeries out = CSeries::zero(len, prec);
    for (size_t i = 0; i < p.c.size() && i < len; i++) out.c[i] = Complex(Real(p.c[i], prec));
    return out;
}

CSeries series_inverse(const CSeries& a) {
    mpfr_prec_t p = a.c[0].prec();
    CSeries r = CSeries::zero(a.size(), p);
    Complex one(1, p);
    r.c[0] = one / a.c[0];
    for (size_t n = 1; n < a.size(); n++) {
        Complex s(p);
        for (size_t k = 1; k <= n; k++) s.add_mul(a.c[k], r.c[n - k]);
        r.c[n] = -s / a.c[0];
    }
    return r;
}

struct ShiftedODE {
    std::vector<CSeries> q; // coefficients around the center
    long v0 = 0;            // valuation of q[0]
};

ShiftedODE shift_ode(const LinearODE& ode, const ExpansionPoint& at, size_t len,
                     mpfr_prec_t prec, long digits) {
    ShiftedODE s;
    for (const auto& p : ode.coeffs) {
        if (at.exact) {
            RatPoly sh = p.shift(*at.exact);
            s.q.push_back(series_from_rat(sh, len, prec));
        } else {
            s.q.push_back(shift_poly(p, at.z, len, prec));
        }
    }
    // valuation of the leading coefficient
    Real maxabs(0L, prec);
    for (const auto& x : s.q[0].c) {
        Real a = x.abs();
        if (a > maxabs) maxabs = a;
    }
    Real tol = maxabs * Real::pow10(-(digits + PrecisionContext::guard_digits / 2), prec);
    size_t v = 0;
    while (v < s.q[0].size() && s.q[0].c[v].abs() < tol) v++;
    if (v == s.q[0].size()) throw NotRegularSingular("leading coefficient vanishes to all orders");
    s.v0 = static_cast<long>(v);
    return s;
}

// Evaluate an exact polynomial at (x0 + eps) in the truncated eps-ring.
EpsPoly eval_poly_eps(const std::vector<Complex>& poly, const Rat& x0, size_t m, mpfr_prec_t prec) {
    EpsPoly acc(m, prec);
    EpsPoly shift(m, prec);
    shift.c[0] = Complex(x0, prec);
    if (m > 1) shift.c[1] = Complex(1, prec);
    for (size_t i = poly.size(); i-- > 0;) {
        acc = acc * shift;
        acc.c[0] += poly[i];
    }
    return acc;
}

} // namespace

std::vector<LogSeries> holomorphic_basis(const LinearODE& ode, const ExpansionPoint& at,
                                         const PrecisionContext& ctx) {
    long d = ode.order();
    mpfr_prec_t prec = ctx.prec_bits();
    size_t N = static_cast<size_t>(ctx.series_order);
    ShiftedODE s = shift_ode(ode, at, N + static_cast<size_t>(d) + 2, prec, ctx.digits);
    if (s.v0 != 0) throw SingularExpansionPoint("holomorphic basis at a singular point");
    std::vector<LogSeries> out;
    const Complex& q00 = s.q[0].c[0];
    for (long j = 0; j < d; j++) {
        CSeries a = CSeries::zero(N, prec);
        a.c[static_cast<size_t>(j)] = Complex(1, prec);
        // recurrence for a_{t+d}
        for (size_t t = 0; t + static_cast<size_t>(d) < N; t++) {
            Complex rhs(prec);
            for (long i = 0; i <= d; i++) {
                const CSeries& qi = s.q[static_cast<size_t>(i)];
                long dv = d - i; // derivative order of this term
                for (size_t l = 0; l <= t && l < qi.size(); l++) {
                    if (i == 0 && l == 0) continue; // the unknown itself
                    size_t ai = t - l + static_cast<size_t>(dv);
                    if (ai >= N || a.c[ai].is_zero()) continue;
                    // falling factorial (ai)_(dv)
                    Real ff(1L, prec);
                    for (long u = 0; u < dv; u++) ff *= Real(static_cast<long>(ai) - u, prec);
                    rhs += qi.c[l] * a.c[ai] * ff;
                }
            }
            Real ffd(1L, prec);
            for (long u = 0; u < d; u++) ffd *= Real(static_cast<long>(t) + d - u, prec);
            a.c[t + static_cast<size_t>(d)] = -rhs / (q00 * ffd);
        }
        out.push_back(LogSeries::holomorphic(std::move(a)));
    }
    return out;
}

std::vector<LogSeries> frobenius_basis(const LinearODE& ode, const ExpansionPoint& at,
                                       const PrecisionContext& ctx) {
    long d = ode.order();
    mpfr_prec_t prec = ctx.prec_bits();
    size_t N = static_cast<size_t>(ctx.series_order);
    ShiftedODE sh = shift_ode(ode, at, N + static_cast<size_t>(d) + 2, prec, ctx.digits);
    if (sh.v0 == 0) return holomorphic_basis(ode, at, ctx);

    // normal-form coefficient series ptilde_j = t^j q_j / q_0 (must be regular)
    long v0 = sh.v0;
    Real maxq(0L, prec);
    for (const auto& x : sh.q[0].c) {
        Real a = x.abs();
        if (a > maxq) maxq = a;
    }
    Real ztol = maxq * Real::pow10(-(ctx.digits + PrecisionContext::guard_digits / 2), prec);
    CSeries unit = CSeries::zero(N + 1, prec);
    for (size_t i = 0; i + static_cast<size_t>(v0) < sh.q[0].size() && i < unit.size(); i++)
        unit.c[i] = sh.q[0].c[i + static_cast<size_t>(v0)];
    CSeries inv0 = series_inverse(unit);
    std::vector<CSeries> ptilde(static_cast<size_t>(d) + 1);
    for (long j = 1; j <= d; j++) {
        CSeries num = CSeries::zero(N + 1, prec);
        for (long m = 0; m < static_cast<long>(num.size()); m++) {
            long src = m + v0 - j;
            if (src < 0) continue;
            if (static_cast<size_t>(src) < sh.q[static_cast<size_t>(j)].size())
                num.c[static_cast<size_t>(m)] = sh.q[static_cast<size_t>(j)].c[static_cast<size_t>(src)];
        }
        // regularity: entries of t^j q_j below t^v0 must vanish
        for (long t = 0; t < v0 - j; t++)
            if (static_cast<size_t>(t) < sh.q[static_cast<size_t>(j)].size() &&
                !(sh.q[static_cast<size_t>(j)].c[static_cast<size_t>(t)].abs() < ztol))
                throw NotRegularSingular("irregular singular expansion point");
        ptilde[static_cast<size_t>(j)] = num * inv0;
    }

    // indicial polynomial coefficients (numeric; exact centers round cleanly)
    std::vector<Complex> f0poly(static_cast<size_t>(d) + 1, Complex(prec));
    {
        RatPoly base = falling_factorial_poly(d);
        for (size_t i = 0; i < base.c.size(); i++) f0poly[i] = Complex(Real(base.c[i], prec));
        for (long j = 1; j <= d; j++) {
            RatPoly ff = falling_factorial_poly(d - j);
            for (size_t i = 0; i < ff.c.size(); i++)
                f0poly[i] += Complex(Real(ff.c[i], prec)) * ptilde[static_cast<size_t>(j)].c[0];
        }
    }

    // rational indicial roots
    std::vector<Rat> roots; // with multiplicity
    {
        std::vector<Complex> monic = f0poly;
        Complex lead = monic.back();
        for (auto& x : monic) x = x / lead;
        auto raw = durand_kerner(monic, prec);
        Real rtol = Real::pow10(-ctx.digits / 4, prec);
        for (const auto& z : raw) {
            if (!(z.im.abs() < rtol))
                throw InvalidParameter("non-real indicial exponent (unsupported)");
            Rat cand = rationalize(z.re.to_double(), 64);
            // residual check
            Complex val(prec);
            Complex cz(cand, prec);
            for (size_t i = f0poly.size(); i-- > 0;) val = val * cz + f0poly[i];
            if (!(val.abs() < maxq * rtol))
                throw InvalidParameter("indicial exponent does not round to a small rational");
            roots.push_back(cand);
        }
        std::sort(roots.begin(), roots.end());
    }

    // group into congruence classes mod Z
    std::vector<std::vector<Rat>> classes;
    for (const auto& r : roots) {
        bool placed = false;
        for (auto& cls : classes) {
            Rat diff = r - cls[0];
            if (diff.get_den() == 1) { cls.push_back(r); placed = true; break; }
        }
        if (!placed) classes.push_back({r});
    }
    // order classes by descending largest root; roots inside descending
    for (auto& cls : classes) std::sort(cls.rbegin(), cls.rend());
    std::sort(classes.begin(), classes.end(),
              [](const std::vector<Rat>& a, const std::vector<Rat>& b) { return a[0] > b[0]; });

    std::vector<LogSeries> out;
    for (const auto& cls : classes) {
        // distinct values descending with multiplicities
        std::vector<std::pair<Rat, long>> distinct;
        for (const auto& r : cls) {
            if (!distinct.empty() && distinct.back().first == r) distinct.back().second++;
            else distinct.emplace_back(r, 1);
        }
        Rat gap = distinct.front().first - distinct.back().first;
        long Nc = gap.get_num().get_si() + 1;
        long m_prev = 0;
        for (const auto& [sigma, mult] : distinct) {
            long m_here = m_prev + mult;
            size_t M = static_cast<size_t>(2 * m_here);
            auto f0_at = [&](const Rat& x0) { return eval_poly_eps(f0poly, x0, M, prec); };
            // c0(eps) = prod_{t=1..Nc} f0(sigma + t + eps)
            EpsPoly c0 = EpsPoly::constant(Complex(1, prec), M);
            for (long t = 1; t <= Nc; t++) c0 = c0 * f0_at(sigma + Rat(t));
            std::vector<EpsPoly> c{c0};
            // falling-factorial polynomials evaluated once per offset i
            std::vector<RatPoly> fallpolys(static_cast<size_t>(d) + 1);
            for (long j = 0; j <= d; j++) fallpolys[static_cast<size_t>(j)] = falling_factorial_poly(d - j);
            std::vector<std::vector<EpsPoly>> fallval; // [i][j]
            auto fall_at = [&](long i) -> const std::vector<EpsPoly>& {
                while (static_cast<long>(fallval.size()) <= i) {
                    long ii = static_cast<long>(fallval.size());
                    std::vector<EpsPoly> row;
                    for (long j = 0; j <= d; j++) {
                        std::vector<Complex> pc;
                        for (const auto& x : fallpolys[static_cast<size_t>(j)].c)
                            pc.push_back(Complex(Real(x, prec)));
                        row.push_back(eval_poly_eps(pc, sigma + Rat(ii), M, prec));
                    }
                    fallval.push_back(std::move(row));
                }
                return fallval[static_cast<size_t>(i)];
            };
            // f_m at (sigma + i + eps): [X]_d delta_{m,0} + sum_j [X]_{d-j} ptilde_j[m]
            auto f_m_at = [&](long m, long i) {
                const auto& row = fall_at(i);
                EpsPoly acc(M, prec);
                if (m == 0) acc = acc + row[0];
                for (long j = 1; j <= d; j++) {
                    const Complex& pjm = ptilde[static_cast<size_t>(j)].c[static_cast<size_t>(m)];
                    if (pjm.is_zero()) continue;
                    EpsPoly t = row[static_cast<size_t>(j)];
                    for (auto& x : t.c) x *= pjm;
                    acc = acc + t;
                }
                return acc;
            };
            // multiplicity of sigma + k among the class roots
            auto val_at = [&](long k) {
                Rat target = sigma + Rat(k);
                long v = 0;
                for (const auto& r : cls)
                    if (r == target) v++;
                return v;
            };
            Real eps_tol = Real::pow10(-(ctx.digits / 2), prec);
            for (long k = 1; k < static_cast<long>(N); k++) {
                EpsPoly rhs(M, prec);
                for (long i = 0; i < k; i++) {
                    EpsPoly f = f_m_at(k - i, i);
                    rhs = rhs - c[static_cast<size_t>(i)] * f;
                }
                EpsPoly den = f0_at(sigma + Rat(k));
                long v = val_at(k);
                if (v > 0) {
                    Real scale(0L, prec);
                    for (const auto& x : rhs.c) {
                        Real a = x.abs();
                        if (a > scale) scale = a;
                    }
                    for (long t = 0; t < v; t++)
                        if (!(rhs.c[static_cast<size_t>(t)].abs() < scale * eps_tol + eps_tol))
                            throw PrecisionExhausted("Frobenius numerator fails to vanish at shifted root");
                    rhs = rhs.shift_down(static_cast<size_t>(v));
                    den = den.shift_down(static_cast<size_t>(v));
                }
                c.push_back(rhs * den.inverse());
            }
            // u_i series and the kept jets
            for (long j = m_prev; j < m_here; j++) {
                LogSeries sol;
                sol.rho = sigma;
                sol.parts.assign(static_cast<size_t>(j) + 1, CSeries::zero(N, prec));
                // f_j = sum_{t<=j} (j!/t!) u_{j-t} log^t
                for (long t = 0; t <= j; t++) {
                    Real fac(1L, prec);
                    for (long u = t + 1; u <= j; u++) fac *= Real(u, prec);
                    size_t ei = static_cast<size_t>(j - t);
                    for (size_t k = 0; k < N; k++)
                        sol.parts[static_cast<size_t>(t)].c[k] = c[k].c[ei] * fac;
                }
                // scale to unit leading magnitude for conditioning
                Real mx(0L, prec);
                for (const auto& part : sol.parts)
                    for (const auto& x : part.c) {
                        Real a = x.abs();
                        if (a > mx) mx = a;
                    }
                if (!mx.is_zero()) {
                    Complex inv(Real(1L, prec) / mx, Real(0L, prec));
                    for (auto& part : sol.parts) part = part * inv;
                }
                sol.trim_zero_parts(Real::pow10(-(ctx.digits + 10), prec));
                out.push_back(std::move(sol));
            }
            m_prev = m_here;
        }
    }
    if (static_cast<long>(out.size()) != d)
        throw NotRegularSingular("Frobenius basis incomplete");
    return out;
}

LogSeries apply_ode(const LinearODE& ode, const LogSeries& f, const ExpansionPoint& at,
                    const PrecisionContext& ctx) {
    long d = ode.order();
    mpfr_prec_t prec = ctx.prec_bits();
    size_t len = f.length();
    ShiftedODE sh = shift_ode(ode, at, len + static_cast<size_t>(d) + 2, prec, ctx.digits);
    // derivatives of f, aligned to exponent rho - d
    std::vector<LogSeries> der{f};
    for (long m = 1; m <= d; m++) der.push_back(der.back().derivative());
    LogSeries acc;
    acc.rho = f.rho - Rat(d);
    size_t logmax = 0;
    for (const auto& g : der) logmax = std::max(logmax, g.log_order());
    acc.parts.assign(logmax, CSeries::zero(len, prec));
    for (long i = 0; i <= d; i++) {
        const LogSeries& g = der[static_cast<size_t>(d - i)]; // f^(d-i)
        long up = i;                                          // w^(rho-(d-i)) = w^(rho-d) * w^i
        for (size_t t = 0; t < g.log_order(); t++) {
            // shifted-up copy of the part, then multiply by q_i
            CSeries part = CSeries::zero(len, prec);
            for (size_t k = 0; k + static_cast<size_t>(up) < len && k < g.parts[t].size(); k++)
                part.c[k + static_cast<size_t>(up)] = g.parts[t].c[k];
            CSeries qi = CSeries::zero(len, prec);
            for (size_t k = 0; k < len && k < sh.q[static_cast<size_t>(i)].size(); k++)
                qi.c[k] = sh.q[static_cast<size_t>(i)].c[k];
            acc.parts[t] = acc.parts[t] + part * qi;
        }
    }
    return acc;
}

RatSeries exact_holomorphic_series(const LinearODE& ode, const Rat& z0,
                                   const std::vector<Rat>& jet, size_t len) {
    long d = ode.order();
    std::vector<RatPoly> q;
    for (const auto& p : ode.coeffs) q.push_back(p.shift(z0));
    if (q[0].coeff(0) == 0) throw SingularExpansionPoint("exact series at singular point");
    std::vector<Rat> a(len, Rat(0));
    for (size_t i = 0; i < jet.size() && i < len; i++) {
        Rat fact(1);
        for (size_t u = 2; u <= i; u++) fact *= Rat(static_cast<long>(u));
        a[i] = jet[i] / fact;
    }
    for (size_t t = 0; t + static_cast<size_t>(d) < len; t++) {
        Rat rhs(0);
        for (long i = 0; i <= d; i++) {
            long dv = d - i;
            for (size_t l = 0; l <= t; l++) {
                if (i == 0 && l == 0) continue;
                size_t ai = t - l + static_cast<size_t>(dv);
                if (ai >= len) continue;
                Rat ff(1);
                for (long u = 0; u < dv; u++) ff *= Rat(static_cast<long>(ai) - u);
                rhs += q[static_cast<size_t>(i)].coeff(l) * a[ai] * ff;
            }
        }
        Rat ffd(1);
        for (long u = 0; u < d; u++) ffd *= Rat(static_cast<long>(t) + d - u);
        a[t + static_cast<size_t>(d)] = -rhs / (q[0].coeff(0) * ffd);
    }
    return RatSeries(std::move(a));
}

} // namespace periods
