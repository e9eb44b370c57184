#include "periods/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace periods {

// -------------------------------------------------------------------- CMat

CMat CMat::mul(const CMat& o) const {
    mpfr_prec_t p = a.empty() ? 64 : a[0].prec();
    CMat r(rows, o.cols, p);
    for (size_t i = 0; i < rows; i++)
        for (size_t k = 0; k < cols; k++)
            for (size_t j = 0; j < o.cols; j++) r.at(i, j).add_mul(at(i, k), o.at(k, j));
    return r;
}

namespace {

// Gaussian elimination with partial pivoting: A X = B, in place.
CMat solve_linear(CMat A, CMat B) {
    size_t n = A.rows;
    for (size_t col = 0; col < n; col++) {
        size_t piv = col;
        Real best = A.at(col, col).abs();
        for (size_t i = col + 1; i < n; i++) {
            Real v = A.at(i, col).abs();
            if (v > best) { best = v; piv = i; }
        }
        if (best.is_zero()) throw PrecisionExhausted("singular linear system in continuation");
        if (piv != col) {
            for (size_t j = 0; j < n; j++) std::swap(A.at(piv, j), A.at(col, j));
            for (size_t j = 0; j < B.cols; j++) std::swap(B.at(piv, j), B.at(col, j));
        }
        Complex inv = Complex(1, A.at(col, col).prec()) / A.at(col, col);
        for (size_t j = col; j < n; j++) A.at(col, j) *= inv;
        for (size_t j = 0; j < B.cols; j++) B.at(col, j) *= inv;
        for (size_t i = 0; i < n; i++) {
            if (i == col || A.at(i, col).is_zero()) continue;
            Complex f = A.at(i, col);
            for (size_t j = col; j < n; j++) A.at(i, j) -= f * A.at(col, j);
            for (size_t j = 0; j < B.cols; j++) B.at(i, j) -= f * B.at(col, j);
        }
    }
    return B;
}

} // namespace

CMat CMat::inverse() const {
    mpfr_prec_t p = a[0].prec();
    CMat id(rows, rows, p);
    for (size_t i = 0; i < rows; i++) id.at(i, i) = Complex(1, p);
    return solve_linear(*this, id);
}

CMat CMat::solve_right(const CMat& rhs) const {
    // X * A = rhs  <=>  A^T X^T = rhs^T
    mpfr_prec_t p = a[0].prec();
    CMat At(cols, rows, p), Rt(rhs.cols, rhs.rows, p);
    for (size_t i = 0; i < rows; i++)
        for (size_t j = 0; j < cols; j++) At.at(j, i) = at(i, j);
    for (size_t i = 0; i < rhs.rows; i++)
        for (size_t j = 0; j < rhs.cols; j++) Rt.at(j, i) = rhs.at(i, j);
    CMat Xt = solve_linear(At, Rt);
    CMat X(rhs.rows, rows, p);
    for (size_t i = 0; i < Xt.rows; i++)
        for (size_t j = 0; j < Xt.cols; j++) X.at(j, i) = Xt.at(i, j);
    return X;
}

IntMat round_integer(const CMat& m, const Real& tol, Real* residual) {
    mpfr_prec_t p = m.a[0].prec();
    IntMat out(m.rows, m.cols);
    Real worst(0L, p);
    for (size_t i = 0; i < m.rows; i++)
        for (size_t j = 0; j < m.cols; j++) {
            Int z = m.at(i, j).re.round_to_int();
            Real r = (m.at(i, j) - Complex(Real(Rat(z), p), Real(0L, p))).abs();
            if (r > worst) worst = r;
            out(i, j) = z;
        }
    if (residual) *residual = worst;
    if (!(worst < tol))
        throw PrecisionExhausted("integer rounding residual " + worst.str(3) + " exceeds " +
                                 tol.str(3));
    return out;
}

// -------------------------------------------------------------------- path

namespace {

double dist_to_singular(std::complex<double> z, const std::vector<std::complex<double>>& sing,
                        std::complex<double>* exclude1, std::complex<double>* exclude2) {
    double best = 1e300;
    for (const auto& s : sing) {
        if (exclude1 && std::abs(s - *exclude1) < 1e-9) continue;
        if (exclude2 && std::abs(s - *exclude2) < 1e-9) continue;
        best = std::min(best, std::abs(z - s));
    }
    return best;
}

struct DPath {
    struct Piece {
        bool is_arc;
        std::complex<double> p0, p1, center;
        double radius, th0, th1, len;
    };
    std::vector<Piece> pieces;
    double total = 0;

    void add_segment(std::complex<double> p, std::complex<double> q) {
        if (std::abs(q - p) < 1e-15) return;
        pieces.push_back({false, p, q, {}, 0, 0, 0, std::abs(q - p)});
        total += pieces.back().len;
    }
    void add_arc(std::complex<double> c, double r) {
        // over the top, left to right
        Piece pc{true, c - r, c + r, c, r, M_PI, 0.0, M_PI * r};
        pieces.push_back(pc);
        total += pc.len;
    }
    std::complex<double> at(double s) const {
        for (const auto& pc : pieces) {
            if (s <= pc.len + 1e-15) {
                double f = std::max(0.0, std::min(1.0, pc.len > 0 ? s / pc.len : 0.0));
                if (!pc.is_arc) return pc.p0 + (pc.p1 - pc.p0) * f;
                double th = pc.th0 + (pc.th1 - pc.th0) * f;
                return pc.center + std::polar(pc.radius, th);
            }
            s -= pc.len;
        }
        return pieces.back().p1;
    }
};

} // namespace

PathPlan plan_path(const Real& a, const Real& b, const std::vector<Complex>& singular,
                   double match_frac, mpfr_prec_t prec) {
    double av = a.to_double(), bv = b.to_double();
    if (!(av < bv)) throw NotAdjacent("interval endpoints out of order");
    std::vector<std::complex<double>> sing;
    sing.reserve(singular.size());
    for (const auto& s : singular) sing.emplace_back(s.re.to_double(), s.im.to_double());
    std::complex<double> ca(av, 0), cb(bv, 0);

    // interior real singular points force detours
    std::vector<double> interior;
    double span = bv - av;
    for (const auto& s : sing)
        if (std::abs(s.imag()) < 1e-12 && s.real() > av + 1e-12 * span && s.real() < bv - 1e-12 * span)
            interior.push_back(s.real());
    std::sort(interior.begin(), interior.end());

    DPath path;
    double cursor = av;
    for (size_t i = 0; i < interior.size(); i++) {
        double x = interior[i];
        double room = std::min(x - av, bv - x);
        if (i > 0) room = std::min(room, (x - interior[i - 1]) / 2);
        if (i + 1 < interior.size()) room = std::min(room, (interior[i + 1] - x) / 2);
        double r = 0.5 * room;
        path.add_segment({cursor, 0}, {x - r, 0});
        path.add_arc({x, 0}, r);
        cursor = x + r;
    }
    path.add_segment({cursor, 0}, cb);

    double q = match_frac;
    auto rho = [&](std::complex<double> z, bool excl_a, bool excl_b) {
        return dist_to_singular(z, sing, excl_a ? &ca : nullptr, excl_b ? &cb : nullptr);
    };

    PathPlan plan;
    plan.a = a;
    plan.b = b;
    for (const auto& pc : path.pieces) {
        PathPiece out;
        out.is_arc = pc.is_arc;
        out.p0 = Complex(Real(pc.p0.real(), prec), Real(pc.p0.imag(), prec));
        out.p1 = Complex(Real(pc.p1.real(), prec), Real(pc.p1.imag(), prec));
        out.center = Complex(Real(pc.center.real(), prec), Real(pc.center.imag(), prec));
        out.radius = Real(pc.radius, prec);
        out.theta0 = Real(pc.th0, prec);
        out.theta1 = Real(pc.th1, prec);
        out.length = Real(pc.len, prec);
        plan.pieces.push_back(out);
    }
    plan.detoured = interior;

    auto push_center = [&](std::complex<double> z, double dist) {
        plan.centers.push_back(Complex(Real(z.real(), prec), Real(z.imag(), prec)));
        plan.radii.push_back(Real(0.75 * dist, prec));
    };
    auto push_match = [&](std::complex<double> z) {
        plan.matchpoints.push_back(Complex(Real(z.real(), prec), Real(std::max(0.0, z.imag()), prec)));
    };

    double rho_b = rho(cb, true, true);
    double pos = 0;
    std::complex<double> cur = ca;
    double rho_cur = rho(ca, true, false);
    push_center(ca, rho_cur);
    for (int guard = 0; guard < 1000000; guard++) {
        // hand off into the final disk at b when its matching point is in reach;
        // the first disk is anchored at a singular point, so its matching point
        // must stay strictly inside the path
        double final_match_pos = path.total - q * rho_b;
        double candidate = std::max(
            pos == 0 ? std::min(0.9 * q * rho_cur, path.total * 0.5) : pos, final_match_pos);
        if (candidate <= pos + 0.95 * q * rho_cur &&
            std::abs(path.at(candidate) - cur) <= 0.95 * q * rho_cur) {
            push_match(path.at(candidate));
            push_center(cb, rho_b);
            return plan;
        }
        double mpos = pos + 0.9 * q * rho_cur;
        std::complex<double> m = path.at(mpos);
        double rho_m = rho(m, false, false);
        double cpos = mpos + 0.9 * (q / (1 + q)) * rho_m;
        if (cpos >= final_match_pos) cpos = (mpos + final_match_pos) / 2;
        std::complex<double> cnew = path.at(cpos);
        push_match(m);
        push_center(cnew, rho(cnew, false, false));
        pos = cpos;
        cur = cnew;
        rho_cur = rho(cur, false, false);
        if (rho_cur <= 0) throw PrecisionExhausted("path planner hit a singular point");
    }
    throw PrecisionExhausted("path planner failed to terminate");
}

// --------------------------------------------------------------- frobenius

FrobeniusData make_frobenius(const LinearODE& phi, const ExpansionPoint& at,
                             const std::vector<Complex>& singular, const PrecisionContext& ctx) {
    FrobeniusData f;
    f.at = at;
    f.basis = frobenius_basis(phi, at, ctx);
    for (const auto& s : f.basis) f.primitives.push_back(s.primitive());
    mpfr_prec_t prec = ctx.prec_bits();
    Real best(0L, prec);
    bool first = true;
    for (const auto& s : singular) {
        Real d = (s - at.z).abs();
        if (d < Real::pow10(-9, prec)) continue; // the anchor itself
        if (first || d < best) { best = d; first = false; }
    }
    f.radius = first ? Real(1L, prec) : best;
    return f;
}

CMat interpolate_in_basis(const FrobeniusData& frob, const std::vector<Complex>& points,
                          const std::vector<std::vector<Complex>>& values) {
    size_t d = frob.basis.size();
    if (points.size() != d) throw InvalidParameter("need exactly d interpolation points");
    mpfr_prec_t prec = points[0].prec();
    CMat V(d, d, prec); // V[l][i] = F_i(points[l])
    for (size_t l = 0; l < d; l++) {
        Complex w = points[l] - frob.at.z;
        for (size_t i = 0; i < d; i++) V.at(l, i) = frob.basis[i].eval(w);
    }
    CMat rhs(values.size(), d, prec);
    for (size_t m = 0; m < values.size(); m++)
        for (size_t l = 0; l < d; l++) rhs.at(m, l) = values[m][l];
    // solve B V^T = rhs  (B[m][i] F_i(z_l) = values[m][l])
    CMat Vt(d, d, prec);
    for (size_t i = 0; i < d; i++)
        for (size_t j = 0; j < d; j++) Vt.at(i, j) = V.at(j, i);
    return Vt.solve_right(rhs);
}

IntMat monodromy_integer(const FrobeniusData& frob, const CMat& B, const Real& tol,
                         Real* residual) {
    size_t d = frob.basis.size();
    mpfr_prec_t prec = frob.at.z.prec();
    // sample points on a small circle
    std::vector<Complex> w(d, Complex(prec));
    Real r = frob.radius * Real(0.31, prec);
    for (size_t l = 0; l < d; l++) {
        Real ang = Real::pi(prec) * 2 * Real((static_cast<double>(l) + 0.37) / static_cast<double>(d), prec);
        w[l] = Complex(ang.cos(), ang.sin()) * r;
    }
    CMat V(d, d, prec), Vp(d, d, prec);
    for (size_t i = 0; i < d; i++) {
        LogSeries looped = frob.basis[i].monodromy_ccw();
        for (size_t l = 0; l < d; l++) {
            V.at(i, l) = frob.basis[i].eval(w[l]);
            Vp.at(i, l) = looped.eval(w[l]);
        }
    }
    // T V = Vp  =>  T = Vp * V^-1 (rows indexed like basis)
    CMat T = V.solve_right(Vp);
    CMat N = B.mul(T).mul(B.inverse());
    return round_integer(N, tol, residual);
}

// ------------------------------------------------------------ continuation

ContinuationResult continue_interval(const LinearODE& phi, const FrobeniusData& left,
                                     const CMat& B, const ExpansionPoint& right_at,
                                     const std::vector<Complex>& singular,
                                     const PrecisionContext& ctx, long accuracy_digits,
                                     PathPlan* reuse_plan) {
    mpfr_prec_t prec = ctx.prec_bits();
    size_t d = static_cast<size_t>(phi.order());
    size_t m_count = B.rows;
    double match_frac =
        std::pow(10.0, -static_cast<double>(accuracy_digits) / static_cast<double>(ctx.series_order));

    ContinuationResult res;
    if (reuse_plan && !reuse_plan->centers.empty()) {
        res.plan = *reuse_plan;
    } else {
        res.plan = plan_path(Real(left.at.z.re), Real(right_at.z.re), singular, match_frac, prec);
        if (reuse_plan) *reuse_plan = res.plan;
    }
    const PathPlan& plan = res.plan;

    // current representation: Q_m = const_m + sum_i coeff[m][i] * G_i
    std::vector<Complex> cconst(m_count, Complex(prec));
    std::vector<std::vector<Complex>> coeff(m_count, std::vector<Complex>(d, Complex(prec)));
    for (size_t m = 0; m < m_count; m++)
        for (size_t i = 0; i < d; i++) coeff[m][i] = B.at(m, i);
    const std::vector<LogSeries>* cur_basis = &left.basis;
    const std::vector<LogSeries>* cur_prims = &left.primitives;
    Complex cur_center = left.at.z;
    std::vector<LogSeries> mid_basis, mid_prims;

    FrobeniusData right;
    for (size_t step = 0; step + 1 < plan.centers.size(); step++) {
        const Complex& match = plan.matchpoints[step];
        // jets of all Q_m at the matching point from the current representation
        std::vector<std::vector<Complex>> jets(m_count);
        {
            Complex w = match - cur_center;
            // evaluate basis jets once
            std::vector<std::vector<Complex>> bj(d);
            std::vector<Complex> pv(d, Complex(prec));
            for (size_t i = 0; i < d; i++) {
                bj[i] = (*cur_basis)[i].eval_jet(w, d);
                pv[i] = (*cur_prims)[i].eval(w);
            }
            for (size_t m = 0; m < m_count; m++) {
                jets[m].assign(d + 1, Complex(prec));
                jets[m][0] = cconst[m];
                for (size_t i = 0; i < d; i++) {
                    jets[m][0] += coeff[m][i] * pv[i];
                    for (size_t t = 0; t < d; t++) jets[m][t + 1] += coeff[m][i] * bj[i][t];
                }
            }
        }
        // next disk
        bool last = (step + 2 == plan.centers.size());
        const Complex& cnew = plan.centers[step + 1];
        if (last) {
            right = make_frobenius(phi, right_at, singular, ctx);
            cur_basis = &right.basis;
            cur_prims = &right.primitives;
            cur_center = right.at.z;
        } else {
            ExpansionPoint at{cnew, std::nullopt};
            mid_basis = holomorphic_basis(phi, at, ctx);
            mid_prims.clear();
            for (const auto& s : mid_basis) mid_prims.push_back(s.primitive());
            cur_basis = &mid_basis;
            cur_prims = &mid_prims;
            cur_center = cnew;
        }
        // match d derivatives of Q' and then fix the constants:
        // Q'_m(w) = sum_i coeff_i F_i(w); jets[m][1..d] give Q^(t) at match
        Complex w = match - cur_center;
        CMat V(d, d, prec); // V[t][i] = F_i^(t)(match)
        std::vector<Complex> pv(d, Complex(prec));
        for (size_t i = 0; i < d; i++) {
            auto bj = (*cur_basis)[i].eval_jet(w, d);
            for (size_t t = 0; t < d; t++) V.at(t, i) = bj[t];
            pv[i] = (*cur_prims)[i].eval(w);
        }
        CMat rhs(m_count, d, prec);
        for (size_t m = 0; m < m_count; m++)
            for (size_t t = 0; t < d; t++) rhs.at(m, t) = jets[m][t + 1];
        // coeff * V^T = rhs
        CMat Vt(d, d, prec);
        for (size_t i = 0; i < d; i++)
            for (size_t j = 0; j < d; j++) Vt.at(i, j) = V.at(j, i);
        CMat sol = Vt.solve_right(rhs);
        for (size_t m = 0; m < m_count; m++) {
            Complex acc(prec);
            for (size_t i = 0; i < d; i++) {
                coeff[m][i] = sol.at(m, i);
                acc += sol.at(m, i) * pv[i];
            }
            cconst[m] = jets[m][0] - acc;
        }
    }
    // value at the right endpoint: the primitives vanish there
    res.q.assign(m_count, Complex(prec));
    for (size_t m = 0; m < m_count; m++) res.q[m] = cconst[m];
    res.C = CMat(m_count, d, prec);
    for (size_t m = 0; m < m_count; m++)
        for (size_t i = 0; i < d; i++) res.C.at(m, i) = coeff[m][i];
    res.right = std::move(right);
    return res;
}

} // namespace periods
