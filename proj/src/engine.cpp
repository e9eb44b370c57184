#include "periods/engine.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "periods/quadrature.hpp"

namespace periods {

namespace fs = std::filesystem;

// The vanishing-cycle formulas act on coefficient columns; our N/Theta act on
// the row vector of basis cycles, so the operator handed to them is the
// transpose (fixed against the worked Type II tables).
static constexpr bool kOperatorIsTranspose = true;

// ----------------------------------------------------------------- helpers

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::vector<long> generic_weights(unsigned long seed, size_t count) {
    std::vector<long> out(count);
    for (size_t i = 0; i < count; i++)
        out[i] = 1 + static_cast<long>(splitmix64(seed * 0x9e3779b9ULL + i) % 7);
    return out;
}

namespace {

std::string hex_str(const Real& x) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", x.raw());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

Real real_from_hex(const std::string& s, mpfr_prec_t prec) {
    Real x(prec);
    mpfr_set_str(x.raw(), s.c_str(), 0, MPFR_RNDN);
    return x;
}

// minpoly of -1/s from the minpoly of s (reverse with alternating signs)
RatPoly invert_minpoly(const RatPoly& p) {
    size_t d = static_cast<size_t>(p.degree());
    std::vector<Rat> v(d + 1);
    for (size_t i = 0; i <= d; i++) {
        Rat c = p.coeff(i);
        v[d - i] = (i % 2 == 0) ? c : -c;
    }
    return RatPoly(std::move(v));
}

ExpansionPoint to_chart_point(const PointP1& p, bool wchart, mpfr_prec_t prec) {
    if (!wchart) {
        if (p.is_infinity()) throw InputError("infinity has no z-chart coordinate");
        ExpansionPoint e{Complex(p.value(prec), Real(0L, prec)), std::nullopt};
        if (const Rat* q = p.exact_rational()) e.exact = *q;
        return e;
    }
    if (p.is_infinity())
        return {Complex(Real(0L, prec), Real(0L, prec)), Rat(0)};
    if (const Rat* q = p.exact_rational()) {
        Rat w = Rat(-1) / *q;
        w.canonicalize();
        return {Complex(Real(w, prec), Real(0L, prec)), w};
    }
    const AlgebraicReal& a = std::get<AlgebraicReal>(p.v);
    AlgebraicReal b{invert_minpoly(a.minpoly), -1.0 / a.approx};
    return {Complex(b.value(prec), Real(0L, prec)), std::nullopt};
}

// ---- 3x3 symmetric-square data lifted back to the 4x4 cycle lattice ----

Int isqrt_exact(const Int& x) {
    if (x < 0 || mpz_perfect_square_p(x.get_mpz_t()) == 0)
        throw PrecisionExhausted("symmetric-square entry is not a perfect square");
    Int r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

IntMat lift_sym2(const IntMat& S) {
    // recover m = [a b; c d] from Sym^2(m) in the (11, 12, 22) basis, then
    // return kron(m, m); the global sign of m is immaterial.
    Int a, b, c, d;
    a = isqrt_exact(S(0, 0));
    if (a != 0) {
        if (S(0, 1) % (2 * a) != 0 || S(1, 0) % a != 0)
            throw PrecisionExhausted("symmetric-square lift: non-integral entries");
        b = S(0, 1) / (2 * a);
        c = S(1, 0) / a;
        Int num = S(1, 1) - b * c;
        if (num % a != 0) throw PrecisionExhausted("symmetric-square lift failed");
        d = num / a;
    } else {
        b = isqrt_exact(S(0, 2));
        if (b == 0 || S(1, 1) % b != 0 || S(1, 2) % b != 0)
            throw PrecisionExhausted("symmetric-square lift failed (a = 0)");
        c = S(1, 1) / b;
        d = S(1, 2) / b;
    }
    IntMat m(2, 2);
    m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
    // verify
    IntMat chk(3, 3);
    chk(0, 0) = a * a; chk(0, 1) = 2 * a * b; chk(0, 2) = b * b;
    chk(1, 0) = a * c; chk(1, 1) = a * d + b * c; chk(1, 2) = b * d;
    chk(2, 0) = c * c; chk(2, 1) = 2 * c * d; chk(2, 2) = d * d;
    if (!(chk == S)) throw PrecisionExhausted("symmetric-square lift inconsistent");
    Int det = a * d - b * c;
    if (det != 1 && det != -1) throw PrecisionExhausted("symmetric-square lift not unimodular");
    IntMat out(4, 4);
    for (size_t i = 0; i < 2; i++)
        for (size_t j = 0; j < 2; j++)
            for (size_t k = 0; k < 2; k++)
                for (size_t l = 0; l < 2; l++)
                    out(2 * i + k, 2 * j + l) = m(i, j) * m(k, l);
    return out;
}

std::vector<Complex> lift_vec4(const std::vector<Complex>& q) {
    if (q.size() == 4) return q;
    return {q[0], q[1], q[1], q[2]};
}

// ----------------------------------------------------------------- sampler

struct ProductSampler {
    const WeierstrassSurface* c1 = nullptr;
    const WeierstrassSurface* c2 = nullptr;
    bool self = false;
    long wexp = 0;
    bool wneg = false;
    long quad_digits = 0;
    mpfr_prec_t prec = 64;
    bool have_prev = false;
    Complex prev1[2], prev2[2];

    static void canon_first(Complex& v) {
        mpfr_prec_t p = v.prec();
        Real t = v.abs() * Real::pow10(-8, p);
        if (v.re < -t || (v.re.abs() < t && v.im.sign() < 0)) v = -v;
    }
    static void canon_follow(Complex& v, const Complex& prev) {
        if ((v + prev).abs() < (v - prev).abs()) v = -v;
    }

    std::vector<Complex> sample(const Real& x) {
        Complex P1[2], P2[2];
        for (int u = 0; u < 2; u++) {
            P1[u] = elliptic_period(*c1, x, u + 1, quad_digits);
            if (have_prev) canon_follow(P1[u], prev1[u]);
            else canon_first(P1[u]);
            prev1[u] = P1[u];
        }
        if (self) {
            P2[0] = P1[0];
            P2[1] = P1[1];
        } else {
            for (int u = 0; u < 2; u++) {
                P2[u] = elliptic_period(*c2, x, u + 1, quad_digits);
                if (have_prev) canon_follow(P2[u], prev2[u]);
                else canon_first(P2[u]);
                prev2[u] = P2[u];
            }
        }
        have_prev = true;
        Real base = wneg ? -x : x;
        Real wf = base.pow_si(wexp);
        std::vector<Complex> out;
        if (self) {
            out = {P1[0] * P1[0], P1[0] * P1[1], P1[1] * P1[1]};
        } else {
            out = {P1[0] * P2[0], P1[0] * P2[1], P1[1] * P2[0], P1[1] * P2[1]};
        }
        for (auto& v : out) v = v * wf;
        return out;
    }
};

// ------------------------------------------------------------ engine state

struct ChartData {
    LinearODE phi;
    std::vector<Complex> sing;
    long d0 = 0;
    long wexp = 0;
    bool wneg = false;
    const WeierstrassSurface* c1 = nullptr;
    const WeierstrassSurface* c2 = nullptr;
};

struct IntervalOut {
    FrobeniusData startF;
    CMat B;
    ContinuationResult cont;
};

struct EngineState {
    const ExampleSpec* ex = nullptr;
    RunConfig cfg;
    mpfr_prec_t prec = 64;
    long accuracy = 0;
    long quad_digits = 0;
    WeierstrassSurface s1w, s2w;
    std::vector<PointP1> sigma;
    std::vector<std::pair<long, long>> types;
    size_t P = 0;
    bool self = false;
    size_t mcount = 4;
};

bool same_point(const PointP1& a, const PointP1& b) {
    if (a.is_infinity() || b.is_infinity()) return a.is_infinity() && b.is_infinity();
    const Rat *ra = a.exact_rational(), *rb = b.exact_rational();
    if (ra && rb) return *ra == *rb;
    return std::abs(a.approx() - b.approx()) < 1e-9 * (1 + std::abs(a.approx()));
}

EngineState setup_state(const ExampleSpec& ex, const RunConfig& cfg) {
    EngineState st;
    st.ex = &ex;
    st.cfg = cfg;
    st.prec = cfg.ctx.prec_bits();
    st.accuracy = cfg.ctx.digits + 5;
    st.quad_digits = cfg.ctx.digits + 5;
    st.self = ex.self_product;
    st.mcount = st.self ? 3 : 4;
    st.s1w = ex.s1.chart_w();
    st.s2w = st.self ? st.s1w : ex.s2.chart_w();

    // merge the two fiber lists into Sigma with type pairs
    std::vector<std::pair<PointP1, std::pair<long, long>>> pts;
    auto add = [&](const SingularFiber& f, bool first) {
        for (auto& [p, t] : pts)
            if (same_point(p, f.location)) {
                (first ? t.first : t.second) = f.kodaira_n;
                return;
            }
        pts.push_back({f.location, {first ? f.kodaira_n : 0, first ? 0 : f.kodaira_n}});
    };
    for (const auto& f : ex.s1.fibers) add(f, true);
    for (const auto& f : ex.s2.fibers) add(f, false);
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.first.is_infinity()) return false;
        if (b.first.is_infinity()) return true;
        return a.first.approx() < b.first.approx();
    });
    for (auto& [p, t] : pts) {
        st.sigma.push_back(p);
        st.types.push_back(t);
    }
    st.P = st.sigma.size();
    if (st.P < 3) throw InputError("fewer than three singular fibers");
    if (!st.sigma.back().is_infinity())
        throw InputError("expected a singular fiber at infinity");
    if (!(st.sigma.front().approx() < 0) || !(st.sigma[st.P - 2].approx() > 0))
        throw InputError("expected singular fibers on both sides of 0");
    return st;
}

ChartData build_chart(const EngineState& st, bool wchart, long n) {
    const PrecisionContext& ctx = st.cfg.ctx;
    ChartData cd;
    cd.c1 = wchart ? &st.s1w : &st.ex->s1;
    cd.c2 = wchart ? &st.s2w : &st.ex->s2;
    cd.wexp = wchart ? (2 * st.ex->k - 2 - n) : n;
    cd.wneg = wchart;
    size_t len = static_cast<size_t>(ctx.series_order);
    for (int attempt = 0;; attempt++) {
        try {
            RatSeries seed = seed_series_exact(*cd.c1, *cd.c2, Rat(0), len);
            seed = seed.shift_up(static_cast<size_t>(cd.wexp));
            cd.phi = find_min_ode(seed, 4, 10, 60);
            break;
        } catch (const NoODEFound&) {
            if (attempt >= 2) throw;
            len = len + len / 2; // raise series_order for the search only
        }
    }
    cd.d0 = cd.phi.order();
    cd.sing = [&] {
        std::vector<Complex> s;
        for (const auto& r : complex_roots(cd.phi.leading(), 192)) s.push_back(r.z);
        return s;
    }();
    return cd;
}

// interval geometry in its chart
struct IntervalGeom {
    bool wchart;
    ExpansionPoint left, right;
};

IntervalGeom interval_geom(const EngineState& st, size_t j) {
    IntervalGeom g;
    g.wchart = (j >= st.P - 2);
    const PointP1& L = st.sigma[j];
    const PointP1& R = st.sigma[(j + 1) % st.P];
    g.left = to_chart_point(L, g.wchart, st.prec);
    g.right = to_chart_point(R, g.wchart, st.prec);
    return g;
}

std::vector<std::vector<Complex>> sample_matrix(ProductSampler& sampler,
                                                const std::vector<Real>& xs, size_t mcount) {
    std::vector<std::vector<Complex>> vals(mcount);
    for (const Real& x : xs) {
        auto v = sampler.sample(x);
        for (size_t m = 0; m < mcount; m++) vals[m].push_back(v[m]);
    }
    return vals;
}

// one interval's full pipeline (optionally through the cache)
IntervalOut run_interval(const EngineState& st, const ChartData& cd, const IntervalGeom& g,
                         long weight, size_t j, PathPlan* plan_store) {
    const PrecisionContext& ctx = st.cfg.ctx;
    IntervalOut out;
    out.startF = make_frobenius(cd.phi, g.left, cd.sing, ctx);
    Real delta = out.startF.radius * Real(0.05, st.prec);
    for (int attempt = 0;; attempt++) {
        std::vector<Real> xs;
        std::vector<Complex> pts;
        for (size_t l = 0; l < static_cast<size_t>(cd.d0); l++) {
            Real x = g.left.z.re + delta * Real(1.0 + static_cast<double>(l) / 4.0, st.prec);
            xs.push_back(x);
            pts.push_back(Complex(x, Real(0L, st.prec)));
        }
        ProductSampler sampler{cd.c1, cd.c2, st.self, cd.wexp, cd.wneg, st.quad_digits, st.prec};
        auto vals = sample_matrix(sampler, xs, st.mcount);
        try {
            out.B = interpolate_in_basis(out.startF, pts, vals);
            break;
        } catch (const PrecisionExhausted&) {
            if (attempt >= 2) throw;
            delta = delta * Real(1.7, st.prec); // degenerate sample points: resample
        }
    }
    out.cont = continue_interval(cd.phi, out.startF, out.B, g.right, cd.sing, ctx, st.accuracy,
                                 plan_store);
    (void)weight;
    (void)j;
    return out;
}

// cross-chart transition data: interpolate the next interval's products in
// the left chart's Frobenius basis at the shared point
struct CrossData {
    FrobeniusData frob;
    CMat B;
};

CrossData cross_transition(const EngineState& st, const ChartData& cd_left,
                           const IntervalGeom& g_left, long /*weight*/) {
    const PrecisionContext& ctx = st.cfg.ctx;
    CrossData cx;
    cx.frob = make_frobenius(cd_left.phi, g_left.right, cd_left.sing, ctx);
    Real delta = cx.frob.radius * Real(0.05, st.prec);
    for (int attempt = 0;; attempt++) {
        std::vector<Real> xs;
        std::vector<Complex> pts;
        for (size_t l = 0; l < static_cast<size_t>(cd_left.d0); l++) {
            Real x = g_left.right.z.re + delta * Real(1.0 + static_cast<double>(l) / 4.0, st.prec);
            xs.push_back(x);
            pts.push_back(Complex(x, Real(0L, st.prec)));
        }
        ProductSampler sampler{cd_left.c1, cd_left.c2, st.self, cd_left.wexp, cd_left.wneg,
                               st.quad_digits, st.prec};
        auto vals = sample_matrix(sampler, xs, st.mcount);
        try {
            cx.B = interpolate_in_basis(cx.frob, pts, vals);
            return cx;
        } catch (const PrecisionExhausted&) {
            if (attempt >= 2) throw;
            delta = delta * Real(1.7, st.prec);
        }
    }
}

std::vector<Complex> apply_int(const IntMat& M, const std::vector<Complex>& v,
                               mpfr_prec_t prec) {
    std::vector<Complex> out(M.rows(), Complex(prec));
    for (size_t i = 0; i < M.rows(); i++)
        for (size_t j = 0; j < M.cols(); j++) {
            if (M(i, j) == 0) continue;
            out[i] += v[j] * Real(Rat(M(i, j)), prec);
        }
    return out;
}

// ----------------------------------------------------------------- caching

struct CacheKey {
    std::string dir, file;
    bool enabled() const { return !dir.empty(); }
    fs::path path() const { return fs::path(dir) / file; }
};

CacheKey cache_key(const EngineState& st, long weight, size_t j, bool wchart) {
    CacheKey k;
    k.dir = st.cfg.cache_dir;
    if (!k.dir.empty()) {
        std::ostringstream os;
        os << st.ex->id << "-w" << weight << "-i" << j << "-" << (wchart ? "w" : "z") << "-d"
           << st.cfg.ctx.digits << "-n" << st.cfg.ctx.series_order << ".json";
        k.file = os.str();
    }
    return k;
}

nlohmann::json cmat_json(const CMat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t i = 0; i < m.rows; i++) {
        nlohmann::json row = nlohmann::json::array();
        for (size_t j = 0; j < m.cols; j++)
            row.push_back({hex_str(m.at(i, j).re), hex_str(m.at(i, j).im)});
        rows.push_back(row);
    }
    return rows;
}

CMat cmat_from_json(const nlohmann::json& rows, mpfr_prec_t prec) {
    size_t r = rows.size(), c = r ? rows[0].size() : 0;
    CMat m(r, c, prec);
    for (size_t i = 0; i < r; i++)
        for (size_t j = 0; j < c; j++)
            m.at(i, j) = Complex(real_from_hex(rows[i][j][0].get<std::string>(), prec),
                                 real_from_hex(rows[i][j][1].get<std::string>(), prec));
    return m;
}

bool cache_load(const CacheKey& key, const EngineState& st, const ChartData& cd,
                const IntervalGeom& g, IntervalOut& out) {
    if (!key.enabled() || !fs::exists(key.path())) return false;
    std::ifstream in(key.path());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) return false;
    out.startF = make_frobenius(cd.phi, g.left, cd.sing, st.cfg.ctx);
    out.B = cmat_from_json(j.at("B"), st.prec);
    out.cont.C = cmat_from_json(j.at("C"), st.prec);
    auto qv = j.at("q");
    out.cont.q.clear();
    for (const auto& e : qv)
        out.cont.q.push_back(Complex(real_from_hex(e[0].get<std::string>(), st.prec),
                                     real_from_hex(e[1].get<std::string>(), st.prec)));
    out.cont.right = make_frobenius(cd.phi, g.right, cd.sing, st.cfg.ctx);
    return true;
}

void cache_store(const CacheKey& key, const IntervalOut& out) {
    if (!key.enabled()) return;
    fs::create_directories(key.dir);
    nlohmann::json j;
    j["B"] = cmat_json(out.B);
    j["C"] = cmat_json(out.cont.C);
    nlohmann::json qv = nlohmann::json::array();
    for (const auto& v : out.cont.q) qv.push_back({hex_str(v.re), hex_str(v.im)});
    j["q"] = qv;
    std::ofstream os(key.path());
    os << j.dump();
}

} // namespace

// -------------------------------------------------------------------- run

RunResult run_example(const ExampleSpec& ex, const RunConfig& cfg) {
    EngineState st = setup_state(ex, cfg);
    mpfr_prec_t prec = st.prec;
    const PrecisionContext& ctx = cfg.ctx;

    RunResult res;
    res.example_id = ex.id;
    res.ctx = ctx;
    for (size_t i = 0; i < st.P; i++) res.point_names.push_back(std::string(1, char('a' + i)));
    for (size_t i = 0; i < st.P; i++)
        res.interval_names.push_back(res.point_names[i] + res.point_names[(i + 1) % st.P]);

    // catalog fiber self-check
    {
        bool ok = ex.fibers.size() == st.P;
        for (size_t i = 0; ok && i < st.P; i++)
            ok = same_point(ex.fibers[i].location, st.sigma[i]) &&
                 ex.fibers[i].n1 == st.types[i].first && ex.fibers[i].n2 == st.types[i].second;
        res.checks.push_back({"catalog-fibers", ok ? "classification matches reference" : "MISMATCH", ok});
    }

    std::vector<long> weights = cfg.weights;
    if (weights.empty())
        for (long n = 0; n <= 2 * ex.k - 2; n++) weights.push_back(n);

    Real tol_int = Real::pow10(-(ctx.digits / 2), prec);
    Real tol_id = Real::pow10(-(ctx.digits - 20), prec);

    std::vector<IntervalGeom> geoms;
    for (size_t j = 0; j < st.P; j++) geoms.push_back(interval_geom(st, j));

    bool first_weight = true;
    for (long n : weights) {
        ChartData cz = build_chart(st, false, n);
        ChartData cw = build_chart(st, true, n);
        long d_expect = st.self ? 3 : 4;
        if (cz.d0 != d_expect || cw.d0 != d_expect) {
            res.checks.push_back({"ode-order",
                                  "weight " + std::to_string(n) + ": found orders " +
                                      std::to_string(cz.d0) + "/" + std::to_string(cw.d0) +
                                      " (expected " + std::to_string(d_expect) + ")",
                                  false});
            throw NoODEFound("minimal ODE order differs from the product-local-system rank");
        }

        // interval pipelines (parallel units)
        std::vector<IntervalOut> runs(st.P);
        std::vector<PathPlan> plans(st.P);
        auto run_one = [&](size_t j) {
            const ChartData& cd = geoms[j].wchart ? cw : cz;
            CacheKey key = cache_key(st, n, j, geoms[j].wchart);
            if (!cache_load(key, st, cd, geoms[j], runs[j])) {
                runs[j] = run_interval(st, cd, geoms[j], n, j, &plans[j]);
                cache_store(key, runs[j]);
            }
        };
        if (cfg.jobs > 1) {
            std::vector<std::future<void>> futs;
            size_t next = 0;
            while (next < st.P) {
                futs.clear();
                for (int t = 0; t < cfg.jobs && next < st.P; t++, next++)
                    futs.push_back(std::async(std::launch::async, run_one, next));
                for (auto& f : futs) f.get();
            }
        } else {
            for (size_t j = 0; j < st.P; j++) run_one(j);
        }

        // transitions at each point p (between interval p-1 and p, cyclically)
        WeightResult wr;
        wr.n = n;
        wr.d0 = cz.d0;
        std::vector<PointResult> pts(st.P);
        for (size_t p = 0; p < st.P; p++) {
            size_t jl = (p + st.P - 1) % st.P; // interval ending at p
            bool cross = geoms[jl].wchart != geoms[p].wchart;
            const ChartData& cd_left = geoms[jl].wchart ? cw : cz;
            PointResult pr;
            pr.name = res.point_names[p];
            pr.n1 = st.types[p].first;
            pr.n2 = st.types[p].second;
            CMat Bright;
            const FrobeniusData* rightF = nullptr;
            CrossData cx;
            if (cross) {
                cx = cross_transition(st, cd_left, geoms[jl], n);
                Bright = cx.B;
                rightF = &cx.frob;
            } else {
                Bright = runs[p].B;
                rightF = &runs[p].startF;
            }
            CMat Mc = runs[jl].cont.C.inverse();
            Mc = Bright.mul(Mc);
            Real mres(prec), nres(prec);
            IntMat Mm = round_integer(Mc, tol_int, &mres);
            IntMat Nm = monodromy_integer(*rightF, Bright, tol_int, &nres);
            pr.M = st.self ? lift_sym2(Mm) : Mm;
            pr.N = st.self ? lift_sym2(Nm) : Nm;
            pr.m_residual = mres;
            pr.n_residual = nres;
            pts[p] = std::move(pr);
        }

        // adapted vectors and monodromies
        std::vector<std::vector<Complex>> q4(st.P);
        for (size_t j = 0; j < st.P; j++) q4[j] = lift_vec4(runs[j].cont.q);
        IntMat A = IntMat::identity(4);
        std::vector<IntMat> Amats;
        for (size_t j = 0; j < st.P; j++) {
            if (j > 0) A = A * pts[j].M.inverse_unimodular();
            Amats.push_back(A);
        }
        wr.q = q4;
        wr.r.resize(st.P);
        for (size_t j = 0; j < st.P; j++) wr.r[j] = apply_int(Amats[j], q4[j], prec);
        for (size_t p = 0; p < st.P; p++)
            pts[p].Theta = Amats[p] * pts[p].N * Amats[p].inverse_unimodular();

        // consistency identities
        {
            IntMat mp = IntMat::identity(4);
            for (size_t p = st.P; p-- > 0;) mp = mp * pts[p].M;
            bool ok = mp == IntMat::identity(4);
            res.checks.push_back({"M-cycle(w" + std::to_string(n) + ")",
                                  ok ? "product = I" : "product != I:\n" + mp.str(), ok});
            IntMat tp = IntMat::identity(4);
            for (size_t p = 0; p < st.P; p++) tp = tp * pts[p].Theta;
            ok = tp == IntMat::identity(4);
            res.checks.push_back({"Theta-cycle(w" + std::to_string(n) + ")",
                                  ok ? "product = I" : "product != I:\n" + tp.str(), ok});
            std::vector<Complex> sum(4, Complex(prec));
            for (size_t j = 0; j < st.P; j++)
                for (size_t c = 0; c < 4; c++) sum[c] += wr.r[j][c];
            Real worst(0L, prec);
            for (const auto& v : sum)
                if (v.abs() > worst) worst = v.abs();
            ok = worst < tol_id;
            res.checks.push_back({"sum-r(w" + std::to_string(n) + ")", worst.str(3), ok});
            // lower-half-plane telescoped identity
            std::vector<Complex> tele = wr.r[0];
            IntMat acc = IntMat::identity(4);
            for (size_t j = 1; j < st.P; j++) {
                acc = acc * pts[j].Theta;
                auto term = apply_int(acc, wr.r[j], prec);
                for (size_t c = 0; c < 4; c++) tele[c] += term[c];
            }
            worst = Real(0L, prec);
            for (const auto& v : tele)
                if (v.abs() > worst) worst = v.abs();
            ok = worst < tol_id;
            res.checks.push_back({"telescoped(w" + std::to_string(n) + ")", worst.str(3), ok});
            Real mres(0L, prec), nres(0L, prec);
            for (const auto& pr : pts) {
                if (pr.m_residual > mres) mres = pr.m_residual;
                if (pr.n_residual > nres) nres = pr.n_residual;
            }
            res.checks.push_back({"integer-rounding(w" + std::to_string(n) + ")",
                                  "M " + mres.str(3) + ", N " + nres.str(3),
                                  mres < tol_int && nres < tol_int});
        }

        if (first_weight) {
            res.points = pts;
        } else {
            bool ok = true;
            for (size_t p = 0; p < st.P; p++)
                ok = ok && pts[p].M == res.points[p].M && pts[p].N == res.points[p].N &&
                     pts[p].Theta == res.points[p].Theta;
            res.checks.push_back({"matrices-weight-independent(w" + std::to_string(n) + ")",
                                  ok ? "equal" : "MISMATCH", ok});
        }
        res.weights.push_back(std::move(wr));
        first_weight = false;
    }

    // vanishing cycles and kernels (weight independent)
    std::vector<Subgroup> vcx, vcxh;
    try {
        for (size_t p = 0; p < st.P; p++) {
            IntMat T =
                kOperatorIsTranspose ? res.points[p].Theta.transpose() : res.points[p].Theta;
            vcx.push_back(vanishing_cycles_X(T, st.types[p].first, st.types[p].second));
            vcxh.push_back(vanishing_cycles_Xhat(T, st.types[p].first, st.types[p].second));
        }
    } catch (const EngineError& e) {
        res.checks.push_back({"vanishing-cycles", e.what(), false});
        return res;
    }
    auto assemble = [&](const std::vector<Subgroup>& vcs, IntMat& kernel_out,
                        std::vector<std::vector<Complex>>& span_out) {
        size_t total = 0;
        for (const auto& v : vcs) total += v.basis.rows();
        IntMat stacked(total, 4);
        size_t row = 0;
        std::vector<size_t> block_of_row(total);
        for (size_t p = 0; p < st.P; p++)
            for (size_t i = 0; i < vcs[p].basis.rows(); i++, row++) {
                block_of_row[row] = p;
                for (size_t c = 0; c < 4; c++) stacked(row, c) = vcs[p].basis(i, c);
            }
        kernel_out = kernel_rows(stacked);
        // telescoped partial sums q^{a -> s_p}
        span_out.assign(res.weights.size(), {});
        for (size_t wi = 0; wi < res.weights.size(); wi++) {
            std::vector<std::vector<Complex>> qtel(st.P, std::vector<Complex>(4, Complex(prec)));
            for (size_t p = 1; p < st.P; p++)
                for (size_t c = 0; c < 4; c++)
                    qtel[p][c] = qtel[p - 1][c] + res.weights[wi].r[p - 1][c];
            for (size_t t = 0; t < kernel_out.rows(); t++) {
                Complex val(prec);
                for (size_t rr = 0; rr < total; rr++) {
                    if (kernel_out(t, rr) == 0) continue;
                    size_t p = block_of_row[rr];
                    for (size_t c = 0; c < 4; c++) {
                        Int coef = kernel_out(t, rr) * stacked(rr, c);
                        if (coef == 0) continue;
                        val += qtel[p][c] * Real(Rat(coef), prec);
                    }
                }
                span_out[wi].push_back(val);
            }
        }
    };
    std::vector<std::vector<Complex>> span_xh, span_x;
    assemble(vcxh, res.kernel_xhat, span_xh);
    assemble(vcx, res.kernel_x, span_x);
    for (size_t wi = 0; wi < res.weights.size(); wi++) {
        res.weights[wi].span_xhat = span_xh[wi];
        res.weights[wi].span_x = span_x[wi];
    }

    long rel_digits = ctx.digits - 30;
    bool want_x = cfg.target != RunConfig::Target::Xhat;
    bool want_xh = cfg.target != RunConfig::Target::X;
    for (auto& wr : res.weights) {
        if (want_xh) wr.lat_xhat = lattice_from_values(wr.span_xhat, rel_digits);
        if (want_x) wr.lat_x = lattice_from_values(wr.span_x, rel_digits);
    }

    // weight combination (generic or the single requested weight)
    res.combo_coeffs.assign(res.weights.size(), 0);
    if (res.weights.size() == 1) {
        res.combo_coeffs[0] = 1;
    } else if (cfg.generic_combo) {
        res.combo_coeffs = generic_weights(cfg.seed, res.weights.size());
    }
    {
        std::vector<Complex> combo_xh(res.weights[0].span_xhat.size(), Complex(prec));
        std::vector<Complex> combo_x(res.weights[0].span_x.size(), Complex(prec));
        for (size_t wi = 0; wi < res.weights.size(); wi++) {
            Real c(res.combo_coeffs[wi], prec);
            for (size_t i = 0; i < combo_xh.size(); i++)
                combo_xh[i] += res.weights[wi].span_xhat[i] * c;
            for (size_t i = 0; i < combo_x.size(); i++)
                combo_x[i] += res.weights[wi].span_x[i] * c;
        }
        if (want_xh) res.lat_xhat = lattice_from_values(combo_xh, rel_digits);
        if (want_x) res.lat_x = lattice_from_values(combo_x, rel_digits);
    }
    if (want_x && want_xh && res.lat_xhat.rank == res.lat_x.rank && res.lat_xhat.rank > 0) {
        try {
            res.index_x_over_xhat = lattice_index(res.lat_xhat, res.lat_x, rel_digits);
        } catch (const EngineError& e) {
            res.checks.push_back({"lattice-index", e.what(), false});
        }
    }

    if (cfg.chart_check) {
        // find a finite interval with same-sign endpoints
        for (size_t j = 0; j + 2 < st.P; j++) {
            double l = st.sigma[j].approx(), r = st.sigma[j + 1].approx();
            if ((l > 0 && r > 0) || (l < 0 && r < 0)) {
                res.checks.push_back(
                    chart_consistency_check(ex, cfg, res, j, res.weights[0].n));
                break;
            }
        }
    }
    return res;
}

// ------------------------------------------------------------- comparisons

namespace {

long agreement_digits(const Complex& got, const Complex& ref, const Real& scale) {
    mpfr_prec_t p = got.prec();
    Real d = (got - ref).abs();
    Real base = ref.abs();
    if (base < scale * Real::pow10(-30, p)) base = scale;
    if (d.is_zero()) return 999;
    double lg = -mpfr_get_d(((d / base).log() / Real(10L, p).log()).raw(), MPFR_RNDN);
    long out = static_cast<long>(lg);
    return out > 999 ? 999 : out;
}

std::vector<std::array<int, 4>> sign_patterns(bool self) {
    std::vector<std::array<int, 4>> out;
    if (self) {
        out.push_back({1, 1, 1, 1});
        out.push_back({1, -1, -1, 1});
        return out;
    }
    for (int s2 = -1; s2 <= 1; s2 += 2)
        for (int s3 = -1; s3 <= 1; s3 += 2)
            for (int s4 = -1; s4 <= 1; s4 += 2)
                out.push_back({s3, s4, s2 * s3, s2 * s4}); // (1,s2) x (s3,s4)
    return out;
}

IntMat pattern_diag(const std::array<int, 4>& e) {
    IntMat d = IntMat::identity(4);
    for (size_t i = 0; i < 4; i++) d(i, i) = e[i];
    return d;
}

} // namespace

// --------------------------------------------------------- chart crosscheck

CheckResult chart_consistency_check(const ExampleSpec& ex, const RunConfig& cfg,
                                    const RunResult& run, size_t interval_idx, long weight) {
    EngineState st = setup_state(ex, cfg);
    mpfr_prec_t prec = st.prec;
    ChartData cw = build_chart(st, true, weight);
    // interval in w-chart coordinates (endpoints are finite, same sign)
    IntervalGeom g;
    g.wchart = true;
    g.left = to_chart_point(st.sigma[interval_idx], true, prec);
    g.right = to_chart_point(st.sigma[interval_idx + 1], true, prec);
    PathPlan plan;
    IntervalOut out = run_interval(st, cw, g, weight, interval_idx, &plan);
    auto qw = lift_vec4(out.cont.q);
    const WeightResult* wr = nullptr;
    for (const auto& w : run.weights)
        if (w.n == weight) wr = &w;
    if (!wr) return {"chart-consistency", "weight not found", false};
    const auto& qz = wr->q[interval_idx];
    // compare up to the per-interval sign pattern
    Real best(0L, prec);
    bool first = true;
    for (const auto& e : sign_patterns(st.self)) {
        Real worst(0L, prec);
        for (size_t c = 0; c < 4; c++) {
            Complex d = qw[c] * Real(static_cast<long>(e[c]), prec) - qz[c];
            if (d.abs() > worst) worst = d.abs();
        }
        if (first || worst < best) { best = worst; first = false; }
    }
    Real tol = Real::pow10(-(cfg.ctx.digits / 2), prec);
    return {"chart-consistency", best.str(3), best < tol};
}

TableComparison compare_section4(const RunResult& run, const Section4Tables& ref,
                                 const WeightResult& w, mpfr_prec_t prec) {
    TableComparison out;
    size_t P = run.point_names.size();
    if (P != 5) return out;
    auto pats = sign_patterns(false);
    Real scale(1L, prec);
    // per-interval pattern from the q vectors
    std::vector<std::array<int, 4>> chosen(P);
    std::vector<long> qdigits(P);
    for (size_t j = 0; j < P; j++) {
        long best = -1;
        for (const auto& e : pats) {
            long mind = 1000;
            for (size_t c = 0; c < 4; c++) {
                Complex got = w.q[j][c] * Real(static_cast<long>(e[c]), prec);
                long d = agreement_digits(got, ref.q[j][c].value(prec), scale);
                mind = std::min(mind, d);
            }
            if (mind > best) {
                best = mind;
                chosen[j] = e;
            }
        }
        qdigits[j] = best;
        out.patterns.push_back(0);
        out.items.push_back({"q[" + run.interval_names[j] + "]",
                             std::to_string(best) + " digits", best >= 30});
    }
    // matrices with the chosen patterns: M'_p = E_p M_p E_{p-1}
    bool mats_ok = true;
    for (size_t p = 0; p < P; p++) {
        IntMat Ep = pattern_diag(chosen[p]);
        IntMat Eprev = pattern_diag(chosen[(p + P - 1) % P]);
        IntMat got = Ep * run.points[p].M * Eprev;
        bool ok = got == ref.M[p];
        mats_ok = mats_ok && ok;
        out.items.push_back({"M[" + run.point_names[p] + "]", ok ? "exact" : "MISMATCH", ok});
    }
    // adapted data transforms by E_0 globally
    IntMat E0 = pattern_diag(chosen[0]);
    long rdigits = 1000;
    for (size_t j = 0; j < P; j++) {
        long mind = 1000;
        for (size_t c = 0; c < 4; c++) {
            Complex got = w.r[j][c] * Real(static_cast<long>(chosen[0][c]), prec);
            mind = std::min(mind, agreement_digits(got, ref.r[j][c].value(prec), scale));
        }
        rdigits = std::min(rdigits, mind);
        out.items.push_back({"r[" + run.interval_names[j] + "]",
                             std::to_string(mind) + " digits", mind >= 30});
    }
    for (size_t p = 0; p < P; p++) {
        IntMat got = E0 * run.points[p].Theta * E0;
        bool ok = got == ref.Theta[p];
        mats_ok = mats_ok && ok;
        out.items.push_back({"Theta[" + run.point_names[p] + "]", ok ? "exact" : "MISMATCH", ok});
    }
    out.min_digits = std::min(*std::min_element(qdigits.begin(), qdigits.end()), rdigits);
    out.matched = mats_ok && out.min_digits >= 30;
    return out;
}

CheckResult compare_lattice(const PeriodLattice& lat, const std::vector<RefComplex>& ref,
                            long need_digits, mpfr_prec_t prec, const std::string& name) {
    if (static_cast<size_t>(lat.rank) != ref.size())
        return {name, "rank " + std::to_string(lat.rank) + " != " + std::to_string(ref.size()),
                false};
    Real scale(0L, prec);
    for (const auto& r : ref) {
        Real a = r.value(prec).abs();
        if (a > scale) scale = a;
    }
    std::vector<bool> used(ref.size(), false);
    long mind = 1000;
    for (const auto& b : lat.basis) {
        long best = -1;
        size_t best_i = 0;
        for (size_t i = 0; i < ref.size(); i++) {
            if (used[i]) continue;
            Complex rv = ref[i].value(prec);
            long d = std::max(agreement_digits(b, rv, scale), agreement_digits(-b, rv, scale));
            if (d > best) { best = d; best_i = i; }
        }
        used[best_i] = true;
        mind = std::min(mind, best);
    }
    return {name, std::to_string(mind) + " digits", mind >= need_digits};
}

std::vector<CheckResult> verify_modular(const PeriodLattice& xhat, const ModularData& mod,
                                        mpfr_prec_t prec) {
    std::vector<CheckResult> out;
    Complex pw1(Real(mod.pw1_re, prec), Real(mod.pw1_im, prec));
    Complex pw2(Real(mod.pw2_re, prec), Real(mod.pw2_im, prec));
    Real tol = Real::pow10(-25, prec);
    for (size_t i = 0; i < mod.combos.size(); i++) {
        const auto& c = mod.combos[i];
        Complex alpha(Real(c.a_re, prec), Real(c.a_im, prec));
        Complex beta(Real(c.b_re, prec), Real(c.b_im, prec));
        Complex v = alpha * pw1 + beta * pw2;
        Real best(0L, prec);
        bool first = true;
        for (const auto& b : xhat.basis) {
            for (int s = -1; s <= 1; s += 2) {
                Real d = (b * Real(static_cast<long>(s), prec) - v).abs();
                if (first || d < best) { best = d; first = false; }
            }
        }
        out.push_back({"modular[" + mod.label + "#" + std::to_string(i) + "]", best.str(3),
                       !first && best < tol});
    }
    return out;
}

} // namespace periods
