#include "periods/quadrature.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace periods {

namespace {

struct LevelNodes {
    // nodes for strictly positive k at step h = 2^-level (odd k only for
    // level > min_level); the symmetric negatives reuse these.
    std::vector<QuadNode> nodes;
};

std::map<std::pair<mpfr_prec_t, int>, LevelNodes> cache;
std::mutex cache_mutex;

constexpr int kMinLevel = 3;
constexpr int kMaxLevel = 13;

// abscissas/weights at t = k h: u = pi/2 sinh t, s = tanh u,
// 1 -+ s = 2 e^(-+2u) / (1 + e^(-+2u)), w = (pi/2 cosh t) / cosh(u)^2.
QuadNode make_node(const Real& t, mpfr_prec_t prec) {
    Real half_pi = Real::pi(prec) / 2;
    Real u = half_pi * t.sinh();
    Real e2u = (u * 2).exp();
    Real em2u = Real(1L, prec) / e2u;
    QuadNode n{Real(prec), Real(prec), Real(prec), Real(prec)};
    n.one_minus_s = em2u * 2 / (Real(1L, prec) + em2u);
    n.one_plus_s = e2u * 2 / (Real(1L, prec) + e2u);
    n.s = Real(1L, prec) - n.one_minus_s;
    Real ch = u.cosh();
    n.w = half_pi * t.cosh() / (ch * ch);
    return n;
}

const LevelNodes& level_nodes(mpfr_prec_t prec, int level, long target_digits) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(prec, level);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    LevelNodes ln;
    Real h = Real(1L, prec) / Real(1L << level, prec);
    // keep nodes until the per-node contribution underflows even against an
    // endpoint singularity slightly worse than (1-s)^(-1/2)
    Real cutoff = Real::pow10(-(target_digits + 15), prec);
    long k = 1;
    long step = (level == kMinLevel) ? 1 : 2;
    for (;; k += step) {
        Real t = h * Real(k, prec);
        QuadNode n = make_node(t, prec);
        if (n.w < cutoff * n.one_minus_s.pow(Real(0.75, prec))) break;
        ln.nodes.push_back(std::move(n));
        if (k > (60L << level)) break; // safety stop
    }
    auto [pos, ok] = cache.emplace(key, std::move(ln));
    (void)ok;
    return pos->second;
}

} // namespace

Complex tanh_sinh(const std::function<Complex(const QuadNode&)>& f, long target_digits,
                  mpfr_prec_t prec) {
    Real tol = Real::pow10(-target_digits, prec);
    Real h = Real(1L, prec) / Real(1L << kMinLevel, prec);
    // center node t = 0: s = 0, w = pi/2
    QuadNode center{Real(0L, prec), Real(1L, prec), Real(1L, prec), Real::pi(prec) / 2};
    Complex sum = f(center);
    {
        const LevelNodes& ln = level_nodes(prec, kMinLevel, target_digits);
        for (const auto& n : ln.nodes) {
            sum += f(n);
            QuadNode neg{-n.s, n.one_plus_s, n.one_minus_s, n.w};
            sum += f(neg);
        }
    }
    Complex prev = sum * h;
    for (int level = kMinLevel + 1; level <= kMaxLevel; level++) {
        h = h / 2;
        const LevelNodes& ln = level_nodes(prec, level, target_digits);
        for (const auto& n : ln.nodes) {
            sum += f(n);
            QuadNode neg{-n.s, n.one_plus_s, n.one_minus_s, n.w};
            sum += f(neg);
        }
        Complex cur = sum * h;
        Real change = (cur - prev).abs();
        Real scale = cur.abs();
        if (scale < Real(1L, prec)) scale = Real(1L, prec);
        if (change < tol * scale) return cur;
        prev = cur;
    }
    return prev;
}

} // namespace periods
