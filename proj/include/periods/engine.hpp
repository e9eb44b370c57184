#ifndef PERIODS_ENGINE_HPP
#define PERIODS_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "periods/catalog.hpp"
#include "periods/continuation.hpp"
#include "periods/zlattice.hpp"

namespace periods {

struct RunConfig {
    PrecisionContext ctx = PrecisionContext::desk();
    enum class Target { X, Xhat, Both };
    Target target = Target::Both;
    std::vector<long> weights;   // subset of 0..2k-2; empty = all
    bool generic_combo = true;   // seeded random combination across weights
    unsigned long seed = 1;
    std::string cache_dir;       // empty disables the cache
    bool chart_check = false;    // recompute one interval in the other chart
    int jobs = 1;
};

struct CheckResult {
    std::string name;
    std::string detail;
    bool pass = true;
};

struct PointResult {
    std::string name;
    long n1 = 0, n2 = 0;
    IntMat M, N, Theta; // 4x4
    Real m_residual, n_residual;
};

struct WeightResult {
    long n = 0;
    long d0 = 0;
    std::vector<std::vector<Complex>> q; // per interval, 4 components
    std::vector<std::vector<Complex>> r;
    std::vector<Complex> span_xhat, span_x;
    PeriodLattice lat_xhat, lat_x;
};

struct RunResult {
    std::string example_id;
    PrecisionContext ctx;
    std::vector<std::string> point_names;    // "a", "b", ...
    std::vector<std::string> interval_names; // "ab", ...
    std::vector<PointResult> points;
    std::vector<WeightResult> weights;
    IntMat kernel_xhat, kernel_x;
    std::vector<long> combo_coeffs;
    PeriodLattice lat_xhat, lat_x; // for the weight combination
    std::optional<Int> index_x_over_xhat;
    std::vector<CheckResult> checks;

    bool all_checks_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

RunResult run_example(const ExampleSpec& ex, const RunConfig& cfg);

// ---- reference comparisons (the golden-table and lattice verifiers) ----

// Digits of agreement between computed and reference complex values,
// min over entries; cmp tolerates the per-interval sign ambiguities of the
// root-ordering and square-root-branch choices (they multiply each interval's
// basis by a diagonal +-1 pattern of outer-product form).
struct TableComparison {
    bool matched = false;
    long min_digits = 0;             // over all complex entries
    std::vector<int> patterns;       // chosen sign pattern id per interval
    std::vector<CheckResult> items;
};

TableComparison compare_section4(const RunResult& run, const Section4Tables& ref,
                                 const WeightResult& w, mpfr_prec_t prec);

// Lattice basis against reference values, up to overall sign and order.
CheckResult compare_lattice(const PeriodLattice& lat, const std::vector<RefComplex>& ref,
                            long need_digits, mpfr_prec_t prec, const std::string& name);

// Stated rational combinations of pi^2 omega_1,2 against the computed basis.
std::vector<CheckResult> verify_modular(const PeriodLattice& xhat, const ModularData& mod,
                                        mpfr_prec_t prec);

// Chart-consistency: recompute interval `idx` of weight `n` in the opposite
// chart and report the match residual (minimized over sign patterns).
CheckResult chart_consistency_check(const ExampleSpec& ex, const RunConfig& cfg,
                                    const RunResult& run, size_t interval_idx, long weight);

// Deterministic generic weight coefficients c_n in 1..7.
std::vector<long> generic_weights(unsigned long seed, size_t count);

} // namespace periods

#endif
