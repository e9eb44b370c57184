#ifndef PERIODS_CONTINUATION_HPP
#define PERIODS_CONTINUATION_HPP

#include <functional>
#include <vector>

#include "periods/intmat.hpp"
#include "periods/ode.hpp"

namespace periods {

// Small dense complex matrix with the two solves the pipeline needs.
struct CMat {
    size_t rows = 0, cols = 0;
    std::vector<Complex> a;

    CMat() = default;
    CMat(size_t r, size_t c, mpfr_prec_t prec) : rows(r), cols(c), a(r * c, Complex(prec)) {}
    Complex& at(size_t i, size_t j) { return a[i * cols + j]; }
    const Complex& at(size_t i, size_t j) const { return a[i * cols + j]; }

    CMat mul(const CMat& o) const;
    CMat inverse() const;
    // solve X * this = rhs (rhs rows x this.rows), i.e. X = rhs * this^-1
    CMat solve_right(const CMat& rhs) const;
};

// Round to a genuinely integral matrix; the worst entry residual doubles as
// the programming-error detector, so it is reported back.
IntMat round_integer(const CMat& m, const Real& tol, Real* residual = nullptr);

// Piecewise path: real segments plus upper-half-plane semicircular detours.
struct PathPiece {
    bool is_arc = false;
    Complex p0, p1;     // segment endpoints (is_arc: unused)
    Complex center;     // arc data
    Real radius;
    Real theta0, theta1;
    Real length;
};

struct PathPlan {
    Real a, b;                       // interval endpoints in chart coordinates
    std::vector<PathPiece> pieces;
    std::vector<Complex> centers;    // disk centers: a, interior points, b
    std::vector<Real> radii;         // 0.75 * distance to nearest other singularity
    std::vector<Complex> matchpoints; // matchpoints[i] inside disks i and i+1
    std::vector<double> detoured;    // real singular points arced over
};

// Covers (a, b) with disks marching along the real axis, arcing over interior
// real singularities of the lifted equation; match_frac is the fraction of
// each disk's true radius at which hand-off points are placed (chosen so the
// truncated-series tail stays below the accuracy target).
PathPlan plan_path(const Real& a, const Real& b, const std::vector<Complex>& singular,
                   double match_frac, mpfr_prec_t prec);

// Frobenius (or holomorphic) basis of phi anchored at one point, with the
// termwise primitives that span the solutions of the lifted equation.
struct FrobeniusData {
    ExpansionPoint at;
    std::vector<LogSeries> basis;
    std::vector<LogSeries> primitives;
    Real radius; // distance to the nearest other singularity of phi'
};

FrobeniusData make_frobenius(const LinearODE& phi, const ExpansionPoint& at,
                             const std::vector<Complex>& singular, const PrecisionContext& ctx);

// Coefficients of sampled functions in the basis: row m of the result solves
// values[m][l] = sum_i B[m][i] basis_i(points[l]).
CMat interpolate_in_basis(const FrobeniusData& frob, const std::vector<Complex>& points,
                          const std::vector<std::vector<Complex>>& values);

// Monodromy of the function row-vector P = B F under one counterclockwise
// loop around the anchor: returns round(B T B^-1).
IntMat monodromy_integer(const FrobeniusData& frob, const CMat& B, const Real& tol,
                         Real* residual = nullptr);

// One interval's continuation: Q_m = sum_i B[m][i] * primitive_i from the
// left endpoint, carried along the plan; yields the endpoint values q_m and
// the representation of (Q)' in the right-endpoint Frobenius basis.
struct ContinuationResult {
    std::vector<Complex> q;  // values at the right endpoint
    CMat C;                  // (Q')_m = sum_i C[m][i] F^right_i
    FrobeniusData right;     // basis at the right endpoint
    PathPlan plan;
};

ContinuationResult continue_interval(const LinearODE& phi, const FrobeniusData& left,
                                     const CMat& B, const ExpansionPoint& right_at,
                                     const std::vector<Complex>& singular,
                                     const PrecisionContext& ctx, long accuracy_digits,
                                     PathPlan* reuse_plan = nullptr);

} // namespace periods

#endif
