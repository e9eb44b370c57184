#ifndef PERIODS_ZLATTICE_HPP
#define PERIODS_ZLATTICE_HPP

#include <optional>
#include <string>
#include <vector>

#include "periods/complex.hpp"
#include "periods/intmat.hpp"
#include "periods/lll.hpp"

namespace periods {

// Local monodromy model at a point where the two fibers degenerate with
// types I_n, I_m, in the (uu, uv, vu, vv) basis, acting on coefficient
// columns.
IntMat local_model_theta(long n, long m);

// Conjugator P in GL_4(Z) with P^-1 T P = local model (columns of P are the
// model basis expressed in the ambient basis); nullopt if none is found.
std::optional<IntMat> local_model_conjugator(const IntMat& T, long n, long m);

// Vanishing-cycle subgroups of the fiber product X and its small resolution,
// from the monodromy operator T (acting on coefficient columns) at an
// (I_n, I_m) point. Subgroups are row bases in the ambient Z^4.
Subgroup vanishing_cycles_X(const IntMat& T, long n, long m);
Subgroup vanishing_cycles_Xhat(const IntMat& T, long n, long m);

// Rank-r additive subgroup of C with a Z-basis of complex generators. For
// discrete lattices (r <= 2) the basis is reduced and conjugation-adapted:
// a real generator, a purely imaginary one, or a conjugate pair w, conj(w).
struct PeriodLattice {
    long rank = 0;
    std::vector<Complex> basis;
    std::string provenance;
};

// Z-basis of the group generated by the given values, by integer-relation
// reduction at rel_digits and a confirming pass at rel_digits/2 (unstable
// rank -> PrecisionExhausted). coeff_bound rejects implausible relations.
PeriodLattice lattice_from_values(const std::vector<Complex>& values, long rel_digits,
                                  const Int& coeff_bound = Int("10000000000"));

// Index [sup : sub] via the integral change of basis (NotASublattice if the
// expansion is not integral or ranks differ).
Int lattice_index(const PeriodLattice& sub, const PeriodLattice& sup, long rel_digits);

// True if the two groups are equal up to overall sign and generator order.
bool lattice_equal(const PeriodLattice& a, const PeriodLattice& b, long rel_digits);

} // namespace periods

#endif
