#ifndef PERIODS_LLL_HPP
#define PERIODS_LLL_HPP

#include <vector>

#include "periods/complex.hpp"
#include "periods/intmat.hpp"

namespace periods {

// Exact-rational LLL reduction (delta = 99/100) of the rows of B. The
// lattices here are small (dimension <= ~20), so the textbook algorithm with
// mpq Gram-Schmidt is both simple and fast enough.
void lll_reduce(IntMat& B);

// Integer relations x (rows) with |sum_i x_i v_i| < 10^-rel_digits, found by
// LLL on [I | K Re v | K Im v]. Only relations with all |x_i| below
// coeff_bound are accepted. Rows are returned HNF-canonicalized.
IntMat integer_relations(const std::vector<Complex>& v, long rel_digits, const Int& coeff_bound);

// Express target as an integer combination of gens (exact group membership
// at working precision); returns false if no acceptable relation exists.
bool express_in_group(const Complex& target, const std::vector<Complex>& gens, long rel_digits,
                      const Int& coeff_bound, std::vector<Int>& coeffs);

} // namespace periods

#endif
