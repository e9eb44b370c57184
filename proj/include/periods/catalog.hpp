#ifndef PERIODS_CATALOG_HPP
#define PERIODS_CATALOG_HPP

#include <optional>
#include <string>
#include <vector>

#include "periods/intmat.hpp"
#include "periods/surface.hpp"

namespace periods {

// One stated rational combination alpha * pw1 + beta * pw2 (Gaussian
// rationals) reproducing a lattice basis element.
struct ModularCombo {
    Rat a_re, a_im, b_re, b_im;
};

struct ModularData {
    std::string label;       // e.g. "17/1"
    std::string pw1_re, pw1_im, pw2_re, pw2_im; // pi^2 omega_1,2 as printed
    std::vector<ModularCombo> combos;           // one per lattice basis element
};

struct RefComplex {
    std::string re, im;
    Complex value(mpfr_prec_t prec) const { return {Real(re, prec), Real(im, prec)}; }
};

// Reference fiber record for catalog self-checks.
struct RefFiber {
    PointP1 location;
    long n1 = 0, n2 = 0;
};

struct ExampleSpec {
    std::string id;
    char type = 'I'; // 'I', '2', '3'
    long k = 1;
    WeierstrassSurface s1, s2;
    bool self_product = false;
    std::vector<RefFiber> fibers;          // over all of Sigma, sorted, inf last
    std::vector<RefComplex> ref_xhat;      // reference lattice bases (30 digits)
    std::vector<RefComplex> ref_x;
    std::optional<ModularData> modular;
    std::optional<Int> generic_index;      // stated generic [I(X) : I(Xhat)]
    // Type III reference spanning vectors per weight (R-hat and R)
    std::vector<std::vector<RefComplex>> rhat, rvec;
};

// All Type I, II, III examples, loaded from the data directory (searched at
// $PERIODS_DATA, then ./data/catalog, then the build-time source path).
std::vector<ExampleSpec> list_examples();
ExampleSpec load_example(const std::string& id);
std::string data_dir();

// Parse one surface record (exact rational coefficient lists + k); shared by
// the catalog files and user-supplied surface files.
WeierstrassSurface parse_surface_record(const std::string& text);

// Reference tables of the worked Type II interval computation (q vectors,
// M matrices, adapted r vectors and Theta matrices).
struct Section4Tables {
    std::vector<std::vector<RefComplex>> q; // 5 intervals x 4 components
    std::vector<IntMat> M;                  // at points a..e (order of Sigma)
    std::vector<std::vector<RefComplex>> r;
    std::vector<IntMat> Theta;
};
Section4Tables load_section4_tables();

} // namespace periods

#endif
