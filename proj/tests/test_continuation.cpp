#include <doctest.h>

#include "periods/engine.hpp"

using namespace periods;

TEST_CASE("worked type II example against the reference tables (reduced precision)") {
    ExampleSpec ex = load_example("type2-swap-bc");
    RunConfig cfg;
    cfg.ctx = PrecisionContext(80, 80);
    cfg.weights = {0};
    cfg.chart_check = true;
    RunResult res = run_example(ex, cfg);
    for (const auto& c : res.checks) {
        INFO(c.name << " " << c.detail);
        CHECK(c.pass);
    }
    TableComparison cmp =
        compare_section4(res, load_section4_tables(), res.weights[0], cfg.ctx.prec_bits());
    for (const auto& item : cmp.items) {
        INFO(item.name << " " << item.detail);
        CHECK(item.pass);
    }
    CHECK(cmp.matched);
    CHECK(cmp.min_digits >= 30);

    // lattices against the 7.2 references
    CHECK(res.lat_xhat.rank == 2);
    CHECK(res.lat_x.rank == 4);
    CheckResult lx = compare_lattice(res.lat_xhat, ex.ref_xhat, 28, cfg.ctx.prec_bits(), "xhat");
    INFO(lx.detail);
    CHECK(lx.pass);
    // modular combinations
    for (const auto& c : verify_modular(res.lat_xhat, *ex.modular, cfg.ctx.prec_bits())) {
        INFO(c.name << " " << c.detail);
        CHECK(c.pass);
    }
}

TEST_CASE("path planner geometry") {
    mpfr_prec_t P = PrecisionContext(60, 60).prec_bits();
    std::vector<Complex> sing{Complex(Real(0L, P), Real(0L, P)),
                              Complex(Real(-0.25, P), Real(0L, P)),
                              Complex(Real(-0.5, P), Real(0L, P))};
    // interval (-1/2, 0) with an interior singularity at -1/4: detour arcs up
    PathPlan plan = plan_path(Real(-0.5, P), Real(0L, P), sing, 0.1, P);
    REQUIRE(plan.detoured.size() == 1);
    CHECK(plan.detoured[0] == doctest::Approx(-0.25));
    bool some_upper = false;
    for (const auto& m : plan.matchpoints) {
        CHECK(m.im.sign() >= 0);
        some_upper = some_upper || m.im.sign() > 0;
    }
    CHECK(some_upper);
    // disk invariants: radius <= 0.75 distance; consecutive disks overlap with
    // margin >= 0.25 of the smaller radius; matchpoints inside both disks
    for (size_t i = 0; i < plan.centers.size(); i++) {
        Real d(1000L, P);
        for (const auto& s : sing) {
            Real ds = (plan.centers[i] - s).abs();
            if (ds < Real::pow10(-9, P)) continue;
            if (ds < d) d = ds;
        }
        CHECK(plan.radii[i] <= d * Real(0.7501, P));
        if (i + 1 < plan.centers.size()) {
            Real rmin = plan.radii[i] < plan.radii[i + 1] ? plan.radii[i] : plan.radii[i + 1];
            Real overlap = plan.radii[i] + plan.radii[i + 1] -
                           (plan.centers[i] - plan.centers[i + 1]).abs();
            CHECK(overlap >= rmin * Real(0.25, P));
            CHECK((plan.matchpoints[i] - plan.centers[i]).abs() <= plan.radii[i]);
            CHECK((plan.matchpoints[i] - plan.centers[i + 1]).abs() <= plan.radii[i + 1]);
        }
    }
    // degenerate interval rejected
    CHECK_THROWS_AS(plan_path(Real(0L, P), Real(0L, P), sing, 0.1, P), NotAdjacent);
}
