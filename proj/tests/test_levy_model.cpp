#include <cmath>

#include "doctest.h"
#include "ssabsorb/levy_model.hpp"

using namespace ssabsorb;

namespace {

levy_model sawtooth(double beta, double delta, double q) {
    levy_model m;
    m.alpha = 1.0;
    m.bbar = 1.0;
    m.jumps.kind = jump_kind::exp_mixture;
    m.jumps.terms = {{delta + beta - 1.0, beta}};
    m.kill_q = q;
    return m;
}

levy_model bessel(double b, double q) {
    levy_model m;
    m.alpha = 1.0;
    m.bbar = 2.0 * b;
    m.sigma = 4.0;
    m.kill_q = q;
    return m;
}

}  // namespace

TEST_CASE("model invariants are enforced") {
    levy_model m = bessel(-0.5, 0.0);
    CHECK_NOTHROW(m.validate());
    levy_model bad = m;
    bad.sigma = -1.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = m;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = m;
    bad.kill_q = -2.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("regime classification") {
    exponent_handle saw(sawtooth(1.0, 0.5, 0.0));
    CHECK(saw.classify_regime().bounded_variation);
    CHECK(saw.classify_regime().b == doctest::Approx(1.0));
    exponent_handle bes(bessel(-0.5, 0.0));
    CHECK_FALSE(bes.classify_regime().bounded_variation);
    CHECK(bes.factor_limit() == doctest::Approx(2.0));  // sigma/2
}

TEST_CASE("tilt root selection") {
    // Brownian-with-drift exponent psi(u) = 2u^2 + 2bu
    SUBCASE("Cramer root, b=-1, q=0") {
        exponent_handle h(bessel(-1.0, 0.0));
        CHECK(h.tilt().tilt_gamma() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("phi(q) root, b=0, q=4: 2u^2 = 4 at u = sqrt(2)") {
        exponent_handle h(bessel(0.0, 4.0));
        CHECK(h.tilt().tilt_gamma() ==
              doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("saw-tooth beta=1, delta=1/2: gamma = 1/2") {
        exponent_handle h(sawtooth(1.0, 0.5, 0.0));
        CHECK(h.tilt().tilt_gamma() == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("tilted exponent is exactly conservative") {
    for (const levy_model& m :
         {sawtooth(1.0, 0.5, 0.0), bessel(-0.5, 0.0), bessel(0.3, 1.0)}) {
        exponent_handle t = exponent_handle(m).tilt();
        CHECK(t.eval(0.0) == 0.0);           // psi_gamma(0) = 0 exactly
        CHECK(t.eval_prime(0.0) > 0.0);      // positive mean after tilting
        CHECK(t.eval(1.0) > 0.0);            // convex through the origin
    }
}

TEST_CASE("difference form stays cancellation-free near zero") {
    exponent_handle t = exponent_handle(sawtooth(1.0, 0.5, 0.0)).tilt();
    // psi_gamma(u)/u tends to psi_gamma'(0) without catastrophic loss
    double d = t.eval_prime(0.0);
    for (double u : {1e-4, 1e-7, 1e-10}) {
        CHECK(t.eval(u) / u == doctest::Approx(d).epsilon(1e-3));
    }
}

TEST_CASE("tabulated density evaluation and drift convention") {
    levy_model m;
    m.alpha = 1.0;
    m.bbar = -0.5;
    m.sigma = 1.0;
    m.jumps.kind = jump_kind::tabulated;
    m.jumps.tab.r = {-2.0, -1.0, -0.5};
    m.jumps.tab.f = {0.1, 0.4, 0.2};
    m.jumps.tab.tail_rate = 3.0;
    CHECK_NOTHROW(m.validate());
    CHECK(m.jumps.tab.eval(-1.0) == doctest::Approx(0.4));
    CHECK(m.jumps.tab.eval(-1.5) == doctest::Approx(0.25));
    CHECK(m.jumps.tab.eval(-0.25) == 0.0);   // right of the grid
    exponent_handle h(m);
    CHECK_FALSE(h.has_dd());
    CHECK(h.mean_xi1() < 0.0);
}
