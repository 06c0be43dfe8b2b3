#include <cmath>

#include "doctest.h"
#include "ssabsorb/absorption.hpp"
#include "ssabsorb/closed_forms.hpp"

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

TEST_CASE("construction rejects models that never absorb") {
    levy_model m = bessel(0.5, 0.0);  // positive drift, no killing
    CHECK_THROWS_AS(absorption_law{m}, config_error);
}

TEST_CASE("survival monotonicity and range") {
    absorption_law law(sawtooth(1.0, 0.5, 0.0));
    double prev = 1.0;
    for (double t : {0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
        double s = law.survival_S(t).value;
        CHECK(s > 0.0);
        CHECK(s < prev);
        prev = s;
        CHECK(law.density_s(t).value > 0.0);
    }
    // distribution of the exponential functional: P(x) = S(x^{-alpha})
    CHECK(law.distribution_P(2.0).value ==
          doctest::Approx(law.survival_S(0.5).value).epsilon(1e-14));
}

TEST_CASE("frozen Laplace transform values, saw-tooth") {
    absorption_law law(sawtooth(1.0, 0.5, 0.0));
    CHECK(law.laplace_N(0.5, 1.0).value ==
          doctest::Approx(0.248428606657).epsilon(1e-9));
    CHECK(law.laplace_N(1.0, 1.0).value ==
          doctest::Approx(0.15437156137).epsilon(1e-9));
    CHECK(law.laplace_N(2.0, 1.0).value ==
          doctest::Approx(0.0852508906167).epsilon(1e-9));
    CHECK(law.laplace_N(0.0, 1.0).value == 1.0);
    CHECK_THROWS_AS(law.laplace_N(-1.0, 1.0), numeric_error);
}

TEST_CASE("laplace form requires the unkilled Cramer case") {
    absorption_law law(bessel(0.3, 1.0));
    CHECK_THROWS_AS(law.laplace_N(1.0, 1.0), config_error);
}

TEST_CASE("exit functional boundary cases") {
    absorption_law law(bessel(-0.5, 0.0));
    SUBCASE("start at the boundary: probability one") {
        exit_spec es{-1.0, 2.0, 2.0};
        CHECK(law.exit_probability(es) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("frozen oracle value") {
        exit_spec es{-1.0, 2.0, 0.5};
        CHECK(law.exit_probability(es) ==
              doctest::Approx(0.6176568031829364).epsilon(1e-11));
    }
    SUBCASE("large-level limit: exit before zeta equals surviving past zeta") {
        // as a -> infinity the moving boundary is only reachable near its
        // collapse time zeta, so crossing before absorption degenerates to
        // T0 > zeta; here zeta = 1 and x = 0.5, so compare with S(zeta/x)
        exit_spec es{-1.0, 1000.0, 0.5};
        double lim = law.survival_S(1.0 / 0.5).value;
        CHECK(law.exit_probability(es) ==
              doctest::Approx(lim).epsilon(1e-6));
    }
    SUBCASE("invalid geometry is rejected") {
        exit_spec es{-1.0, 1.0, 2.0};  // start above the level
        CHECK_THROWS_AS(law.exit_probability(es), config_error);
    }
}

TEST_CASE("killed models: heavier killing, faster absorption") {
    absorption_law slow(bessel(0.3, 1.0));
    absorption_law fast(bessel(0.3, 25.0));
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(fast.survival_S(t).value < slow.survival_S(t).value);
    }
    // strong killing drives survival toward zero at moderate times
    CHECK(fast.survival_S(5.0).value < 1e-3);
}

TEST_CASE("normalization integrates to one for all bundled models") {
    for (const levy_model& m :
         {sawtooth(1.0, 0.5, 0.0), bessel(-0.5, 0.0), bessel(0.3, 1.0)}) {
        absorption_law law(m);
        CHECK(law.normalization() == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("Kesten constants of the bundled models") {
    absorption_law saw(sawtooth(1.0, 0.5, 0.0));
    CHECK(saw.gamma() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(saw.c_gamma() == doctest::Approx(4.0 / M_PI).epsilon(1e-11));
    absorption_law bes(bessel(-0.5, 0.0));
    // S(t) = erf(1/sqrt(2t)) ~ sqrt(2/pi) t^{-1/2}
    CHECK(bes.c_gamma() ==
          doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-11));
}
