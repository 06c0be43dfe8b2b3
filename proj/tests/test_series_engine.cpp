#include <cmath>

#include "doctest.h"
#include "ssabsorb/closed_forms.hpp"
#include "ssabsorb/series_engine.hpp"

using namespace ssabsorb;

namespace {

series_eval make_saw() {
    levy_model m;
    m.alpha = 1.0;
    m.bbar = 1.0;
    m.jumps.kind = jump_kind::exp_mixture;
    m.jumps.terms = {{0.5, 1.0}};
    return series_eval(exponent_handle(m).tilt());
}

series_eval make_bessel() {
    levy_model m;
    m.alpha = 1.0;
    m.bbar = -1.0;
    m.sigma = 4.0;
    return series_eval(exponent_handle(m).tilt());
}

}  // namespace

TEST_CASE("coefficient recurrence and interpolation") {
    series_eval ser = make_saw();
    const exponent_handle& h = ser.exponent();
    CHECK(ser.coeff_a(0) == 1.0);
    for (int n = 1; n <= 50; ++n) {
        CHECK(ser.coeff_a(n) ==
              doctest::Approx(ser.coeff_a(n - 1) / h.eval(ser.alpha() * n))
                  .epsilon(1e-14));
    }
    // interp_A interpolates Gamma(n+1) a_n at the integers
    for (int n : {1, 2, 5, 9}) {
        double ref = std::exp(cf::log_gamma(n + 1.0)) * ser.coeff_a(n);
        CHECK(ser.interp_A(static_cast<double>(n)) ==
              doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("series radius and regimes") {
    series_eval saw = make_saw();
    CHECK(saw.radius() ==
          doctest::Approx(saw.exponent().classify_regime().b));
    series_eval bes = make_bessel();
    CHECK(std::isinf(bes.radius()));
}

TEST_CASE("polynomial evaluation matches the truncated series") {
    series_eval ser = make_saw();
    // I(-N; z) is the degree-N polynomial sum of binomial-weighted terms;
    // N = 0 gives 1 and N = 1 gives 1 - z/psi_gamma(alpha)
    double z = 0.2;
    CHECK(ser.poly_I_negN(0, z) == doctest::Approx(1.0));
    CHECK(ser.poly_I_negN(1, z) ==
          doctest::Approx(1.0 - z / ser.exponent().eval(ser.alpha()))
              .epsilon(1e-14));
}

TEST_CASE("continuation agrees with the direct series inside the radius") {
    series_eval ser = make_saw();
    double rho = ser.exponent().tilt_gamma() / ser.alpha();
    for (double f : {0.1, 0.25, 0.4}) {
        double z = ser.radius() * f;
        eval_report direct = ser.series_O_rho(rho, z);
        eval_report cont = ser.O_continuation(rho, z);
        CHECK(std::abs(direct.value - cont.value) <= 1e-9);
    }
}

TEST_CASE("large-argument expansion is continuous at the dispatch point") {
    series_eval ser = make_bessel();
    double rho = ser.exponent().tilt_gamma() / ser.alpha();
    // the diffusive branch switches to O_large_x at large z; values on both
    // sides of a moderate z stay within combined error bounds
    for (double z : {40.0, 80.0}) {
        eval_report a = ser.series_O_rho(rho, z);
        eval_report b = ser.O_large_x(rho, z);
        CHECK(std::abs(a.value - b.value) <=
              a.err_bound + b.err_bound + 1e-12);
    }
}

TEST_CASE("asymptotic head: O(rho; x) ~ A(-rho) x^{-rho}") {
    series_eval ser = make_saw();
    double rho = 0.5;
    double x = 1e6;
    double head = ser.interp_A(-rho) * std::pow(x, -rho);
    CHECK(ser.series_O_rho(rho, x).value ==
          doctest::Approx(head).epsilon(1e-4));
}

TEST_CASE("error bounds are honest on a reference point") {
    series_eval ser = make_saw();
    double rho = 0.5;
    for (double z : {0.1, 0.3, 2.0, 50.0}) {
        eval_report r = ser.series_O_rho(rho, z);
        CHECK(r.err_bound >= 0.0);
        CHECK(std::isfinite(r.value));
        CHECK(r.value > 0.0);
        CHECK(r.trunc_order > 0);
    }
}
