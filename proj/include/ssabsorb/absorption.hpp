#pragma once

#include <memory>

#include "ssabsorb/series_engine.hpp"

namespace ssabsorb {

// Exit problem against the moving boundary a(1 + alpha*lambda*t)^{1/alpha};
// chi = alpha*lambda, and the boundary lifetime zeta is finite only for
// lambda < 0.
struct exit_spec {
    double lambda = 0.0;
    double level_a = 1.0;
    double start_x = 1.0;

    double chi(double alpha) const { return alpha * lambda; }
    double zeta(double alpha) const {
        return lambda >= 0.0 ? inf : 1.0 / (alpha * -lambda);
    }
    void validate() const;
};

// The law of the absorption time T0: survival S, density s and its
// derivatives, distribution P of the exponential functional, Laplace
// transform, and exit/hitting Mellin functionals.  Immutable after
// construction; every evaluation is reentrant.
class absorption_law {
  public:
    explicit absorption_law(const levy_model& m);

    double gamma() const { return gamma_; }
    double alpha_tilde_gamma() const { return atg_; }
    double c_gamma() const { return c_; }
    const series_eval& tilted() const { return *ser_; }
    const series_eval& base() const { return *base_ser_; }

    // S(t) = C_gamma t^{-atg} O(atg; 1/t)
    eval_report survival_S(double t) const;
    // s^(m)(t) = (-1)^m Gamma(m+1+atg)/Gamma(atg) C_gamma t^{-atg-1-m}
    //            O(m+1+atg; 1/t)
    eval_report density_s(double t, int m = 0) const;
    // P(x) = S(x^{-alpha})
    eval_report distribution_P(double x) const;

    // E_x[e^{-r T0}] for the unkilled negative-mean case (gamma = theta < alpha)
    eval_report laplace_N(double r, double x) const;

    // Mellin transform of the exit time against the moving boundary:
    // conservative (tilted) version is the plain ratio
    //   O(rho; |chi| x^alpha) / O(rho; |chi| a^alpha)      (lambda < 0)
    //   I(rho;  chi  x^alpha) / I(rho;  chi  a^alpha)      (lambda > 0);
    // `absorbed` multiplies by (x/a)^gamma, which at rho = atg gives the
    // probability of crossing the boundary before absorption.
    eval_report exit_mellin(const exit_spec& spec, double rho,
                            bool absorbed = true) const;
    double exit_probability(const exit_spec& spec) const {
        return exit_mellin(spec, atg_, true).value;
    }

    // integral of the density: quadrature on (0, t_split] plus the
    // engine-evaluated tail S(t_split); should return 1 up to tolerance
    double normalization(double t_split = 100.0) const;

  private:
    std::shared_ptr<series_eval> base_ser_;  // over psi - q
    std::shared_ptr<series_eval> ser_;       // over psi_gamma
    double gamma_ = 0.0;
    double atg_ = 0.0;  // gamma / alpha
    double c_ = 0.0;    // Kesten constant
};

}  // namespace ssabsorb
