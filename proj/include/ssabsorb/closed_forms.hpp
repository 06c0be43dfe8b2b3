#pragma once

namespace ssabsorb::cf {

// Self-contained special functions (no external math library): Lanczos
// log-gamma, regularized incomplete gamma, Kummer Phi, Gauss 2F1, the Wright
// 2Psi1 series used by the stable maximum, and the three worked closed-form
// laws that serve as oracles for the generic engine.

double log_gamma(double x);           // x > 0
double gammafn(double x);             // any non-pole x, via reflection
double regularized_gamma_lower(double a, double x);

double kummer_phi(double rho, double c, double z);
// Leading-order large-x behavior Gamma(c)/Gamma(c-rho) * x^{-rho} of
// Phi(rho, c; -x).
double kummer_phi_asym(double rho, double c, double x);

double gauss_2f1(double a, double b, double c, double z);  // z < 1

enum class wright_variant { cdf, pdf };
double wright_2psi1(double alpha, double z, wright_variant variant);

double bessel_survival(double b, double q, double t);
double bessel_density(double b, double q, double t);
// Beta-integral form of the killed Bessel density.
double bessel_density_beta_integral(double b, double q, double t);

double stable_max_cdf(double alpha, double x);
double stable_max_pdf(double alpha, double x);

double sawtooth_survival(double beta, double delta, double q, double t);

}  // namespace ssabsorb::cf
