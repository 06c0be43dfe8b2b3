#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "ssabsorb/levy_model.hpp"

namespace ssabsorb {

enum class eval_method {
    direct_series,
    continuation,
    polynomial,
    product_shift,
    asymptotic,
};

const char* to_string(eval_method m);

struct eval_report {
    double value = 0.0;
    int trunc_order = 0;
    eval_method method = eval_method::direct_series;
    double err_bound = 0.0;
};

enum class factor_tag { phi, barphi };
enum class zero_branch { O_plus, I_minus };

// Coefficients a_n = (prod_{k<=n} psi_gamma(alpha k))^{-1}, the power series
// I(z), I(rho; z), O(rho; z) built from them, the interpolating products
// a_s, and the two large-|z| evaluation schemes for BV models (Euler-type
// continuation and the inverse-argument expansion).
//
// The handle passed in must be tilted (psi_gamma in the LK+ cone) except for
// the one-parameter series_I, which is also meaningful for an untilted
// handle when psi(alpha k) > 0 for all k >= 1.
class series_eval {
  public:
    explicit series_eval(exponent_handle h);

    const exponent_handle& exponent() const { return h_; }
    double alpha() const { return alpha_; }
    // series radius of I(rho; .): alpha*b for BV, +inf otherwise
    double radius() const { return radius_; }

    double coeff_a(int n) const;
    double log_coeff_a(int n) const;

    eval_report series_I(double z) const;
    eval_report series_I_rho(double rho, double z) const;
    eval_report series_O_rho(double rho, double z) const;
    double poly_I_negN(int N, double z) const;
    double product_a_s(double s, factor_tag tag) const;
    double smallest_kappa_zero(double a, zero_branch branch) const;

    // A(s) = Gamma(s+1) * a_s(psi_gamma; alpha), the Mellin interpolation of
    // the coefficients: O(rho; x) ~ A(-rho) x^{-rho} as x -> infinity.
    double interp_A(double s) const;

    // Large-argument expansion of O(rho; x): power family from A at shifted
    // arguments plus, for exp_mixture BV models, the residue family from the
    // poles of the jump-tail transform.  Convergent (not just asymptotic)
    // for exp_mixture BV once x exceeds the pole-free radius.
    eval_report O_large_x(double rho, double x) const;

    // Euler-transform continuation of O(rho; x) for BV models, valid for all
    // x > 0; coefficients I(-n; alpha b) carried in double-double.
    eval_report O_continuation(double rho, double x) const;

  private:
    exponent_handle h_;
    double alpha_;
    double radius_;

    mutable std::mutex mu_;
    mutable std::vector<dd> log_psi_prefix_;  // prefix sums of log psi_g(alpha k)
    mutable std::vector<double> pn_;          // I(-n; alpha b), dd-computed
    struct asym_data {
        std::vector<double> pow_coeff;  // (-1)^m (rho)_m/m! A(-rho-m)
        std::vector<double> res_exp;    // pole exponents s_p
        std::vector<double> res_coeff;  // matching x^{-s_p} coefficients
    };
    mutable std::map<double, asym_data> asym_;
    struct residue_family {
        std::vector<double> s_p;
        std::vector<double> res;  // residues of A(-s) at s_p
    };
    mutable residue_family resfam_;
    mutable bool resfam_ready_ = false;

    void ensure_log_prefix(int n) const;
    void ensure_pn(int n) const;
    const asym_data& asym_coeffs(double rho) const;
    const residue_family& residues() const;
    double factor_eval(double u, factor_tag tag) const;
    double product_w(double s, factor_tag tag) const;  // log of normalized product
    eval_report cont_I(double rho, double z) const;    // Euler continuation of I
};

}  // namespace ssabsorb
