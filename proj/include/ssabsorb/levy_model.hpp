#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ssabsorb/common.hpp"

namespace ssabsorb {

// Jump measure on (-infty, 0).
enum class jump_kind { none, exp_mixture, tabulated };

struct exp_term {
    double rate = 0.0;       // decay rate of the exponential component
    double intensity = 0.0;  // total mass of the component
};

// Piecewise-linear density on a grid of negative abscissae, with an
// exponential tail of the declared decay rate to the left of the grid.
struct tabulated_density {
    std::vector<double> r;  // strictly increasing, all < 0
    std::vector<double> f;  // density values, >= 0
    double tail_rate = 1.0;

    double eval(double x) const;
};

struct jump_spec {
    jump_kind kind = jump_kind::none;
    std::vector<exp_term> terms;
    tabulated_density tab;
};

// Levy triplet of the spectrally negative underlying process, plus the
// self-similarity index alpha and kill rate q.
//
// Drift conventions: exp_mixture jumps are compound Poisson, entered
// uncompensated (bbar is the true linear drift, psi(u) = bbar*u + ... with
// psi(0) = 0 before killing).  tabulated jumps use the compensated form with
// the indicator cutoff at |r| = 1.
struct levy_model {
    double bbar = 0.0;
    double sigma = 0.0;
    double kill_q = 0.0;
    double alpha = 1.0;
    jump_spec jumps;

    double alpha_tilde() const { return 1.0 / alpha; }
    void validate() const;  // throws config_error on invariant violation
};

struct regime {
    bool bounded_variation = false;
    double b = 0.0;  // BV drift, meaningful only when bounded_variation
};

// Evaluator for psi and derived objects.  For a base handle, eval() returns
// psi(u) - q (i.e. psi itself when q = 0, psi-bar otherwise).  A tilted
// handle evaluates psi_gamma(u) = psi(u + gamma) - psi(gamma) through a
// cancellation-free difference form, so psi_gamma(0) = 0 exactly.
class exponent_handle {
  public:
    explicit exponent_handle(levy_model m);
    exponent_handle(const exponent_handle& o)
        : m_(o.m_), reg_(o.reg_), tilted_(o.tilted_), gamma_(o.gamma_),
          mean_xi1_(o.mean_xi1_), theta_(o.theta_), phi_memo_(o.phi_memo_) {}
    exponent_handle& operator=(const exponent_handle&) = delete;

    const levy_model& model() const { return m_; }
    const regime& classify_regime() const { return reg_; }
    bool tilted() const { return tilted_; }
    double tilt_gamma() const { return gamma_; }

    double eval(double u) const;        // psi-bar (base) or psi_gamma (tilted)
    dd eval_dd(dd u) const;             // exp_mixture / none jumps only
    bool has_dd() const { return m_.jumps.kind != jump_kind::tabulated; }
    double eval_prime(double u) const;  // derivative; at 0 returns E[xi_1]
    double mean_xi1() const;            // psi'(0+) of the unkilled exponent

    double cramer_root() const;         // theta > 0 (q = 0, mean < 0)
    double inverse_phi(double q) const; // phi(q), q > 0

    // Tilt by theta (q = 0) or phi(q) (q > 0); gamma() of the result is the
    // selected root.
    exponent_handle tilt() const;

    // BV factor phi(u) = b - vhat(u) with psi_gamma(u) = u * phi(u);
    // removable singularity at u = 0 handled by the derivative limit.
    double phi_factor(double u) const;
    // UV factor with psi_gamma(u) = u^2 * barphi(u).
    double barphi_factor(double u) const;
    // Laplace transform of the jump tail (BV only).
    double vhat(double s) const;

    // Limit of the relevant factor: b (BV) or sigma/2 (UV).
    double factor_limit() const;

  private:
    levy_model m_;
    regime reg_;
    bool tilted_ = false;
    double gamma_ = 0.0;        // tilt amount
    double mean_xi1_ = 0.0;
    mutable std::optional<double> theta_;
    mutable std::map<double, double> phi_memo_;
    mutable std::mutex memo_mu_;

    double raw_psi(double u) const;      // unkilled psi
    double raw_psi_prime(double u) const;
    double jump_part(double u) const;
    double jump_part_prime(double u) const;
};

}  // namespace ssabsorb
