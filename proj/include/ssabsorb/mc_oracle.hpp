#pragma once

#include <cstdint>
#include <vector>

#include "ssabsorb/absorption.hpp"
#include "ssabsorb/levy_model.hpp"

namespace ssabsorb {

// 64-bit mix used to derive independent per-path RNG streams from
// (seed, path index), so path i is the same regardless of path count,
// thread count, or which estimator asked for it.
std::uint64_t splitmix64(std::uint64_t x);

struct mc_config {
    long long paths = 200000;
    double dt = 1e-4;
    double horizon = 1e6;  // cap on the Lamperti clock per path
    std::uint64_t seed = 20240824;
    double small_jump_cutoff = 1e-6;  // tabulated jump measures only

    void validate() const;
};

struct mc_estimate {
    double value = 0.0;
    double std_err = 0.0;
    long long paths_used = 0;
    double truncation_bias_bound = 0.0;
};

// Path simulator for the underlying Levy process and the exponential
// functional Sigma = int_0^{T} e^{alpha xi_s} ds (T = infinity, or an
// exponential kill time when kill_q > 0).
//
// sigma = 0 models with exponential-mixture (or no) jumps are simulated
// exactly, event by event.  Diffusive models use exact Gaussian increments
// of base step dt, geometrically coarsened once the path is deep below the
// action (the increments stay exact; only the trapezoid/crossing resolution
// coarsens, and that is what the coupled half-resolution replica measures).
// Every estimate carries a truncation_bias_bound combining the Richardson
// difference of the replica, its standard error, and the certified
// tail-truncation terms.
class mc_oracle {
  public:
    mc_oracle(levy_model m, mc_config cfg);

    const mc_config& config() const { return cfg_; }

    // one Sigma sample per path; salt separates independent batches
    std::vector<double> sample_sigma(long long n, std::uint64_t salt) const;

    std::vector<mc_estimate> estimate_survival(const std::vector<double>& ts,
                                               double x = 1.0) const;
    mc_estimate estimate_exit(const exit_spec& spec) const;

    // KS statistic between Sigma and the affine recomposition
    // int_0^1 e^{alpha xi} + e^{alpha xi_1} Sigma'
    double affine_ks_statistic(long long n) const;
    static double ks_critical_1pct(long long n, long long m);

    // running maximum at time 1 of the spectrally positive strictly stable
    // process normalized by E[e^{-lam X_1}] = e^{lam^alpha}; returns cdf
    // estimates at the given points
    static std::vector<mc_estimate> simulate_stable_max(
        double alpha, const mc_config& cfg, const std::vector<double>& xs);

  private:
    levy_model m_;
    mc_config cfg_;
    bool event_exact_ = false;  // BV exp-mixture/none: exact simulation
    double drift_ = 0.0;        // pathwise linear drift
    double atg_ = 0.0;          // tail exponent of Sigma (gamma / alpha)
    double jump_rate_ = 0.0;
    std::vector<double> jump_cum_;  // cumulative component weights
    // tabulated sampler: inverse-cdf nodes
    std::vector<double> tab_u_, tab_r_;
    double tab_tail_mass_ = 0.0;

    struct path_out {
        double sigma_f = 0.0;  // full resolution
        double sigma_c = 0.0;  // half resolution replica
        double tail = 0.0;     // e^{alpha xi} at truncation, 0 if completed
        double xi_end = 0.0;
        bool flagged = false;  // horizon exhausted
    };
    path_out run_path(std::uint64_t path_idx, std::uint64_t salt,
                      double time_cap, double sigma_cap) const;
    path_out run_event_path(class rng_stream& g, double time_cap,
                            double sigma_cap) const;
    path_out run_euler_path(class rng_stream& g, double time_cap,
                            double sigma_cap) const;
    double draw_jump(class rng_stream& g) const;
    struct exit_out {
        bool crossed_f = false;
        bool crossed_c = false;
        double flip = 0.0;
    };
    exit_out run_exit_path(std::uint64_t path_idx, const exit_spec& spec) const;
};

}  // namespace ssabsorb
