#include "ssabsorb/series_engine.hpp"

#include <algorithm>
#include <cmath>

#include "ssabsorb/closed_forms.hpp"

namespace ssabsorb {

namespace {
constexpr double eps_abs = 1e-16;
constexpr double eps_rel = 1e-13;
constexpr int n_max_terms = 100000;
constexpr int pn_max = 80;
constexpr int asym_pow_terms = 40;
constexpr int asym_res_terms = 40;
constexpr int product_terms = 4000;
constexpr double trust_fraction = 0.4;
}  // namespace

const char* to_string(eval_method m) {
    switch (m) {
        case eval_method::direct_series: return "direct_series";
        case eval_method::continuation: return "continuation";
        case eval_method::polynomial: return "polynomial";
        case eval_method::product_shift: return "product_shift";
        case eval_method::asymptotic: return "asymptotic";
    }
    return "?";
}

series_eval::series_eval(exponent_handle h) : h_(std::move(h)) {
    alpha_ = h_.model().alpha;
    radius_ = h_.classify_regime().bounded_variation
                  ? alpha_ * h_.classify_regime().b
                  : inf;
}

void series_eval::ensure_log_prefix(int n) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (log_psi_prefix_.empty()) log_psi_prefix_.push_back(dd(0.0));
    while (static_cast<int>(log_psi_prefix_.size()) <= n) {
        int k = static_cast<int>(log_psi_prefix_.size());
        double pk = h_.eval(alpha_ * k);
        if (!(pk > 0.0))
            throw numeric_error("psi(alpha k) not positive: exponent not in LK+");
        log_psi_prefix_.push_back(log_psi_prefix_.back() + dd(std::log(pk)));
    }
}

double series_eval::log_coeff_a(int n) const {
    if (n < 0) throw numeric_error("coefficient index must be nonnegative");
    ensure_log_prefix(n);
    std::lock_guard<std::mutex> lk(mu_);
    return -(log_psi_prefix_[n].hi + log_psi_prefix_[n].lo);
}

double series_eval::coeff_a(int n) const { return std::exp(log_coeff_a(n)); }

eval_report series_eval::series_I(double z) const {
    kahan acc;
    acc.add(1.0);
    double term = 1.0;
    double prev_ratio = 0.0;
    int small_streak = 0;
    int n = 1;
    for (; n < n_max_terms; ++n) {
        double pk = h_.eval(alpha_ * n);
        if (!(pk > 0.0))
            throw numeric_error("series_I: psi(alpha k) not positive");
        double new_term = term * z / pk;
        prev_ratio = term != 0.0 ? std::abs(new_term / term) : 0.0;
        term = new_term;
        acc.add(term);
        if (std::abs(term) <= eps_abs + eps_rel * std::abs(acc.value())) {
            if (++small_streak >= 2) break;
        } else {
            small_streak = 0;
        }
    }
    if (n >= n_max_terms)
        throw numeric_error("series_I did not converge within the term budget");
    double tail = prev_ratio < 1.0
                      ? std::abs(term) * prev_ratio / (1.0 - prev_ratio)
                      : std::abs(term);
    return {acc.value(), n, eval_method::direct_series,
            tail + 1e-15 * std::abs(acc.value())};
}

double series_eval::poly_I_negN(int N, double z) const {
    if (N < 0) throw numeric_error("poly_I_negN: N must be nonnegative");
    if (h_.has_dd()) {
        dd zz(z);
        dd term(1.0);
        dd acc(1.0);
        for (int n = 1; n <= N; ++n) {
            dd pk = h_.eval_dd(dd(alpha_ * n));
            term = term * dd(-(double)(N - n + 1)) * zz / pk;
            acc = acc + term;
        }
        return acc.to_double();
    }
    double term = 1.0;
    kahan acc;
    acc.add(1.0);
    for (int n = 1; n <= N; ++n) {
        term *= -(double)(N - n + 1) * z / h_.eval(alpha_ * n);
        acc.add(term);
    }
    return acc.value();
}

eval_report series_eval::series_I_rho(double rho, double z) const {
    double nearest = std::round(rho);
    if (nearest <= 0.0 && std::abs(rho - nearest) < 1e-8) {
        int N = static_cast<int>(-nearest);
        double v = poly_I_negN(N, z);
        return {v, N, eval_method::polynomial, 1e-14 * (1.0 + std::abs(v))};
    }
    bool bv = h_.classify_regime().bounded_variation;
    if (!bv || std::abs(z) < trust_fraction * radius_) {
        // direct series
        kahan acc;
        acc.add(1.0);
        double term = 1.0;
        double max_mag = 1.0;
        double ratio = 0.0;
        int small_streak = 0;
        int n = 1;
        for (; n < n_max_terms; ++n) {
            double pk = h_.eval(alpha_ * n);
            if (!(pk > 0.0))
                throw numeric_error("series_I_rho: psi(alpha k) not positive");
            double new_term = term * z * (rho + n - 1.0) / pk;
            ratio = term != 0.0 ? std::abs(new_term / term) : 0.0;
            term = new_term;
            acc.add(term);
            max_mag = std::max(max_mag, std::abs(acc.value()));
            if (std::abs(term) <= eps_abs + eps_rel * std::abs(acc.value())) {
                if (++small_streak >= 2) break;
            } else {
                small_streak = 0;
            }
        }
        if (n >= n_max_terms)
            throw numeric_error("series_I_rho did not converge");
        double cancel = max_mag * 1.1e-16;
        double tail = ratio < 1.0
                          ? std::abs(term) * ratio / (1.0 - ratio)
                          : std::abs(term);
        return {acc.value(), n, eval_method::direct_series, tail + cancel};
    }
    if (z < 0.5 * radius_ - 1e-9) return cont_I(rho, z);
    throw numeric_error(
        "series_I_rho: argument outside the series radius and the "
        "continuation half-plane");
}

void series_eval::ensure_pn(int n) const {
    std::lock_guard<std::mutex> lk(mu_);
    if (static_cast<int>(pn_.size()) > n) return;
    if (!h_.classify_regime().bounded_variation)
        throw numeric_error("continuation coefficients require the BV regime");
    double ab = radius_;
    pn_.clear();
    pn_.reserve(pn_max + 1);
    if (h_.has_dd()) {
        // I(-N; alpha b) for N = 0..pn_max, all in double-double: the sums
        // cancel like 2^N, which double-double absorbs up to N ~ 75.
        dd z(ab);
        for (int N = 0; N <= pn_max; ++N) {
            // term_j = (-1)^j N!/(N-j)! a_j z^j
            dd term(1.0), acc(1.0);
            for (int j = 1; j <= N; ++j) {
                term = term * dd(-(double)(N - j + 1)) * z /
                       h_.eval_dd(dd(alpha_ * j));
                acc = acc + term;
            }
            pn_.push_back(acc.to_double());
        }
    } else {
        for (int N = 0; N <= pn_max; ++N) {
            double term = 1.0;
            kahan acc;
            acc.add(1.0);
            for (int j = 1; j <= N; ++j) {
                term *= -(double)(N - j + 1) * ab / h_.eval(alpha_ * j);
                acc.add(term);
            }
            pn_.push_back(acc.value());
        }
    }
}

eval_report series_eval::cont_I(double rho, double z) const {
    if (!h_.classify_regime().bounded_variation)
        throw numeric_error("continuation requires the BV regime");
    double ab = radius_;
    if (!(z < 0.5 * ab - 1e-9))
        throw numeric_error("continuation requires Re(z) < alpha*b/2");
    ensure_pn(pn_max);
    double w = z / (z - ab);
    double pref = std::pow(1.0 - z / ab, -rho);
    kahan acc;
    double coef = 1.0;  // (rho)_n / n!
    double wn = 1.0;
    double max_coef = 1.0;
    double term = 0.0;
    int small_streak = 0;
    int used = 0;
    for (int n = 0; n <= pn_max; ++n) {
        term = pn_[n] * coef * wn;
        acc.add(term);
        used = n;
        if (n > 2 &&
            std::abs(term) <= eps_abs + eps_rel * std::abs(acc.value())) {
            if (++small_streak >= 2) break;
        } else {
            small_streak = 0;
        }
        coef *= (rho + n) / (n + 1.0);
        max_coef = std::max(max_coef, std::abs(coef));
        wn *= w;
    }
    // truncation: |w| < 1 geometric; rounding: the alternating polynomial
    // values lose ~2^n digits, absorbed by double-double (or plain double
    // for tabulated models) -- modeled by eps_p * (2|w|)^n growth.
    double aw = std::abs(w);
    double trunc = aw < 1.0 ? std::abs(term) * aw / (1.0 - aw) : std::abs(term);
    double eps_p = h_.has_dd() ? 5e-32 : 5e-16;
    double g = 2.0 * aw;
    double noise;
    if (g < 0.999) {
        noise = eps_p * max_coef / (1.0 - g);
    } else {
        noise = eps_p * max_coef * (std::pow(g, used + 1) - 1.0) / (g - 1.0);
    }
    double v = pref * acc.value();
    return {v, used, eval_method::continuation,
            std::abs(pref) * (trunc + noise) + 1e-15 * std::abs(v)};
}

eval_report series_eval::O_continuation(double rho, double x) const {
    return cont_I(rho, -x);
}

double series_eval::factor_eval(double u, factor_tag tag) const {
    return tag == factor_tag::phi ? h_.phi_factor(u) : h_.barphi_factor(u);
}

double series_eval::product_w(double s, factor_tag tag) const {
    // log of prod_{k=1}^{K} f(alpha(k+s))/f(alpha k), with an Euler-Maclaurin
    // style tail correction -s (log f(alpha x0) - log c), x0 = K + (1+s)/2.
    double c = h_.factor_limit();
    kahan acc;
    for (int k = 1; k <= product_terms; ++k) {
        double fn = factor_eval(alpha_ * (k + s), tag);
        double fd = factor_eval(alpha_ * k, tag);
        if (!(fn > 0.0) || !(fd > 0.0))
            throw numeric_error("interpolating product: nonpositive factor");
        acc.add(std::log(fn) - std::log(fd));
    }
    double x0 = product_terms + 0.5 + 0.5 * s;
    acc.add(-s * (std::log(factor_eval(alpha_ * x0, tag)) - std::log(c)));
    return acc.value();
}

double series_eval::product_a_s(double s, factor_tag tag) const {
    double c = h_.factor_limit();
    int shifts = 0;
    double s0 = s;
    while (s0 <= -1.0 + 1e-12) {
        s0 += 1.0;
        ++shifts;
    }
    double base = std::exp(-s0 * std::log(c) + product_w(s0, tag));
    // walk down with a_{sigma-1} = a_sigma * f(alpha sigma)
    double v = base;
    for (int j = 0; j < shifts; ++j) {
        double sj = s0 - j;
        double f = factor_eval(alpha_ * sj, tag);
        if (!std::isfinite(f))
            throw numeric_error("interpolating product: pole on the shift path "
                                "at s = " + std::to_string(sj - 1.0));
        v *= f;
    }
    return v;
}

double series_eval::interp_A(double s) const {
    bool bv = h_.classify_regime().bounded_variation;
    factor_tag tag = bv ? factor_tag::phi : factor_tag::barphi;
    double c = h_.factor_limit();
    int d = bv ? 1 : 2;
    int shifts = 0;
    double s0 = s;
    while (s0 <= -1.0 + 1e-12) {
        s0 += 1.0;
        ++shifts;
    }
    double log_base = -s0 * (d * std::log(alpha_) + std::log(c)) + product_w(s0, tag);
    double v = std::exp(log_base);
    if (!bv) v /= cf::gammafn(s0 + 1.0);
    // A(sigma - 1) = A(sigma) * psi_gamma(alpha sigma) / sigma, with the
    // removable singularity at sigma = 0 resolved by alpha * psi_gamma'(0+).
    for (int j = 0; j < shifts; ++j) {
        double sj = s0 - j;
        if (std::abs(sj) < 1e-6) {
            double h = 1e-5;
            double d2 = (h_.eval(h) - 2.0 * h_.eval(0.0) + h_.eval(-h)) / (h * h);
            v *= alpha_ * h_.eval_prime(0.0) +
                 0.5 * alpha_ * alpha_ * d2 * sj;
        } else {
            v *= h_.eval(alpha_ * sj) / sj;
        }
    }
    return v;
}

const series_eval::residue_family& series_eval::residues() const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (resfam_ready_) return resfam_;
    }
    residue_family fam;
    const auto& m = h_.model();
    if (h_.classify_regime().bounded_variation &&
        m.jumps.kind == jump_kind::exp_mixture) {
        double gam = h_.tilt_gamma();
        for (const auto& t : m.jumps.terms) {
            for (int k = 1; k <= asym_res_terms; ++k) {
                double s_p = (t.rate + gam) / alpha_ + k;
                double sig = -s_p;
                int j0 = static_cast<int>(std::ceil(-sig - 1e-12));
                double val = interp_A(sig + j0);
                bool bad = false;
                for (int i = 1; i <= j0; ++i) {
                    double si = sig + i;
                    if (i == k) {
                        val *= (t.intensity * t.rate / alpha_) / si;
                    } else if (std::abs(si) < 1e-9) {
                        val *= alpha_ * h_.eval_prime(0.0);
                    } else {
                        double arg = alpha_ * si;
                        // another component's pole colliding with this chain
                        double p = h_.eval(arg);
                        if (!std::isfinite(p)) { bad = true; break; }
                        val *= p / si;
                    }
                }
                if (bad || !std::isfinite(val)) continue;
                fam.s_p.push_back(s_p);
                fam.res.push_back(-val);
            }
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    if (!resfam_ready_) {
        resfam_ = std::move(fam);
        resfam_ready_ = true;
    }
    return resfam_;
}

const series_eval::asym_data& series_eval::asym_coeffs(double rho) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = asym_.find(rho);
        if (it != asym_.end()) return it->second;
    }
    asym_data d;
    double poch = 1.0;  // (rho)_m / m!
    for (int m = 0; m <= asym_pow_terms; ++m) {
        double sign = (m % 2 == 0) ? 1.0 : -1.0;
        d.pow_coeff.push_back(sign * poch * interp_A(-(rho + m)));
        poch *= (rho + m) / (m + 1.0);
    }
    const auto& fam = residues();
    double lg_rho = cf::log_gamma(rho);
    for (size_t i = 0; i < fam.s_p.size(); ++i) {
        double s_p = fam.s_p[i];
        double gsp = cf::gammafn(s_p);
        double grs = cf::gammafn(rho - s_p);
        if (!std::isfinite(gsp) || !std::isfinite(grs))
            throw numeric_error(
                "large-argument expansion: exponent families collide "
                "(logarithmic case)");
        d.res_exp.push_back(s_p);
        d.res_coeff.push_back(-gsp * grs / std::exp(lg_rho) * fam.res[i]);
    }
    std::lock_guard<std::mutex> lk(mu_);
    auto [it, inserted] = asym_.emplace(rho, std::move(d));
    (void)inserted;
    return it->second;
}

eval_report series_eval::O_large_x(double rho, double x) const {
    if (!(x > 0.0)) throw numeric_error("O_large_x requires x > 0");
    const asym_data& d = asym_coeffs(rho);
    double lx = std::log(x);
    kahan acc;
    double min_term = inf;
    double sum_abs = 0.0;
    int used = 0;
    for (size_t m = 0; m < d.pow_coeff.size(); ++m) {
        double term = d.pow_coeff[m] * std::exp(-(rho + m) * lx);
        double at = std::abs(term);
        if (at > 4.0 * min_term && m > 4) break;  // asymptotic turnaround
        acc.add(term);
        sum_abs += at;
        min_term = std::min(min_term, std::max(at, 1e-300));
        used = static_cast<int>(m);
    }
    double pow_tail = min_term;
    for (size_t i = 0; i < d.res_exp.size(); ++i) {
        double term = d.res_coeff[i] * std::exp(-d.res_exp[i] * lx);
        acc.add(term);
        sum_abs += std::abs(term);
    }
    double err = pow_tail + 1e-15 * sum_abs;
    const auto& m = h_.model();
    bool convergent = h_.classify_regime().bounded_variation &&
                      m.jumps.kind == jump_kind::exp_mixture;
    if (!convergent) {
        // allowance for the exponentially small family the expansion drops
        if (m.sigma > 0.0) {
            err += std::exp(-x / (alpha_ * alpha_ * m.sigma)) *
                   std::pow(1.0 + x, std::abs(rho));
        } else {
            err += pow_tail;
        }
    } else if (!d.res_exp.empty()) {
        // residue-family truncation: geometric in x^{-1/alpha-ish} steps
        double last = std::abs(d.res_coeff.back()) *
                      std::exp(-d.res_exp.back() * lx);
        err += last;
    }
    return {acc.value(), used, eval_method::asymptotic, err};
}

eval_report series_eval::series_O_rho(double rho, double z) const {
    if (z <= 0.0) return series_I_rho(rho, -z);
    double nearest = std::round(rho);
    if (nearest <= 0.0 && std::abs(rho - nearest) < 1e-8) {
        int N = static_cast<int>(-nearest);
        double v = poly_I_negN(N, -z);
        return {v, N, eval_method::polynomial, 1e-14 * (1.0 + std::abs(v))};
    }
    bool bv = h_.classify_regime().bounded_variation;
    if (bv) {
        bool mixture = h_.model().jumps.kind == jump_kind::exp_mixture;
        if (z < trust_fraction * radius_) return series_I_rho(rho, -z);
        if (mixture && z >= 2.0 * radius_) return O_large_x(rho, z);
        return cont_I(rho, -z);
    }
    // UV: the alternating direct series loses ~ exp(z/c2) with
    // c2 = alpha^2 sigma / 2; run it in double-double, and hand large
    // arguments to the (power + residue family) expansion, whose optimal
    // truncation error is far below eps there.
    double c2 = alpha_ * alpha_ * h_.factor_limit();
    if (z > 30.0 * c2) return O_large_x(rho, z);
    if (h_.has_dd()) {
        dd term(1.0), acc(1.0);
        double max_mag = 1.0;
        double ratio = 0.0;
        int small_streak = 0;
        int n = 1;
        for (; n < n_max_terms; ++n) {
            dd pk = h_.eval_dd(dd(alpha_ * n));
            if (!(pk.hi > 0.0))
                throw numeric_error("series_O_rho: psi(alpha k) not positive");
            dd new_term = term * dd(-z) * dd(rho + n - 1.0) / pk;
            ratio = term.hi != 0.0 ? std::abs(new_term.hi / term.hi) : 0.0;
            term = new_term;
            acc = acc + term;
            max_mag = std::max(max_mag, std::abs(term.hi));
            if (std::abs(term.hi) <=
                eps_abs + eps_rel * std::abs(acc.to_double())) {
                if (++small_streak >= 2) break;
            } else {
                small_streak = 0;
            }
        }
        if (n >= n_max_terms)
            throw numeric_error("series_O_rho did not converge");
        double v = acc.to_double();
        double tail = ratio < 1.0 ? std::abs(term.hi) : std::abs(term.hi) * 2.0;
        return {v, n, eval_method::direct_series,
                tail + max_mag * 3e-32 + 1e-15 * std::abs(v)};
    }
    kahan acc;
    acc.add(1.0);
    double term = 1.0;
    double max_mag = 1.0;
    double ratio = 0.0;
    int small_streak = 0;
    int n = 1;
    bool decreasing = false;
    for (; n < n_max_terms; ++n) {
        double pk = h_.eval(alpha_ * n);
        if (!(pk > 0.0))
            throw numeric_error("series_O_rho: psi(alpha k) not positive");
        double new_term = -term * z * (rho + n - 1.0) / pk;
        ratio = term != 0.0 ? std::abs(new_term / term) : 0.0;
        decreasing = ratio < 1.0;
        term = new_term;
        acc.add(term);
        max_mag = std::max(max_mag, std::abs(acc.value()));
        if (std::abs(term) <= eps_abs + eps_rel * std::abs(acc.value())) {
            if (++small_streak >= 2) break;
        } else {
            small_streak = 0;
        }
    }
    if (n >= n_max_terms)
        throw numeric_error("series_O_rho did not converge");
    double cancel = max_mag * 1.1e-16;
    double tail = decreasing ? std::abs(term) : std::abs(term) * 2.0;
    double v = acc.value();
    if (max_mag > 1e12 * std::max(std::abs(v), 1e-300)) {
        // catastrophic cancellation: fall back to the asymptotic expansion
        eval_report alt = O_large_x(rho, z);
        if (alt.err_bound < cancel) return alt;
        throw numeric_error(
            "series_O_rho: precision loss at large argument; use the "
            "asymptotic/Kesten regime");
    }
    return {v, n, eval_method::direct_series, tail + cancel};
}

double series_eval::smallest_kappa_zero(double a, zero_branch branch) const {
    if (!(a > 0.0)) throw numeric_error("smallest_kappa_zero requires a > 0");
    double za = std::pow(a, alpha_);
    auto f = [&](double kappa) {
        if (branch == zero_branch::O_plus)
            return series_O_rho(kappa, za).value;
        return series_I_rho(-kappa, za).value;
    };
    constexpr double kappa_max = 50.0;
    constexpr double step = 0.05;
    double prev_k = step;
    double prev_v = f(prev_k);
    for (double k = 2 * step; k <= kappa_max; k += step) {
        double v = f(k);
        if ((prev_v <= 0.0) != (v <= 0.0)) {
            double lo = prev_k, hi = k;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((f(mid) <= 0.0) == (v <= 0.0))
                    hi = mid;
                else
                    lo = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_k = k;
        prev_v = v;
    }
    return inf;
}

}  // namespace ssabsorb
