#include "ssabsorb/levy_model.hpp"

#include <algorithm>
#include <cmath>

namespace ssabsorb {

double tabulated_density::eval(double x) const {
    if (r.empty() || x >= 0.0) return 0.0;
    if (x <= r.front())
        return f.front() * std::exp(tail_rate * (x - r.front()));
    if (x >= r.back()) return 0.0;
    auto it = std::upper_bound(r.begin(), r.end(), x);
    size_t i = static_cast<size_t>(it - r.begin());
    double w = (x - r[i - 1]) / (r[i] - r[i - 1]);
    return f[i - 1] + w * (f[i] - f[i - 1]);
}

void levy_model::validate() const {
    if (!(alpha > 0.0)) throw config_error("alpha must be positive");
    if (sigma < 0.0) throw config_error("sigma must be nonnegative");
    if (kill_q < 0.0) throw config_error("kill_q must be nonnegative");
    if (jumps.kind == jump_kind::exp_mixture) {
        if (jumps.terms.empty())
            throw config_error("exp_mixture requires at least one term");
        for (const auto& t : jumps.terms) {
            if (!(t.rate > 0.0))
                throw config_error("exp_mixture rate must be positive");
            if (!(t.intensity > 0.0))
                throw config_error("exp_mixture intensity must be positive");
        }
    } else if (jumps.kind == jump_kind::tabulated) {
        const auto& tb = jumps.tab;
        if (tb.r.size() < 2 || tb.r.size() != tb.f.size())
            throw config_error("tabulated density needs a grid of >= 2 points");
        if (!(tb.tail_rate > 0.0))
            throw config_error("tabulated tail decay rate must be positive");
        for (size_t i = 0; i < tb.r.size(); ++i) {
            if (!(tb.r[i] < 0.0))
                throw config_error("tabulated abscissae must be negative");
            if (tb.f[i] < 0.0)
                throw config_error("tabulated density must be nonnegative");
            if (i > 0 && !(tb.r[i] > tb.r[i - 1]))
                throw config_error("tabulated abscissae must be increasing");
        }
    }
    if (sigma == 0.0 && jumps.kind == jump_kind::none && bbar <= 0.0)
        throw config_error(
            "degenerate model: no Gaussian part, no jumps, nonpositive drift");
}

namespace {

regime classify(const levy_model& m) {
    if (m.sigma > 0.0) return {false, 0.0};
    // sigma = 0: every representable jump spec has finite variation, so the
    // process is BV with drift b = bbar (exp_mixture is uncompensated) or
    // bbar minus the small-jump compensator (tabulated).
    double b = m.bbar;
    if (m.jumps.kind == jump_kind::tabulated) {
        auto integrand = [&](double r) { return r * m.jumps.tab.eval(r); };
        double lo = std::min(-1.0, m.jumps.tab.r.front() - 30.0 / m.jumps.tab.tail_rate);
        b -= integrate(integrand, lo, 0.0, 1e-11).value;
    }
    return {true, b};
}

}  // namespace

exponent_handle::exponent_handle(levy_model m) : m_(std::move(m)) {
    m_.validate();
    reg_ = classify(m_);
    if (reg_.bounded_variation && !(reg_.b > 0.0))
        throw config_error("bounded-variation model requires positive drift b");
    mean_xi1_ = raw_psi_prime(0.0);
}

double exponent_handle::jump_part(double u) const {
    switch (m_.jumps.kind) {
        case jump_kind::none:
            return 0.0;
        case jump_kind::exp_mixture: {
            kahan acc;
            for (const auto& t : m_.jumps.terms)
                acc.add(t.intensity * (t.rate / (u + t.rate) - 1.0));
            return acc.value();
        }
        case jump_kind::tabulated: {
            const auto& tb = m_.jumps.tab;
            double r0 = tb.r.front();
            double tr = tb.tail_rate;
            // analytic exponential tail below the grid
            double tail = tb.f.front() *
                          (std::exp(u * r0) / (u + tr) - 1.0 / tr);
            auto big = [&](double r) {
                return (std::exp(u * r) - 1.0) * tb.eval(r);
            };
            auto small = [&](double r) {
                return (std::expm1(u * r) - u * r) * tb.eval(r);
            };
            double mid = r0 < -1.0 ? integrate(big, r0, -1.0, 1e-11).value : 0.0;
            double near = integrate(small, std::max(r0, -1.0), 0.0, 1e-11).value;
            return tail + mid + near;
        }
    }
    return 0.0;
}

double exponent_handle::jump_part_prime(double u) const {
    switch (m_.jumps.kind) {
        case jump_kind::none:
            return 0.0;
        case jump_kind::exp_mixture: {
            kahan acc;
            for (const auto& t : m_.jumps.terms) {
                double d = u + t.rate;
                acc.add(-t.intensity * t.rate / (d * d));
            }
            return acc.value();
        }
        case jump_kind::tabulated: {
            const auto& tb = m_.jumps.tab;
            double r0 = tb.r.front();
            double tr = tb.tail_rate;
            double d = u + tr;
            double tail = tb.f.front() * std::exp(u * r0) * (r0 / d - 1.0 / (d * d));
            auto big = [&](double r) { return r * std::exp(u * r) * tb.eval(r); };
            auto small = [&](double r) {
                return r * std::expm1(u * r) * tb.eval(r);
            };
            double mid = r0 < -1.0 ? integrate(big, r0, -1.0, 1e-11).value : 0.0;
            double near = integrate(small, std::max(r0, -1.0), 0.0, 1e-11).value;
            return tail + mid + near;
        }
    }
    return 0.0;
}

double exponent_handle::raw_psi(double u) const {
    return m_.bbar * u + 0.5 * m_.sigma * u * u + jump_part(u);
}

double exponent_handle::raw_psi_prime(double u) const {
    return m_.bbar + m_.sigma * u + jump_part_prime(u);
}

double exponent_handle::eval(double u) const {
    if (!tilted_) return raw_psi(u) - m_.kill_q;
    // cancellation-free difference psi(u + gamma) - psi(gamma)
    double v = m_.bbar * u + 0.5 * m_.sigma * u * (u + 2.0 * gamma_);
    switch (m_.jumps.kind) {
        case jump_kind::none:
            break;
        case jump_kind::exp_mixture: {
            kahan acc;
            for (const auto& t : m_.jumps.terms) {
                double den = (u + gamma_ + t.rate) * (gamma_ + t.rate);
                acc.add(-t.intensity * t.rate * u / den);
            }
            v += acc.value();
            break;
        }
        case jump_kind::tabulated:
            v += jump_part(u + gamma_) - jump_part(gamma_);
            break;
    }
    return v;
}

dd exponent_handle::eval_dd(dd u) const {
    if (m_.jumps.kind == jump_kind::tabulated)
        throw numeric_error("double-double evaluation unavailable for tabulated jumps");
    dd g(gamma_);
    dd v = dd(m_.bbar) * u;
    if (!tilted_) {
        v = v + dd(0.5 * m_.sigma) * u * u;
        for (const auto& t : m_.jumps.terms)
            v = v + dd(t.intensity) * (dd(t.rate) / (u + dd(t.rate)) - dd(1.0));
        return v - dd(m_.kill_q);
    }
    v = v + dd(0.5 * m_.sigma) * u * (u + dd(2.0) * g);
    for (const auto& t : m_.jumps.terms) {
        dd den = (u + g + dd(t.rate)) * (g + dd(t.rate));
        v = v - dd(t.intensity) * dd(t.rate) * u / den;
    }
    return v;
}

double exponent_handle::eval_prime(double u) const {
    return raw_psi_prime(u + gamma_);
}

double exponent_handle::mean_xi1() const { return mean_xi1_; }

double exponent_handle::cramer_root() const {
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        if (theta_) return *theta_;
    }
    if (m_.kill_q != 0.0 || tilted_)
        throw numeric_error("no Cramer root: kill_q must be 0 on the base handle");
    if (!(mean_xi1_ < 0.0))
        throw numeric_error("no Cramer root: E[xi_1] must be negative");
    double hi = 1.0;
    while (raw_psi(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw numeric_error("Cramer root bracket growth failed");
    }
    double lo = 1e-14;
    auto f = [&](double u) { return raw_psi(u); };
    auto df = [&](double u) { return raw_psi_prime(u); };
    double th = newton_safeguarded(f, df, lo, hi);
    std::lock_guard<std::mutex> lk(memo_mu_);
    theta_ = th;
    return th;
}

double exponent_handle::inverse_phi(double q) const {
    if (!(q > 0.0)) throw numeric_error("inverse_phi requires q > 0");
    {
        std::lock_guard<std::mutex> lk(memo_mu_);
        auto it = phi_memo_.find(q);
        if (it != phi_memo_.end()) return it->second;
    }
    double lo = 0.0;
    if (mean_xi1_ < 0.0 && m_.kill_q == 0.0) lo = cramer_root();
    double hi = std::max(1.0, 2.0 * lo);
    while (raw_psi(hi) - q <= 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw numeric_error("inverse_phi bracket growth failed");
    }
    auto f = [&](double u) { return raw_psi(u) - q; };
    auto df = [&](double u) { return raw_psi_prime(u); };
    double phi = newton_safeguarded(f, df, lo, hi);
    std::lock_guard<std::mutex> lk(memo_mu_);
    phi_memo_[q] = phi;
    return phi;
}

exponent_handle exponent_handle::tilt() const {
    if (tilted_) throw numeric_error("handle is already tilted");
    double g = m_.kill_q > 0.0 ? inverse_phi(m_.kill_q) : cramer_root();
    exponent_handle h(m_);
    h.tilted_ = true;
    h.gamma_ = g;
    if (!(h.eval_prime(0.0) > 0.0))
        throw numeric_error("tilted exponent is not in the LK+ cone");
    return h;
}

double exponent_handle::phi_factor(double u) const {
    if (!reg_.bounded_variation)
        throw numeric_error("phi factor defined only in the BV regime");
    if (std::abs(u) < 1e-6) {
        double h = 1e-5;
        double d2 = (eval(h) - 2.0 * eval(0.0) + eval(-h)) / (h * h);
        return eval_prime(0.0) + 0.5 * d2 * u;
    }
    return eval(u) / u;
}

double exponent_handle::barphi_factor(double u) const {
    if (reg_.bounded_variation)
        throw numeric_error("barphi factor defined only in the UV regime");
    if (u == 0.0) throw numeric_error("barphi factor undefined at u = 0");
    if (std::abs(u) < 1e-4) {
        double h = 1e-4;
        double d2 = (eval(h) - 2.0 * eval(0.0) + eval(-h)) / (h * h);
        return eval_prime(0.0) / u + 0.5 * d2;
    }
    return eval(u) / (u * u);
}

double exponent_handle::vhat(double s) const {
    if (!reg_.bounded_variation)
        throw numeric_error("vhat defined only in the BV regime");
    switch (m_.jumps.kind) {
        case jump_kind::none:
            return 0.0;
        case jump_kind::exp_mixture: {
            kahan acc;
            for (const auto& t : m_.jumps.terms)
                acc.add(t.intensity / (s + t.rate));
            return acc.value();
        }
        case jump_kind::tabulated: {
            // vhat(s) = int_0^inf e^{-s r} nu(-inf, -r) dr
            const auto& tb = m_.jumps.tab;
            auto tail_mass = [&](double r) {
                // nu(-inf, -r): integrate the density left of -r
                double lo = std::min(-r, tb.r.front()) -
                            30.0 / tb.tail_rate;
                if (-r <= lo) return 0.0;
                return integrate([&](double y) { return tb.eval(y); }, lo, -r,
                                 1e-10)
                    .value;
            };
            double hi = -tb.r.front() + 30.0 / std::max(s, 1e-3);
            return integrate(
                       [&](double r) { return std::exp(-s * r) * tail_mass(r); },
                       0.0, hi, 1e-9)
                .value;
        }
    }
    return 0.0;
}

double exponent_handle::factor_limit() const {
    return reg_.bounded_variation ? reg_.b : 0.5 * m_.sigma;
}

}  // namespace ssabsorb
