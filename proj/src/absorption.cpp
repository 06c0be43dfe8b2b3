#include "ssabsorb/absorption.hpp"

#include <cmath>

#include "ssabsorb/closed_forms.hpp"

namespace ssabsorb {

void exit_spec::validate() const {
    if (lambda == 0.0) throw config_error("exit: lambda must be nonzero");
    if (!(level_a > 0.0)) throw config_error("exit: level must be positive");
    if (!(start_x > 0.0) || start_x > level_a)
        throw config_error("exit: start must lie in (0, level]");
}

absorption_law::absorption_law(const levy_model& m) {
    m.validate();
    exponent_handle base(m);
    if (m.kill_q == 0.0 && !(base.mean_xi1() < 0.0))
        throw config_error(
            "absorption never occurs for this model (no killing and "
            "nonnegative mean)");
    exponent_handle tilted = base.tilt();
    gamma_ = tilted.tilt_gamma();
    atg_ = gamma_ / m.alpha;
    base_ser_ = std::make_shared<series_eval>(base);
    ser_ = std::make_shared<series_eval>(std::move(tilted));
    c_ = 1.0 / ser_->interp_A(-atg_);
    if (!(c_ > 0.0) || !std::isfinite(c_))
        throw numeric_error("tail constant came out nonpositive");
}

eval_report absorption_law::survival_S(double t) const {
    if (!(t > 0.0)) throw numeric_error("survival requires t > 0");
    eval_report o = ser_->series_O_rho(atg_, 1.0 / t);
    double scale = c_ * std::pow(t, -atg_);
    eval_report r{scale * o.value, o.trunc_order, o.method,
                  scale * o.err_bound};
    double slack = 1e-11 + r.err_bound;
    if (r.value < -slack || r.value > 1.0 + slack)
        throw numeric_error("survival value escaped [0, 1] beyond its bound");
    return r;
}

eval_report absorption_law::density_s(double t, int m) const {
    if (!(t > 0.0)) throw numeric_error("density requires t > 0");
    if (m < 0) throw numeric_error("derivative order must be nonnegative");
    eval_report o = ser_->series_O_rho(m + 1.0 + atg_, 1.0 / t);
    double lpref = cf::log_gamma(m + 1.0 + atg_) - cf::log_gamma(atg_);
    double scale = ((m % 2) ? -1.0 : 1.0) * std::exp(lpref) * c_ *
                   std::pow(t, -atg_ - 1.0 - m);
    return {scale * o.value, o.trunc_order, o.method,
            std::abs(scale) * o.err_bound};
}

eval_report absorption_law::distribution_P(double x) const {
    if (!(x > 0.0)) throw numeric_error("distribution requires x > 0");
    return survival_S(std::pow(x, -ser_->alpha()));
}

eval_report absorption_law::laplace_N(double r, double x) const {
    const levy_model& m = ser_->exponent().model();
    if (m.kill_q != 0.0)
        throw config_error("laplace transform form requires kill_q = 0");
    if (!(gamma_ < m.alpha))
        throw config_error("laplace transform requires theta < alpha");
    if (r < 0.0) throw numeric_error("laplace requires r >= 0");
    if (!(x > 0.0)) throw numeric_error("laplace requires x > 0");
    if (r == 0.0) return {1.0, 0, eval_method::direct_series, 0.0};
    double z = r * std::pow(x, m.alpha);
    eval_report i_base = base_ser_->series_I(z);
    eval_report i_tilt = ser_->series_I(z);
    double c_theta = cf::gammafn(1.0 - atg_) * c_;
    double w = c_theta * std::pow(z, atg_);
    return {i_base.value - w * i_tilt.value,
            std::max(i_base.trunc_order, i_tilt.trunc_order),
            eval_method::direct_series,
            i_base.err_bound + std::abs(w) * i_tilt.err_bound};
}

eval_report absorption_law::exit_mellin(const exit_spec& spec, double rho,
                                        bool absorbed) const {
    spec.validate();
    double alpha = ser_->alpha();
    double chi = spec.chi(alpha);
    double xa = std::pow(spec.start_x, alpha);
    double aa = std::pow(spec.level_a, alpha);
    eval_report num, den;
    if (spec.lambda > 0.0) {
        const regime& reg = ser_->exponent().classify_regime();
        if (reg.bounded_variation && !(spec.lambda * aa < reg.b))
            throw config_error(
                "exit: lambda * level^alpha must stay below the drift b");
        num = ser_->series_I_rho(rho, chi * xa);
        den = ser_->series_I_rho(rho, chi * aa);
        if (!(den.value > 0.0))
            throw numeric_error("exit: denominator series not positive");
    } else {
        num = ser_->series_O_rho(rho, -chi * xa);
        den = ser_->series_O_rho(rho, -chi * aa);
        if (!(den.value > 0.0))
            throw numeric_error(
                "exit: rho at or beyond the first zero of the denominator "
                "series");
    }
    double ratio = num.value / den.value;
    double err = std::abs(ratio) * (num.err_bound / std::max(std::abs(num.value), 1e-300) +
                                    den.err_bound / den.value);
    if (absorbed) {
        double w = std::pow(spec.start_x / spec.level_a, gamma_);
        ratio *= w;
        err *= w;
    }
    return {ratio, std::max(num.trunc_order, den.trunc_order), num.method, err};
}

double absorption_law::normalization(double t_split) const {
    auto f = [this](double t) { return density_s(t, 0).value; };
    quad_result lo = integrate(f, 1e-8, 1.0, 1e-9, 1e-12);
    quad_result hi = integrate(f, 1.0, t_split, 1e-9, 1e-12);
    return lo.value + hi.value + survival_S(t_split).value;
}

}  // namespace ssabsorb
