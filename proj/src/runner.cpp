#include "ssabsorb/runner.hpp"

#include <cmath>
#include <ostream>

#include "ssabsorb/absorption.hpp"
#include "ssabsorb/series_engine.hpp"

namespace ssabsorb {

namespace {

void cmd_constants(const run_config& cfg, std::ostream& out) {
    absorption_law law(cfg.model);
    exponent_handle base(cfg.model);
    const regime& reg = base.classify_regime();
    out << "quantity,value\n";
    out << "regime," << (reg.bounded_variation ? "bounded_variation"
                                               : "unbounded_variation")
        << "\n";
    if (reg.bounded_variation)
        out << "drift_b," << format_double(reg.b) << "\n";
    out << "root_kind,"
        << (cfg.model.kill_q > 0.0 ? "phi_q" : "cramer_theta") << "\n";
    out << "gamma," << format_double(law.gamma()) << "\n";
    out << "alpha_tilde_gamma," << format_double(law.alpha_tilde_gamma())
        << "\n";
    out << "c_gamma," << format_double(law.c_gamma()) << "\n";
}

void cmd_survival(const run_config& cfg, std::ostream& out) {
    absorption_law law(cfg.model);
    out << "t,S,s,method,trunc_order,err_bound\n";
    for (double t : cfg.grid.values()) {
        eval_report S = law.survival_S(t);
        eval_report s = law.density_s(t);
        out << format_double(t) << ',' << format_double(S.value) << ','
            << format_double(s.value) << ',' << to_string(S.method) << ','
            << std::max(S.trunc_order, s.trunc_order) << ','
            << format_double(std::max(S.err_bound, s.err_bound)) << "\n";
    }
}

void cmd_density(const run_config& cfg, std::ostream& out) {
    absorption_law law(cfg.model);
    bool with_m = cfg.density_m > 0;
    out << (with_m ? "t,S,s,m,method,trunc_order,err_bound\n"
                   : "t,S,s,method,trunc_order,err_bound\n");
    for (double t : cfg.grid.values()) {
        eval_report S = law.survival_S(t);
        for (int m = 0; m <= cfg.density_m; ++m) {
            eval_report s = law.density_s(t, m);
            out << format_double(t) << ',' << format_double(S.value) << ','
                << format_double(s.value) << ',';
            if (with_m) out << m << ',';
            out << to_string(s.method) << ','
                << std::max(S.trunc_order, s.trunc_order) << ','
                << format_double(std::max(S.err_bound, s.err_bound)) << "\n";
        }
    }
}

void cmd_laplace(const run_config& cfg, std::ostream& out) {
    absorption_law law(cfg.model);
    out << "r,x,N,method,trunc_order,err_bound\n";
    for (double r : cfg.grid.values()) {
        eval_report n = law.laplace_N(r, cfg.laplace_x);
        out << format_double(r) << ',' << format_double(cfg.laplace_x) << ','
            << format_double(n.value) << ',' << to_string(n.method) << ','
            << n.trunc_order << ',' << format_double(n.err_bound) << "\n";
    }
}

void cmd_exit(const run_config& cfg, std::ostream& out) {
    if (!cfg.has_exit)
        throw config_error("exit command requires an [exit] section");
    absorption_law law(cfg.model);
    eval_report r =
        law.exit_mellin(cfg.exit_s, law.alpha_tilde_gamma(), true);
    out << "lambda,level_a,start_x,rho,value,method,trunc_order,err_bound\n";
    out << format_double(cfg.exit_s.lambda) << ','
        << format_double(cfg.exit_s.level_a) << ','
        << format_double(cfg.exit_s.start_x) << ','
        << format_double(law.alpha_tilde_gamma()) << ','
        << format_double(r.value) << ',' << to_string(r.method) << ','
        << r.trunc_order << ',' << format_double(r.err_bound) << "\n";
}

void cmd_mc(const run_config& cfg, std::ostream& out) {
    absorption_law law(cfg.model);
    mc_oracle mc(cfg.model, cfg.mc);
    std::vector<double> ts = cfg.grid.values();
    std::vector<mc_estimate> est = mc.estimate_survival(ts);
    out << "t,mc_value,std_err,bias_bound,analytic,z_score\n";
    for (size_t i = 0; i < ts.size(); ++i) {
        double an = law.survival_S(ts[i]).value;
        double z = (est[i].value - an) / est[i].std_err;
        out << format_double(ts[i]) << ',' << format_double(est[i].value)
            << ',' << format_double(est[i].std_err) << ','
            << format_double(est[i].truncation_bias_bound) << ','
            << format_double(an) << ',' << format_double(z) << "\n";
    }
}

}  // namespace

int run_command(const std::string& command, const run_config& cfg,
                std::ostream& out) {
    if (command == "constants") {
        cmd_constants(cfg, out);
    } else if (command == "survival") {
        cmd_survival(cfg, out);
    } else if (command == "density") {
        cmd_density(cfg, out);
    } else if (command == "laplace") {
        cmd_laplace(cfg, out);
    } else if (command == "exit") {
        cmd_exit(cfg, out);
    } else if (command == "mc") {
        cmd_mc(cfg, out);
    } else if (command == "validate") {
        int failures = run_validation(out, cfg.mc.paths);
        return failures == 0 ? 0 : 4;
    } else {
        throw config_error("unknown command '" + command + "'");
    }
    return 0;
}

}  // namespace ssabsorb
