#include "ssabsorb/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace ssabsorb {

namespace {

constexpr double stop_log_event = -40.0;
constexpr double stop_log_euler = -25.0;
constexpr double ladder_start = -1.0;   // coarsen below this level
constexpr double ladder_band = 1.0;     // double the step per band
constexpr int ladder_max_pow = 10;

// exp for the small per-step increments: degree-9 Taylor, relative error
// below 8e-14 for |x| <= 0.25, falling back to libm outside
inline double exp_small(double x) {
    if (std::abs(x) > 0.25) return std::exp(x);
    double r = 1.0 + x / 9.0;
    r = 1.0 + x * r / 8.0;
    r = 1.0 + x * r / 7.0;
    r = 1.0 + x * r / 6.0;
    r = 1.0 + x * r / 5.0;
    r = 1.0 + x * r / 4.0;
    r = 1.0 + x * r / 3.0;
    r = 1.0 + x * r / 2.0;
    return 1.0 + x * r;
}

int thread_cap() {
    unsigned hw = std::thread::hardware_concurrency();
    int n = hw ? static_cast<int>(hw) : 1;
    if (const char* env = std::getenv("SSABSORB_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0 && cap < n) n = cap;
    }
    return n;
}

template <class F>
void parallel_paths(long long n, F&& body) {
    const long long chunk = 4096;
    int nt = thread_cap();
    if (nt <= 1 || n < 2 * chunk) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    auto worker = [&] {
        for (;;) {
            long long lo = next.fetch_add(chunk);
            if (lo >= n) return;
            long long hi = std::min(lo + chunk, n);
            for (long long i = lo; i < hi; ++i) body(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// mean and standard error of a vector of per-path differences
void mean_se(const std::vector<double>& v, double& mean, double& se) {
    kahan acc;
    for (double x : v) acc.add(x);
    long long n = static_cast<long long>(v.size());
    mean = acc.value() / n;
    kahan sq;
    for (double x : v) sq.add((x - mean) * (x - mean));
    se = std::sqrt(sq.value() / n) / std::sqrt(static_cast<double>(n));
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// xoshiro256++ with state expanded from the counter-derived seed; fast and
// equidistributed enough for path simulation
class rng_stream {
  public:
    explicit rng_stream(std::uint64_t seed) {
        std::uint64_t z = seed;
        for (auto& w : s_) {
            z = splitmix64(z);
            w = z;
        }
    }
    std::uint64_t next() {
        std::uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }
    double uniform() {  // (0, 1)
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
    }
    double normal() {
        if (have_) {
            have_ = false;
            return cache_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        // float log: ~1e-7 relative distortion, far below MC resolution
        double r = std::sqrt(-2.0 *
                             static_cast<double>(
                                 std::log(static_cast<float>(s))) /
                             s);
        cache_ = v * r;
        have_ = true;
        return u * r;
    }
    double exponential(double rate) { return -std::log(uniform()) / rate; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
    bool have_ = false;
    double cache_ = 0.0;
};

void mc_config::validate() const {
    if (paths <= 0) throw config_error("mc: paths must be positive");
    if (!(dt > 0.0) || dt > 1e-2)
        throw config_error("mc: dt must lie in (0, 1e-2]");
    if (!(horizon > 0.0)) throw config_error("mc: horizon must be positive");
    if (!(small_jump_cutoff > 0.0))
        throw config_error("mc: small_jump_cutoff must be positive");
}

mc_oracle::mc_oracle(levy_model m, mc_config cfg)
    : m_(std::move(m)), cfg_(cfg) {
    m_.validate();
    cfg_.validate();
    exponent_handle h(m_);
    if (m_.kill_q == 0.0 && !(h.mean_xi1() < 0.0))
        throw config_error(
            "absorption never occurs for this model (no killing and "
            "nonnegative mean)");
    atg_ = h.tilt().tilt_gamma() / m_.alpha;
    const regime& reg = h.classify_regime();
    event_exact_ = (m_.sigma == 0.0);
    if (event_exact_) {
        drift_ = reg.b;
    } else if (m_.jumps.kind == jump_kind::tabulated) {
        // compensated convention: pathwise drift removes the small-jump mean
        auto f = [&](double r) { return r * m_.jumps.tab.eval(r); };
        drift_ = m_.bbar - integrate(f, -1.0, -1e-12, 1e-10).value;
    } else {
        drift_ = m_.bbar;
    }
    if (m_.jumps.kind == jump_kind::exp_mixture) {
        double cum = 0.0;
        for (const auto& term : m_.jumps.terms) {
            cum += term.intensity;
            jump_cum_.push_back(cum);
        }
        jump_rate_ = cum;
    } else if (m_.jumps.kind == jump_kind::tabulated) {
        // inverse-cdf table over the piecewise-linear density plus its
        // exponential left tail
        const auto& tab = m_.jumps.tab;
        tab_tail_mass_ = tab.f.front() / tab.tail_rate;
        double cum = tab_tail_mass_;
        tab_u_.push_back(cum);
        tab_r_ = tab.r;
        for (size_t i = 0; i + 1 < tab.r.size(); ++i) {
            cum += 0.5 * (tab.f[i] + tab.f[i + 1]) * (tab.r[i + 1] - tab.r[i]);
            tab_u_.push_back(cum);
        }
        jump_rate_ = cum;
    }
}

double mc_oracle::draw_jump(rng_stream& g) const {
    if (m_.jumps.kind == jump_kind::exp_mixture) {
        double u = g.uniform() * jump_rate_;
        size_t j = 0;
        while (j + 1 < jump_cum_.size() && u > jump_cum_[j]) ++j;
        return -g.exponential(m_.jumps.terms[j].rate);
    }
    double u = g.uniform() * jump_rate_;
    if (u <= tab_tail_mass_) {
        // exponential tail left of the grid
        return tab_r_.front() +
               std::log(u / tab_tail_mass_) / m_.jumps.tab.tail_rate;
    }
    size_t j = 0;
    while (j + 1 < tab_u_.size() && u > tab_u_[j + 1]) ++j;
    double frac = (u - tab_u_[j]) / (tab_u_[j + 1] - tab_u_[j]);
    double r = tab_r_[j] + frac * (tab_r_[j + 1] - tab_r_[j]);
    if (r > -cfg_.small_jump_cutoff) return 0.0;
    return r;
}

mc_oracle::path_out mc_oracle::run_path(std::uint64_t path_idx,
                                        std::uint64_t salt, double time_cap,
                                        double sigma_cap) const {
    rng_stream g(splitmix64(splitmix64(cfg_.seed + path_idx) ^
                            (salt * 0xD1342543DE82EF95ULL)));
    return event_exact_ ? run_event_path(g, time_cap, sigma_cap)
                        : run_euler_path(g, time_cap, sigma_cap);
}

mc_oracle::path_out mc_oracle::run_event_path(rng_stream& g, double time_cap,
                                              double sigma_cap) const {
    path_out out;
    double alpha = m_.alpha;
    double b = drift_;
    double xi = 0.0, e = 1.0, s = 0.0, acc = 0.0;
    double t_kill = m_.kill_q > 0.0 ? g.exponential(m_.kill_q) : inf;
    double cap = std::min(time_cap, cfg_.horizon);
    for (;;) {
        double t_jump = jump_rate_ > 0.0 ? s + g.exponential(jump_rate_) : inf;
        double seg_end = std::min({t_jump, t_kill, cap});
        double d = seg_end - s;
        // exact integral of e^{alpha(xi + b u)} over the drift segment
        acc += e * std::expm1(alpha * b * d) / (alpha * b);
        xi += b * d;
        e = std::exp(alpha * xi);
        s = seg_end;
        if (acc >= sigma_cap) {
            out.sigma_f = out.sigma_c = acc;
            out.xi_end = xi;
            return out;
        }
        if (s >= t_kill || s >= time_cap) {
            out.sigma_f = out.sigma_c = acc;
            out.xi_end = xi;
            return out;
        }
        if (s >= cfg_.horizon) {
            out.sigma_f = out.sigma_c = acc;
            out.xi_end = xi;
            out.flagged = true;
            return out;
        }
        xi += draw_jump(g);
        e = std::exp(alpha * xi);
        if (xi <= stop_log_event) {
            out.sigma_f = out.sigma_c = acc;
            out.xi_end = xi;
            out.tail = e;
            return out;
        }
    }
}

mc_oracle::path_out mc_oracle::run_euler_path(rng_stream& g, double time_cap,
                                              double sigma_cap) const {
    path_out out;
    double alpha = m_.alpha;
    double dt = cfg_.dt;
    double sd0 = std::sqrt(m_.sigma);
    double xi = 0.0, e = 1.0, s = 0.0;
    double acc_f = 0.0, acc_c = 0.0;
    double t_kill = m_.kill_q > 0.0 ? g.exponential(m_.kill_q) : inf;
    double cap = std::min({time_cap, t_kill, cfg_.horizon});
    double t_jump = jump_rate_ > 0.0 ? g.exponential(jump_rate_) : inf;
    int resync = 0;
    for (;;) {
        if (xi <= stop_log_euler) {
            out.tail = e;
            break;
        }
        int pw = 0;
        if (xi < ladder_start)
            pw = std::min(ladder_max_pow,
                          1 + static_cast<int>((ladder_start - xi) / ladder_band));
        double h = dt * static_cast<double>(1 << pw);
        double bound = std::min(cap, t_jump);
        if (s + 2.0 * h >= bound) {
            // close the interval with fine steps; both replicas get the
            // identical contribution on this sliver
            while (s < bound) {
                double hh = std::min(dt, bound - s);
                double d1 = drift_ * hh + sd0 * std::sqrt(hh) * g.normal();
                double e0 = e;
                xi += d1;
                e = e0 * exp_small(alpha * d1);
                double c = 0.5 * hh * (e0 + e);
                acc_f += c;
                acc_c += c;
                s += hh;
            }
            e = std::exp(alpha * xi);
            if (s >= cap) {
                if (s >= cfg_.horizon && s < t_kill && s < time_cap)
                    out.flagged = true;
                break;
            }
            xi += draw_jump(g);
            e = std::exp(alpha * xi);
            t_jump = s + g.exponential(jump_rate_);
            continue;
        }
        double sd = sd0 * std::sqrt(h);
        double e0 = e;
        double d1 = drift_ * h + sd * g.normal();
        xi += d1;
        double e1 = e0 * exp_small(alpha * d1);
        acc_f += 0.5 * h * (e0 + e1);
        double d2 = drift_ * h + sd * g.normal();
        xi += d2;
        e = e1 * exp_small(alpha * d2);
        acc_f += 0.5 * h * (e1 + e);
        acc_c += h * (e0 + e);
        s += 2.0 * h;
        if (++resync >= 8192) {
            e = std::exp(alpha * xi);
            resync = 0;
        }
        if (acc_f >= sigma_cap) {
            acc_c = std::max(acc_c, acc_f);
            break;
        }
    }
    out.sigma_f = acc_f;
    out.sigma_c = acc_c;
    out.xi_end = xi;
    return out;
}

std::vector<double> mc_oracle::sample_sigma(long long n,
                                            std::uint64_t salt) const {
    std::vector<double> out(n);
    parallel_paths(n, [&](long long i) {
        out[i] = run_path(static_cast<std::uint64_t>(i), salt, inf, inf).sigma_f;
    });
    return out;
}

std::vector<mc_estimate> mc_oracle::estimate_survival(
    const std::vector<double>& ts, double x) const {
    if (!(x > 0.0)) throw config_error("mc survival: x must be positive");
    double xa = std::pow(x, m_.alpha);
    double thr_max = 0.0;
    for (double t : ts) thr_max = std::max(thr_max, t / xa);
    long long n = cfg_.paths;
    std::vector<double> sf(n), sc(n), tail(n), flag(n);
    double cap = thr_max * 1.001 + 1e-6;
    parallel_paths(n, [&](long long i) {
        path_out p = run_path(static_cast<std::uint64_t>(i), 1, inf, cap);
        sf[i] = p.sigma_f;
        sc[i] = p.sigma_c;
        tail[i] = p.tail;
        flag[i] = p.flagged ? 1.0 : 0.0;
    });
    std::vector<mc_estimate> out;
    std::vector<double> diff(n);
    for (double t : ts) {
        double thr = t / xa;
        kahan cf, flip;
        for (long long i = 0; i < n; ++i) {
            double df = sf[i] >= thr ? 1.0 : 0.0;
            double dc = sc[i] >= thr ? 1.0 : 0.0;
            cf.add(df);
            diff[i] = df - dc;
            if (flag[i] > 0.0) {
                flip.add(1.0);
            } else if (tail[i] > 0.0) {
                double gap = std::max(std::abs(thr - sf[i]), tail[i]);
                flip.add(std::min(1.0, 2.0 * std::pow(tail[i] / gap, atg_)));
            }
        }
        double p = cf.value() / n;
        double dmean, dse;
        mean_se(diff, dmean, dse);
        mc_estimate est;
        est.value = p;
        est.std_err = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
        est.paths_used = n;
        est.truncation_bias_bound =
            3.0 * std::abs(dmean) + 2.0 * dse + flip.value() / n;
        out.push_back(est);
    }
    return out;
}

mc_oracle::exit_out mc_oracle::run_exit_path(std::uint64_t path_idx,
                                             const exit_spec& spec) const {
    rng_stream g(splitmix64(splitmix64(cfg_.seed + path_idx) ^
                            (2ULL * 0xD1342543DE82EF95ULL)));
    exit_out out;
    double alpha = m_.alpha;
    double chi = spec.chi(alpha);  // < 0 here
    double xa = std::pow(spec.start_x, alpha);
    double aa = std::pow(spec.level_a, alpha);
    double lx = std::log(spec.start_x);
    double t_kill = m_.kill_q > 0.0 ? g.exponential(m_.kill_q) : inf;
    double xi = 0.0, e = 1.0, s = 0.0, acc_f = 0.0, acc_c = 0.0;
    bool done_f = false, done_c = false;
    auto crossed = [&](double acc) {
        double bnd = 1.0 + chi * xa * acc;
        return xa * e >= aa * bnd;
    };
    auto dead = [&](double acc) { return 1.0 + chi * xa * acc <= 0.0; };
    if (event_exact_) {
        double b = drift_;
        for (;;) {
            double t_jump =
                jump_rate_ > 0.0 ? s + g.exponential(jump_rate_) : inf;
            double seg_end = std::min({t_jump, t_kill, cfg_.horizon});
            double d = seg_end - s;
            acc_f += e * std::expm1(alpha * b * d) / (alpha * b);
            xi += b * d;
            e = std::exp(alpha * xi);
            s = seg_end;
            // within a drift segment X rises and the boundary falls, so an
            // end-of-segment check catches any crossing exactly
            if (crossed(acc_f)) {
                out.crossed_f = out.crossed_c = true;
                return out;
            }
            if (dead(acc_f) || s >= t_kill) return out;
            if (s >= cfg_.horizon) {
                out.flip = 1.0;
                return out;
            }
            xi += draw_jump(g);
            e = std::exp(alpha * xi);
            if (xi <= stop_log_event) {
                double gap = std::max(-chi, 1e-300) * xa *
                             std::max(1.0 / (-chi * xa) - acc_f, e);
                out.flip = std::min(1.0, 2.0 * std::pow(e / gap, atg_));
                return out;
            }
        }
    }
    double dt = cfg_.dt;
    double sd0 = std::sqrt(m_.sigma);
    double cap = std::min(t_kill, cfg_.horizon);
    double t_jump = jump_rate_ > 0.0 ? g.exponential(jump_rate_) : inf;
    int resync = 0;
    while (!(done_f && done_c)) {
        if (xi <= stop_log_euler) {
            double gap = std::max(1.0 / (-chi * xa) - acc_f, e);
            out.flip = std::min(1.0, 2.0 * std::pow(e / gap, atg_));
            break;
        }
        // coarsen when the crossing is far away in simulation time: bound
        // the time to crossing by the collapse rate of the boundary and by
        // the diffusive motion of xi, and keep ~64 coarse steps before it
        double bnd = std::max(1.0 + chi * xa * acc_f, 1e-300);
        double fdist = std::log(aa * bnd) - alpha * (lx + xi);  // log-gap
        int pw = 0;
        if (fdist > 0.0) {
            double rate = -chi * xa * e / bnd;  // d(-log bnd)/ds
            double s_drift = fdist / std::max(rate, 1e-300);
            double s_diff = fdist * fdist / (alpha * alpha * m_.sigma);
            double mm = std::min(s_drift, s_diff) / (64.0 * dt);
            if (mm > 2.0)
                pw = std::min(ladder_max_pow,
                              static_cast<int>(std::log2(mm)));
        }
        double h = dt * static_cast<double>(1 << pw);
        double bound = std::min(cap, t_jump);
        if (s + 2.0 * h >= bound) {
            while (s < bound) {
                double hh = std::min(dt, bound - s);
                double d1 = drift_ * hh + sd0 * std::sqrt(hh) * g.normal();
                double e0 = e;
                xi += d1;
                e = e0 * exp_small(alpha * d1);
                double c = 0.5 * hh * (e0 + e);
                acc_f += c;
                acc_c += c;
                s += hh;
                if (!done_f && crossed(acc_f)) out.crossed_f = done_f = true;
                if (!done_c && crossed(acc_c)) out.crossed_c = done_c = true;
            }
            e = std::exp(alpha * xi);
            if (s >= t_kill) break;
            if (s >= cfg_.horizon) {
                out.flip = 1.0;
                break;
            }
            xi += draw_jump(g);
            e = std::exp(alpha * xi);
            t_jump = s + g.exponential(jump_rate_);
            continue;
        }
        double sd = sd0 * std::sqrt(h);
        double e0 = e;
        double d1 = drift_ * h + sd * g.normal();
        xi += d1;
        double e1 = e0 * exp_small(alpha * d1);
        acc_f += 0.5 * h * (e0 + e1);
        if (!done_f && crossed(acc_f)) out.crossed_f = done_f = true;
        double d2 = drift_ * h + sd * g.normal();
        xi += d2;
        e = e1 * exp_small(alpha * d2);
        acc_f += 0.5 * h * (e1 + e);
        acc_c += h * (e0 + e);
        s += 2.0 * h;
        if (++resync >= 8192) {
            e = std::exp(alpha * xi);
            resync = 0;
        }
        if (!done_f && crossed(acc_f)) out.crossed_f = done_f = true;
        if (!done_c && crossed(acc_c)) out.crossed_c = done_c = true;
        if (!done_f && dead(acc_f)) done_f = true;
        if (!done_c && dead(acc_c)) done_c = true;
    }
    return out;
}

mc_estimate mc_oracle::estimate_exit(const exit_spec& spec) const {
    spec.validate();
    if (!(spec.lambda < 0.0))
        throw config_error("mc exit: only the lambda < 0 case is simulated");
    long long n = cfg_.paths;
    std::vector<double> cf(n), cc(n), flip(n);
    parallel_paths(n, [&](long long i) {
        exit_out e = run_exit_path(static_cast<std::uint64_t>(i), spec);
        cf[i] = e.crossed_f ? 1.0 : 0.0;
        cc[i] = e.crossed_c ? 1.0 : 0.0;
        flip[i] = e.flip;
    });
    kahan s, fl;
    std::vector<double> diff(n);
    for (long long i = 0; i < n; ++i) {
        s.add(cf[i]);
        fl.add(flip[i]);
        diff[i] = cf[i] - cc[i];
    }
    double p = s.value() / n;
    double dmean, dse;
    mean_se(diff, dmean, dse);
    mc_estimate est;
    est.value = p;
    est.std_err = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
    est.paths_used = n;
    est.truncation_bias_bound =
        3.0 * std::abs(dmean) + 2.0 * dse + fl.value() / n;
    return est;
}

double mc_oracle::affine_ks_statistic(long long n) const {
    std::vector<double> lhs = sample_sigma(n, 11);
    std::vector<double> rhs(n);
    std::vector<double> tail = sample_sigma(n, 13);
    parallel_paths(n, [&](long long i) {
        path_out head =
            run_path(static_cast<std::uint64_t>(i), 17, 1.0, inf);
        rhs[i] = head.sigma_f + std::exp(m_.alpha * head.xi_end) * tail[i];
    });
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < lhs.size() && j < rhs.size()) {
        if (lhs[i] <= rhs[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / lhs.size() -
                                 static_cast<double>(j) / rhs.size()));
    }
    return d;
}

double mc_oracle::ks_critical_1pct(long long n, long long m) {
    return 1.628 * std::sqrt(static_cast<double>(n + m) /
                             (static_cast<double>(n) * m));
}

std::vector<mc_estimate> mc_oracle::simulate_stable_max(
    double alpha, const mc_config& cfg, const std::vector<double>& xs) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw config_error("stable max: alpha must lie in (1, 2)");
    cfg.validate();
    long long n = cfg.paths;
    long long steps = static_cast<long long>(std::llround(1.0 / cfg.dt));
    if (steps % 2) ++steps;
    double dt = 1.0 / static_cast<double>(steps);
    double th0 = std::atan(std::tan(M_PI * alpha / 2.0)) / alpha;
    double c1 = 1.0 / alpha;
    double c2 = (1.0 - alpha) / alpha;
    double scale = std::pow(dt, 1.0 / alpha);
    std::vector<double> mf(n), mc_rep(n);
    parallel_paths(n, [&](long long i) {
        rng_stream g(splitmix64(splitmix64(cfg.seed + i) ^
                                (3ULL * 0xD1342543DE82EF95ULL)));
        double z = 0.0, maxf = 0.0, maxc = 0.0;
        // single-precision transcendentals: the per-increment rounding
        // (~1e-7 relative on increments of size dt^{1/alpha}) is orders of
        // magnitude below the statistical resolution
        float af = static_cast<float>(alpha);
        float th0f = static_cast<float>(th0);
        float c1f = static_cast<float>(c1);
        float c2f = static_cast<float>(c2);
        for (long long k = 0; k < steps; k += 2) {
            for (int half = 0; half < 2; ++half) {
                float v = static_cast<float>((g.uniform() - 0.5) * M_PI);
                float w = -std::log(std::max(
                    static_cast<float>(g.uniform()), 1e-30f));
                float t1 = af * (v + th0f);
                float x = std::sin(t1) *
                          std::exp(-c1f * std::log(std::cos(v)) +
                                   c2f * (std::log(std::cos(v - t1)) -
                                          std::log(w)));
                if (std::isfinite(x)) z += scale * static_cast<double>(x);
                maxf = std::max(maxf, z);
            }
            maxc = std::max(maxc, z);  // even partial sums only
        }
        mf[i] = maxf;
        mc_rep[i] = maxc;
    });
    std::vector<mc_estimate> out;
    std::vector<double> diff(n);
    for (double x : xs) {
        kahan s;
        for (long long i = 0; i < n; ++i) {
            double df = mf[i] <= x ? 1.0 : 0.0;
            double dc = mc_rep[i] <= x ? 1.0 : 0.0;
            s.add(df);
            diff[i] = df - dc;
        }
        double p = s.value() / n;
        double dmean, dse;
        mean_se(diff, dmean, dse);
        mc_estimate est;
        est.value = p;
        est.std_err = std::sqrt(std::max(p * (1.0 - p), 1e-300) / n);
        est.paths_used = n;
        est.truncation_bias_bound = 3.0 * std::abs(dmean) + 2.0 * dse;
        out.push_back(est);
    }
    return out;
}

}  // namespace ssabsorb
