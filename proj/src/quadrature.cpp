#include "ssabsorb/common.hpp"

#include <array>

namespace ssabsorb {
namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss
// rule (standard QUADPACK constants).
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct panel {
    double value;
    double err;
};

panel gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = wgk[7] * fc;
    double resg = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double dx = h * xgk[j];
        double fsum = f(c - dx) + f(c + dx);
        resk += wgk[j] * fsum;
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

void refine(const std::function<double(double)>& f, double a, double b,
            panel p, double tol, int depth, int max_depth, kahan& acc,
            double& err_acc, bool& ok) {
    if (p.err <= tol || depth >= max_depth) {
        acc.add(p.value);
        err_acc += p.err;
        if (depth >= max_depth && p.err > tol) ok = false;
        return;
    }
    double m = 0.5 * (a + b);
    panel pl = gk15(f, a, m);
    panel pr = gk15(f, m, b);
    refine(f, a, m, pl, 0.5 * tol, depth + 1, max_depth, acc, err_acc, ok);
    refine(f, m, b, pr, 0.5 * tol, depth + 1, max_depth, acc, err_acc, ok);
}

}  // namespace

quad_result integrate(const std::function<double(double)>& f, double a,
                      double b, double rel_tol, double abs_tol,
                      int max_depth) {
    panel p0 = gk15(f, a, b);
    double tol = std::max(abs_tol, rel_tol * std::abs(p0.value));
    kahan acc;
    double err = 0.0;
    bool ok = true;
    refine(f, a, b, p0, tol, 0, max_depth, acc, err, ok);
    return {acc.value(), err, ok};
}

}  // namespace ssabsorb
