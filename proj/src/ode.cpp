#include "curved/ode.hpp"

#include <algorithm>
#include <cmath>

namespace curved {

namespace {

// Dormand-Prince 8(5,3) coefficients (the classic dop853 tableau).
constexpr double c2 = 0.526001519587677318785587544488e-01,
                 c3 = 0.789002279381515978178381316732e-01,
                 c4 = 0.118350341907227396726757197510e+00,
                 c5 = 0.281649658092772603273242802490e+00,
                 c6 = 0.333333333333333333333333333333e+00, c7 = 0.25e+00,
                 c8 = 0.307692307692307692307692307692e+00,
                 c9 = 0.651282051282051282051282051282e+00, c10 = 0.6e+00,
                 c11 = 0.857142857142857142857142857142e+00;

constexpr double b1 = 5.42937341165687622380535766363e-2,
                 b6 = 4.45031289275240888144113950566e0,
                 b7 = 1.89151789931450038304281599044e0,
                 b8 = -5.8012039600105847814672114227e0,
                 b9 = 3.1116436695781989440891606237e-1,
                 b10 = -1.52160949662516078556178806805e-1,
                 b11 = 2.01365400804030348374776537501e-1,
                 b12 = 4.47106157277725905176885569043e-2;

constexpr double a21 = 5.26001519587677318785587544488e-2,
                 a31 = 1.97250569845378994544595329183e-2,
                 a32 = 5.91751709536136983633785987549e-2,
                 a41 = 2.95875854768068491816892993775e-2,
                 a43 = 8.87627564304205475450678981324e-2,
                 a51 = 2.41365134159266685502369798665e-1,
                 a53 = -8.84549479328286085344864962717e-1,
                 a54 = 9.24834003261792003115737966543e-1,
                 a61 = 3.7037037037037037037037037037e-2,
                 a64 = 1.70828608729473871279604482173e-1,
                 a65 = 1.25467687566822425016691814123e-1, a71 = 3.7109375e-2,
                 a74 = 1.70252211019544039314978060272e-1,
                 a75 = 6.02165389804559606850219397283e-2, a76 = -1.7578125e-2;

constexpr double a81 = 3.70920001185047927108779319836e-2,
                 a84 = 1.70383925712239993810214054705e-1,
                 a85 = 1.07262030446373284651809199168e-1,
                 a86 = -1.53194377486244017527936158236e-2,
                 a87 = 8.27378916381402288758473766002e-3,
                 a91 = 6.24110958716075717114429577812e-1,
                 a94 = -3.36089262944694129406857109825e0,
                 a95 = -8.68219346841726006818189891453e-1,
                 a96 = 2.75920996994467083049415600797e1,
                 a97 = 2.01540675504778934086186788979e1,
                 a98 = -4.34898841810699588477366255144e1,
                 a101 = 4.77662536438264365890433908527e-1,
                 a104 = -2.48811461997166764192642586468e0,
                 a105 = -5.90290826836842996371446475743e-1,
                 a106 = 2.12300514481811942347288949897e1,
                 a107 = 1.52792336328824235832596922938e1,
                 a108 = -3.32882109689848629194453265587e1,
                 a109 = -2.03312017085086261358222928593e-2;

constexpr double a111 = -9.3714243008598732571704021658e-1,
                 a114 = 5.18637242884406370830023853209e0,
                 a115 = 1.09143734899672957818500254654e0,
                 a116 = -8.14978701074692612513997267357e0,
                 a117 = -1.85200656599969598641566180701e1,
                 a118 = 2.27394870993505042818970056734e1,
                 a119 = 2.49360555267965238987089396762e0,
                 a1110 = -3.0467644718982195003823669022e0,
                 a121 = 2.27331014751653820792359768449e0,
                 a124 = -1.05344954667372501984066689879e1,
                 a125 = -2.00087205822486249909675718444e0,
                 a126 = -1.79589318631187989172765950534e1,
                 a127 = 2.79488845294199600508499808837e1,
                 a128 = -2.85899827713502369474065508674e0,
                 a129 = -8.87285693353062954433549289258e0,
                 a1210 = 1.23605671757943030647266201528e1,
                 a1211 = 6.43392746015763530355970484046e-1;

// embedded 5th- and 3rd-order error weights
constexpr double bhh1 = 0.244094488188976377952755905512e+00,
                 bhh2 = 0.733846688281611857341361741547e+00,
                 bhh3 = 0.220588235294117647058823529412e-01;
constexpr double er1 = 0.1312004499419488073250102996e-01,
                 er6 = -0.1225156446376204440720569753e+01,
                 er7 = -0.4957589496572501915214079952e+00,
                 er8 = 0.1664377182454986536961530415e+01,
                 er9 = -0.3503288487499736816886487290e+00,
                 er10 = 0.3341791187130174790297318841e+00,
                 er11 = 0.8192320648511571246570742613e-01,
                 er12 = -0.2235530786388629525884427845e-01;

constexpr int order = 8;

struct Work {
    std::vector<double> k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, ytmp;
    explicit Work(size_t n)
        : k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), k8(n), k9(n), k10(n), k11(n), k12(n),
          ytmp(n) {}
};

// One trial step from (y, f = k1) with size h. Fills ynew and the scaled
// error estimate; 11 RHS evaluations. Returns false if the RHS failed.
bool try_step(const OdeRhs& rhs, std::span<const double> y, std::span<const double> f,
              double h, const StepControl& ctl, Work& w, std::vector<double>& ynew,
              double& err) {
    const size_t n = y.size();
    auto& t = w.ytmp;

    for (size_t i = 0; i < n; ++i) t[i] = y[i] + h * a21 * f[i];
    if (!rhs(t, w.k2)) return false;
    for (size_t i = 0; i < n; ++i) t[i] = y[i] + h * (a31 * f[i] + a32 * w.k2[i]);
    if (!rhs(t, w.k3)) return false;
    for (size_t i = 0; i < n; ++i) t[i] = y[i] + h * (a41 * f[i] + a43 * w.k3[i]);
    if (!rhs(t, w.k4)) return false;
    for (size_t i = 0; i < n; ++i) t[i] = y[i] + h * (a51 * f[i] + a53 * w.k3[i] + a54 * w.k4[i]);
    if (!rhs(t, w.k5)) return false;
    for (size_t i = 0; i < n; ++i) t[i] = y[i] + h * (a61 * f[i] + a64 * w.k4[i] + a65 * w.k5[i]);
    if (!rhs(t, w.k6)) return false;
    for (size_t i = 0; i < n; ++i)
        t[i] = y[i] + h * (a71 * f[i] + a74 * w.k4[i] + a75 * w.k5[i] + a76 * w.k6[i]);
    if (!rhs(t, w.k7)) return false;
    for (size_t i = 0; i < n; ++i)
        t[i] = y[i] + h * (a81 * f[i] + a84 * w.k4[i] + a85 * w.k5[i] + a86 * w.k6[i] +
                           a87 * w.k7[i]);
    if (!rhs(t, w.k8)) return false;
    for (size_t i = 0; i < n; ++i)
        t[i] = y[i] + h * (a91 * f[i] + a94 * w.k4[i] + a95 * w.k5[i] + a96 * w.k6[i] +
                           a97 * w.k7[i] + a98 * w.k8[i]);
    if (!rhs(t, w.k9)) return false;
    for (size_t i = 0; i < n; ++i)
        t[i] = y[i] + h * (a101 * f[i] + a104 * w.k4[i] + a105 * w.k5[i] + a106 * w.k6[i] +
                           a107 * w.k7[i] + a108 * w.k8[i] + a109 * w.k9[i]);
    if (!rhs(t, w.k10)) return false;
    for (size_t i = 0; i < n; ++i)
        t[i] = y[i] + h * (a111 * f[i] + a114 * w.k4[i] + a115 * w.k5[i] + a116 * w.k6[i] +
                           a117 * w.k7[i] + a118 * w.k8[i] + a119 * w.k9[i] +
                           a1110 * w.k10[i]);
    if (!rhs(t, w.k11)) return false;
    for (size_t i = 0; i < n; ++i)
        t[i] = y[i] + h * (a121 * f[i] + a124 * w.k4[i] + a125 * w.k5[i] + a126 * w.k6[i] +
                           a127 * w.k7[i] + a128 * w.k8[i] + a129 * w.k9[i] +
                           a1210 * w.k10[i] + a1211 * w.k11[i]);
    if (!rhs(t, w.k12)) return false;

    double err5 = 0, err3 = 0;
    for (size_t i = 0; i < n; ++i) {
        const double ksum = b1 * f[i] + b6 * w.k6[i] + b7 * w.k7[i] + b8 * w.k8[i] +
                            b9 * w.k9[i] + b10 * w.k10[i] + b11 * w.k11[i] + b12 * w.k12[i];
        ynew[i] = y[i] + h * ksum;
        const double sk =
            1.0 / (ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i])));
        const double e3 = (ksum - bhh1 * f[i] - bhh2 * w.k9[i] - bhh3 * w.k3[i]) * sk;
        const double e5 = (er1 * f[i] + er6 * w.k6[i] + er7 * w.k7[i] + er8 * w.k8[i] +
                           er9 * w.k9[i] + er10 * w.k10[i] + er11 * w.k11[i] +
                           er12 * w.k12[i]) *
                          sk;
        err3 += e3 * e3;
        err5 += e5 * e5;
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    err = std::abs(h) * err5 / std::sqrt(deno * static_cast<double>(n));
    return true;
}

} // namespace

void DenseStep::eval(double t, std::span<double> out) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    for (size_t i = 0; i < y0.size(); ++i)
        out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
}

StepOutcome integrate_adaptive(const OdeRhs& rhs, std::vector<double>& y, double t0,
                               double t_end, const StepControl& ctl,
                               const std::function<ObserverAction(DenseStep&)>& observer,
                               double* t_reached, std::span<const double> checkpoints) {
    const size_t n = y.size();
    Work w(n);
    DenseStep step;
    step.y0 = y;
    step.y1.assign(n, 0.0);
    step.f0.assign(n, 0.0);
    step.f1.assign(n, 0.0);

    double t = t0;
    if (t_reached) *t_reached = t;
    if (!rhs(y, step.f0)) return StepOutcome::Unevaluable;

    double h_ctrl = std::clamp(ctl.h_init, ctl.h_min, ctl.h_max);
    bool rhs_failed_last = false;
    size_t next_cp = 0;

    // step-size controller in the customary dop853 form, with a small PI
    // damping term
    const double beta = 0.04;
    const double expo1 = 1.0 / order - beta * 0.2;
    const double safety = 0.9, fac_min = 1.0 / 3.0, fac_max = 6.0;
    double fac_old = 1e-4;

    const double t_tiny = 1e-14 * std::max(1.0, std::abs(t_end));

    while (t < t_end) {
        if (h_ctrl < ctl.h_min)
            return rhs_failed_last ? StepOutcome::Unevaluable : StepOutcome::Underflow;

        // land exactly on the next checkpoint / the end of the interval
        while (next_cp < checkpoints.size() && checkpoints[next_cp] <= t + t_tiny) ++next_cp;
        double gap = t_end - t;
        if (next_cp < checkpoints.size()) gap = std::min(gap, checkpoints[next_cp] - t);
        const double h = std::min(h_ctrl, gap);
        const bool shortened = h < h_ctrl;

        double err = 0;
        if (!try_step(rhs, y, step.f0, h, ctl, w, step.y1, err)) {
            rhs_failed_last = true;
            h_ctrl = h * 0.5;
            continue;
        }
        rhs_failed_last = false;

        const double fac11 = std::pow(std::max(err, 1e-32), expo1);
        if (err <= 1.0) {
            // accepted: one more evaluation for the dense-output slope
            if (!rhs(step.y1, step.f1)) return StepOutcome::Unevaluable;
            step.t0 = t;
            step.t1 = t + h;
            t = step.t1;
            if (t_reached) *t_reached = t;
            ObserverAction act = observer(step);
            if (act.modified) {
                if (!rhs(step.y1, step.f1)) return StepOutcome::Unevaluable;
            }
            y = step.y1;
            step.y0 = step.y1;
            step.f0 = step.f1;
            if (act.stop) return StepOutcome::Halted;

            const double fac =
                std::clamp(fac11 / (std::pow(fac_old, beta) * safety), 1.0 / fac_max,
                           1.0 / fac_min);
            const double h_new = std::clamp(h / fac, ctl.h_min, ctl.h_max);
            // a geometry-shortened step must not collapse the controller
            h_ctrl = shortened ? std::max(h_ctrl, h_new) : h_new;
            fac_old = std::max(err, 1e-4);
        } else {
            const double fac = std::min(1.0 / fac_min, fac11 / safety);
            h_ctrl = h / fac;
        }
    }
    return StepOutcome::Done;
}

bool integrate_fixed(const OdeRhs& rhs, std::vector<double>& y, double t0, double t_end,
                     int nsteps) {
    const size_t n = y.size();
    Work w(n);
    std::vector<double> f(n), ynew(n);
    StepControl loose;
    if (!rhs(y, f)) return false;
    const double h = (t_end - t0) / nsteps;
    for (int s = 0; s < nsteps; ++s) {
        double err = 0;
        if (!try_step(rhs, y, f, h, loose, w, ynew, err)) return false;
        y = ynew;
        if (!rhs(y, f)) return false;
    }
    return true;
}

} // namespace curved
