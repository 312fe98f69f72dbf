// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, in code.

#include "qnet/certificates.hpp"
#include "qnet/cli.hpp"
#include "qnet/engine.hpp"
#include "qnet/reference.hpp"
#include "qnet/trilocal.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

using namespace qnet;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

// 1. Closed-form reproduction for the qubit triangle at lambda0^2=1/2, u^2=0.8.
void criterion1() {
    Timer timer;
    auto dist = cycle_distribution(triangle_network<double>(Rational(4, 5)));
    double u = std::sqrt(0.8), v = std::sqrt(0.2);
    double uu[2] = {u, v}, vv[2] = {v, -u};
    double worst = 0;
    // Adjacent double-up / double-down vanish for all pairs and all third outputs.
    std::vector<int> labels;
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        dist.decode(idx, labels);
        for (int k = 0; k < 3; ++k) {
            int a = labels[k], b = labels[(k + 1) % 3];
            if ((a == 0 && b == 0) || (a == 1 && b == 1))
                worst = std::max(worst, std::abs(dist[idx]));
        }
    }
    // P(chi_i, up, down) = u_i^2 / 8 and cyclic shifts.
    for (int i = 0; i < 2; ++i) {
        double want = uu[i] * uu[i] / 8;
        worst = std::max(worst, std::abs(dist.prob({2 + i, 0, 1}) - want));
        worst = std::max(worst, std::abs(dist.prob({1, 2 + i, 0}) - want));
        worst = std::max(worst, std::abs(dist.prob({0, 1, 2 + i}) - want));
    }
    // P(chi_i, chi_j, chi_k) = (u_i u_j u_k + v_i v_j v_k)^2 / 8.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                double amp = uu[i] * uu[j] * uu[k] + vv[i] * vv[j] * vv[k];
                worst = std::max(worst,
                                 std::abs(dist.prob({2 + i, 2 + j, 2 + k}) - amp * amp / 8));
            }
    double secs = timer.seconds();
    report(1, worst <= 1e-12 && secs < 1.0, "closed forms at u^2=0.8 within 1e-12",
           "max deviation " + fmt(worst) + ", " + fmt(secs) + " s");
}

// 2. Transfer-matrix distribution equals naive dense contraction entrywise.
void criterion2() {
    Timer timer;
    double worst = 0;
    auto check = [&](const CycleNetwork& net) {
        auto fast = cycle_distribution(net);
        auto slow = reference_distribution(net);
        for (std::size_t i = 0; i < fast.size(); ++i)
            worst = std::max(worst, std::abs(fast[i] - slow[i]));
    };
    check(triangle_network<double>(Rational(4, 5), Rational(1, 3)));
    check(qutrit_triangle_network<double>());
    check(qubit_cycle_network<double>(5, Rational(7, 10)));
    double secs = timer.seconds();
    report(2, worst <= 1e-12 && secs < 10.0,
           "oracle equivalence for (N=3,d=2), (N=3,d=3), (N=5,d=2)",
           "max deviation " + fmt(worst) + ", " + fmt(secs) + " s");
}

// 3. Threshold anchors and bisection stability.
void criterion3() {
    auto r_half9 = u_threshold(1.0 / std::sqrt(2.0), 1e-9);
    auto r_half12 = u_threshold(1.0 / std::sqrt(2.0), 1e-12);
    auto r_23 = u_threshold(std::sqrt(2.0 / 3.0), 1e-12);
    bool ok = r_half9.has_value() && r_half12.has_value() && r_23.has_value();
    double dev_half = 0, dev_23 = 0, drift = 0;
    if (ok) {
        dev_half = std::abs(*r_half12 * *r_half12 - 0.785);
        dev_23 = std::abs(*r_23 * *r_23 - 2.0 / 3.0);
        drift = std::abs(*r_half12 - *r_half9);
        ok = dev_half <= 1e-3 && dev_23 <= 1e-4 && drift <= 1e-9;
    }
    report(3, ok, "u_max^2 anchors at lambda0^2 = 1/2 and 2/3, stable refinement",
           "|u_max^2-0.785| = " + fmt(dev_half) + ", |u_max^2-2/3| = " + fmt(dev_23) +
               ", refinement drift " + fmt(drift));
}

// 4. LP infeasibility coincides with the inequality sign on a 50-point grid.
void criterion4() {
    int disagreements = 0, infeasible = 0;
    for (int k = 1; k <= 50; ++k) {
        Rational u2 = Rational(1, 2) + Rational(k, 102);
        bool lp_infeasible =
            !lp_feasible(triangle_marginal_problem(Rational(1, 2), u2)).feasible();
        bool ineq_negative = ineq_lhs_exact(Rational(1, 2), u2).sign() < 0;
        if (lp_infeasible != ineq_negative) ++disagreements;
        if (lp_infeasible) ++infeasible;
    }
    report(4, disagreements == 0, "LP/inequality agreement on 50-point grid in (0.5,1)",
           std::to_string(infeasible) + "/50 infeasible, " + std::to_string(disagreements) +
               " disagreements");
}

// 5. The qutrit marginal system is exactly infeasible and zero propagation
// reconstructs the forced matrices verbatim.
void criterion5() {
    auto basis = qutrit_example_basis<RadicalSum>();
    Mat<RadicalSum> up(3, 3), down(3, 3);
    for (int i = 0; i < 3; ++i) {
        up(i, 0) = basis.states[3 + i](0, 1);
        up(i, 1) = basis.states[3 + i](0, 2);
        up(i, 2) = basis.states[3 + i](1, 2);
        down(i, 0) = basis.states[6 + i](1, 0);
        down(i, 1) = basis.states[6 + i](2, 0);
        down(i, 2) = basis.states[6 + i](2, 1);
    }
    auto res = lp_feasible(qutrit_marginal_problem(up, down));
    bool lp_ok = !res.feasible() && res.exact && res.verified;

    auto forced = qutrit_forced_solution(up, down);
    Rational m1_want[3][3] = {{Rational(1, 6), 0, 0},
                              {Rational(-1, 30), Rational(1, 5), 0},
                              {Rational(1, 15), Rational(1, 10), 0}};
    Rational m2_want[3][3] = {{Rational(1, 4), 0, 0},
                              {Rational(1, 20), Rational(1, 5), 0},
                              {0, 0, 0}};
    bool forced_ok = forced.determined;
    if (forced_ok)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                forced_ok = forced_ok && forced.m1(i, j).as_rational() == m1_want[i][j] &&
                            forced.m2(i, j).as_rational() == m2_want[i][j];
    report(5, lp_ok && forced_ok, "qutrit system exactly infeasible, forced matrices verbatim",
           std::string("lp ") + (lp_ok ? "infeasible+verified" : "WRONG") + ", M1[1][0] = " +
               (forced.determined ? forced.m1(1, 0).str() : "undetermined"));
}

// 6. Finner equality at (t0,t0,t0) and nonnegative slack on quantum triangles.
void criterion6() {
    auto qt = cycle_distribution(qutrit_triangle_network<RadicalSum>());
    auto exact_slack = finner_slack_exact(qt);
    std::vector<int> t000{0, 0, 0};
    bool equality = exact_slack[qt.index_of(t000)].is_zero();

    double min_slack = 1;
    auto scan = [&](const Distribution& d) {
        for (double s : finner_slack(d)) min_slack = std::min(min_slack, s);
    };
    for (auto& u2 : {Rational(1, 2), Rational(4, 5), Rational(9, 10), Rational(99, 100)})
        for (auto& l02 : {Rational(1, 2), Rational(1, 3), Rational(2, 3)})
            scan(cycle_distribution(triangle_network<double>(u2, l02)));
    auto root = u_threshold(1.0 / std::sqrt(2.0));
    if (root) scan(cycle_distribution(triangle_network_from_reals(*root, 1.0 / std::sqrt(2.0))));
    scan(to_double(qt));
    report(6, equality && min_slack >= -1e-12,
           "Finner slack 0 at (t0,t0,t0) exactly, >= -1e-12 on quantum triangles",
           std::string("equality ") + (equality ? "exact" : "BROKEN") + ", min slack " +
               fmt(min_slack));
}

// 7. The uniform-chi model reproduces the quantum distribution exactly.
void criterion7() {
    auto model_dist = evaluate(uniform_chi_model());
    auto quantum = as_rational(cycle_distribution(triangle_network<RadicalSum>(Rational(1, 2))));
    bool equal = model_dist.size() == quantum.size();
    for (std::size_t i = 0; equal && i < quantum.size(); ++i) equal = model_dist[i] == quantum[i];
    report(7, equal, "uniform-chi model equals the quantum distribution at u^2=1/2",
           equal ? "exact rational equality on all 64 outcomes" : "MISMATCH");
}

// 8. Threshold-point model: solved parameters, residuals, total variation.
void criterion8() {
    auto root = u_threshold(1.0 / std::sqrt(2.0), 1e-12);
    if (!root) {
        report(8, false, "threshold model at u_max", "no threshold root found");
        return;
    }
    auto params = solve_threshold_params(*root, 1e-10);
    if (!params) {
        report(8, false, "threshold model at u_max", "no (kappa0, tau0) solution");
        return;
    }
    auto model = build_threshold_model(*params);
    auto model_dist = evaluate(model);
    auto quantum = cycle_distribution(triangle_network_from_reals(*root, 1.0 / std::sqrt(2.0)));
    double tv = total_variation(model_dist, quantum);
    report(8, params->max_residual <= 1e-10 && tv <= 1e-6,
           "threshold model: residuals <= 1e-10, TV to quantum <= 1e-6",
           "max residual " + fmt(params->max_residual) + ", TV " + fmt(tv) + ", kappa0 = " +
               fmt(params->kappa0) + ", tau0 = " + fmt(params->tau0));
}

// 9. Odd-cycle systems infeasible at the spot checks; asymptotic signs.
void criterion9() {
    Timer timer;
    bool i3 = !lp_feasible(cycle_xi_problem(3, Rational(9, 10))).feasible();
    bool i5 = !lp_feasible(cycle_xi_problem(5, Rational(99, 100))).feasible();
    bool i7 = !lp_feasible(cycle_xi_problem(7, Rational(999, 1000))).feasible();
    auto s3 = cycle_asymptotic_sign(3);
    auto s5 = cycle_asymptotic_sign(5);
    double secs = timer.seconds();
    bool ok = i3 && i5 && i7 && s3.a == 2 && s5.a == -6 && secs < 5.0;
    report(9, ok, "cycle systems infeasible at (3,0.9), (5,0.99), (7,0.999); A = +2, -6",
           std::string(i3 && i5 && i7 ? "all infeasible" : "FEASIBLE somewhere") + ", A3 = " +
               s3.a.str() + ", A5 = " + s5.a.str() + ", " + fmt(secs) + " s");
}

// 10. Seeded sampling: empirical TV within the multinomial envelope and
// byte-identical reproduction.
void criterion10() {
    auto model = uniform_chi_model();
    const std::size_t n = 100000;
    auto samples = sample(model, n, 7);
    auto exact = evaluate(model);
    std::vector<double> freq(exact.size(), 0.0);
    for (const auto& row : samples) freq[exact.index_of(row)] += 1.0 / n;
    double tv = 0;
    for (std::size_t i = 0; i < exact.size(); ++i)
        tv += std::abs(freq[i] - qnet::to_double(exact[i]));
    tv /= 2;

    std::ostringstream out1, out2;
    write_samples_csv(out1, samples, model);
    write_samples_csv(out2, sample(model, n, 7), model);
    bool identical = out1.str() == out2.str();
    report(10, tv < 0.012 && identical, "10^5 seeded samples: TV < 0.012, byte-identical reruns",
           "TV " + fmt(tv) + ", rerun " + (identical ? "identical" : "DIFFERS"));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
