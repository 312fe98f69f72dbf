// certificates.hpp
// Nonlocality certificates that operate directly on outcome distributions:
// support/parity constraint checks, the Finner inequality, the closed-form
// threshold inequality in (lambda0, u) and its root u_max(lambda0).

#pragma once

#include "qnet/distribution.hpp"
#include "qnet/marginal_problems.hpp"

#include <map>
#include <optional>

namespace qnet {

struct ConstraintCheck {
    std::string name;
    double expected = 0;
    double observed = 0;

    double deviation() const { return std::abs(observed - expected); }
};

struct ConstraintReport {
    std::vector<ConstraintCheck> checks;

    double max_deviation() const {
        double worst = 0;
        for (const auto& c : checks) worst = std::max(worst, c.deviation());
        return worst;
    }
    bool ok(double tol = 1e-12) const { return max_deviation() <= tol; }
};

enum class SupportKind { QubitCycle, QutritTriangle };

namespace detail {

template <class S>
double pair_mass(const BasicDistribution<S>& dist, std::size_t k0, int l0, std::size_t k1,
                 int l1) {
    double acc = 0;
    std::vector<int> labels;
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        dist.decode(idx, labels);
        if (labels[k0] == l0 && labels[k1] == l1) acc += qnet::to_double(dist[idx]);
    }
    return acc;
}

}  // namespace detail

// Structural support constraints of the quantum cycle distributions. Every
// deviation lands in the report; nothing throws on violation.
template <class S>
ConstraintReport check_support_constraints(const BasicDistribution<S>& dist, SupportKind kind) {
    ConstraintReport report;
    const std::size_t n = dist.arity();
    if (kind == SupportKind::QubitCycle) {
        // Adjacent (up,up) and (down,down) vanish; an even number of
        // coarse-chi outputs never occurs.
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t k1 = (k + 1) % n;
            auto name = [&](const char* l) {
                return std::string("P(a") + std::to_string(k) + "=" + l + ",a" +
                       std::to_string(k1) + "=" + l + ")";
            };
            report.checks.push_back({name("up"), 0.0, detail::pair_mass(dist, k, 0, k1, 0)});
            report.checks.push_back({name("down"), 0.0, detail::pair_mass(dist, k, 1, k1, 1)});
        }
        double even_chi = 0;
        std::vector<int> labels;
        for (std::size_t idx = 0; idx < dist.size(); ++idx) {
            dist.decode(idx, labels);
            int chis = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const auto& p = dist.parties()[k];
                if (p.coarse_names[p.coarse_of[labels[k]]] == "chi") ++chis;
            }
            if (chis % 2 == 0) even_chi += qnet::to_double(dist[idx]);
        }
        report.checks.push_back({"P(even number of chi outputs)", 0.0, even_chi});
    } else {
        if (n != 3) throw std::invalid_argument("qutrit support check needs a triangle");
        // P(a_k = t_i, a_{k+1} = t_j) = 0 for i != j.
        for (std::size_t k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    if (i == j) continue;
                    std::string name = "P(a" + std::to_string(k) + "=t" + std::to_string(i) +
                                       ",a" + std::to_string((k + 1) % 3) + "=t" +
                                       std::to_string(j) + ")";
                    report.checks.push_back(
                        {name, 0.0, detail::pair_mass(dist, k, i, (k + 1) % 3, j)});
                }
        // P(a_k = t0, a_{k+1} in chi-down) = 0 and
        // P(a_k in chi-down, a_{k+1} = t2) = 0.
        for (std::size_t k = 0; k < 3; ++k) {
            std::size_t k1 = (k + 1) % 3;
            double after_t0 = 0, before_t2 = 0;
            for (int down = 6; down <= 8; ++down) {
                after_t0 += detail::pair_mass(dist, k, 0, k1, down);
                before_t2 += detail::pair_mass(dist, k, down, k1, 2);
            }
            report.checks.push_back({"P(a" + std::to_string(k) + "=t0,a" + std::to_string(k1) +
                                         " in chid)",
                                     0.0, after_t0});
            report.checks.push_back({"P(a" + std::to_string(k) + " in chid,a" +
                                         std::to_string(k1) + "=t2)",
                                     0.0, before_t2});
        }
    }
    return report;
}

// Finner slack sqrt(P_A(a) P_B(b) P_C(c)) - P(a,b,c) for every outcome of a
// tripartite distribution. Negative slack rules out any model whose hidden
// variables factor over the triangle (classical, quantum or boxworld).
inline std::vector<double> finner_slack(const Distribution& dist) {
    if (dist.arity() != 3) throw std::invalid_argument("Finner slack needs a tripartite distribution");
    auto pa = marginal(dist, {0}), pb = marginal(dist, {1}), pc = marginal(dist, {2});
    std::vector<double> slack(dist.size());
    std::vector<int> labels;
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        dist.decode(idx, labels);
        double prod = pa[static_cast<std::size_t>(labels[0])] *
                      pb[static_cast<std::size_t>(labels[1])] *
                      pc[static_cast<std::size_t>(labels[2])];
        slack[idx] = std::sqrt(prod) - dist[idx];
    }
    return slack;
}

// Exact variant; requires the single-party marginals to be rational (true
// for every network built here, where the reduced states are diagonal).
inline std::vector<RadicalSum> finner_slack_exact(const ExactDistribution& dist) {
    if (dist.arity() != 3) throw std::invalid_argument("Finner slack needs a tripartite distribution");
    auto pa = marginal(dist, {0}), pb = marginal(dist, {1}), pc = marginal(dist, {2});
    std::vector<RadicalSum> slack(dist.size());
    std::vector<int> labels;
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        dist.decode(idx, labels);
        Rational prod = pa[static_cast<std::size_t>(labels[0])].as_rational() *
                        pb[static_cast<std::size_t>(labels[1])].as_rational() *
                        pc[static_cast<std::size_t>(labels[2])].as_rational();
        slack[idx] = RadicalSum::sqrt_of(prod) - dist[idx];
    }
    return slack;
}

// Left-hand side of the threshold inequality in (lambda0, u). Nonnegative
// whenever the triangle marginal system is feasible; a negative value
// certifies nonlocality of the corresponding quantum distribution.
//
// Evaluated in the factored form
//     2 v^3 (lambda0^6 v^3 + lambda1^6 v (3 - v^2) - 2 lambda0^3 lambda1^3 u^3),
// algebraically identical to the expanded sum of squares (the test suite
// checks the identity in exact arithmetic) but free of the cancellation that
// makes the expanded form unusable near u = 1, where it vanishes identically.
inline double ineq_lhs(double lambda0, double u) {
    if (!(lambda0 > 0 && lambda0 < 1)) throw std::domain_error("need 0 < lambda0 < 1");
    if (!(u > 0 && u < 1)) throw std::domain_error("need 0 < u < 1");
    double l1 = std::sqrt(1 - lambda0 * lambda0);
    double v = std::sqrt(1 - u * u);
    double l03 = lambda0 * lambda0 * lambda0, l13 = l1 * l1 * l1;
    double g = l03 * l03 * v * v * v + l13 * l13 * v * (3 - v * v) - 2 * l03 * l13 * u * u * u;
    return 2 * v * v * v * g;
}

// Same expression over exact radicals (squared parameters rational); the sign
// is then exact, which the grid-agreement test against the LP relies on.
inline RadicalSum ineq_lhs_exact(const Rational& l02, const Rational& u2) {
    if (!(l02 > 0 && l02 < 1)) throw std::domain_error("need 0 < lambda0^2 < 1");
    if (!(u2 > 0 && u2 < 1)) throw std::domain_error("need 0 < u^2 < 1");
    Rational l12 = 1 - l02, v2 = 1 - u2;
    RadicalSum u = RadicalSum::sqrt_of(u2), v = RadicalSum::sqrt_of(v2);
    RadicalSum l03 = RadicalSum(l02) * RadicalSum::sqrt_of(l02);
    RadicalSum l13 = RadicalSum(l12) * RadicalSum::sqrt_of(l12);
    RadicalSum l06{l02 * l02 * l02}, l16{l12 * l12 * l12};
    RadicalSum u3 = u * u * u, v3 = v * v * v;
    RadicalSum t1 = l03 * RadicalSum(u2) * v - l13 * u * RadicalSum(v2);
    RadicalSum t2 = l03 * u3 + l13 * v3;
    RadicalSum t3 = l03 * v3 - l13 * u3;
    return RadicalSum(3) * t1 * t1 - RadicalSum(3 * u2) * (l06 + l16) +
           RadicalSum(2) * (l16 + t2 * t2) + l06 + t3 * t3;
}

// Smallest u in (1/sqrt(2), 1) past which the threshold inequality goes
// negative, located by a 1000-point scan and bisection to |hi-lo| <= tol.
// No sign change on the bracket reports "no threshold" (nullopt) rather than
// guessing.
inline std::optional<double> u_threshold(double lambda0, double tol = 1e-12) {
    if (!(lambda0 > 0 && lambda0 < 1)) throw std::domain_error("need 0 < lambda0 < 1");
    const int grid = 1000;
    const double lo_edge = 1.0 / std::sqrt(2.0), hi_edge = 1.0 - 1e-12;
    auto f = [&](double u) { return ineq_lhs(lambda0, u); };
    double prev_u = lo_edge, prev_f = f(prev_u);
    for (int i = 1; i <= grid; ++i) {
        double cur_u = lo_edge + (hi_edge - lo_edge) * i / grid;
        double cur_f = f(cur_u);
        if (prev_f >= 0 && cur_f < 0) {
            double lo = prev_u, hi = cur_u;
            while (hi - lo > tol) {
                double mid = 0.5 * (lo + hi);
                (f(mid) >= 0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_u = cur_u;
        prev_f = cur_f;
    }
    return std::nullopt;
}

}  // namespace qnet
