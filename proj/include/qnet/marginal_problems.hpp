// marginal_problems.hpp
// Builders for the exact marginal-feasibility systems whose infeasibility
// certifies nonlocality: the 16-variable triangle system q(i,j,k,t), its
// symmetrized reduction, the 18-variable qutrit system q(i,j,t), and the
// xi-chain system for odd cycles. Plus the zero-propagation argument that
// pins the qutrit solution entrywise.

#pragma once

#include "qnet/core.hpp"
#include "qnet/lp.hpp"

#include <array>

namespace qnet {

namespace detail {

// u_t / v_t pairs of the qubit basis, exact.
struct ChiWeights {
    RadicalSum u[2], v[2];
    explicit ChiWeights(const Rational& u2) {
        RadicalSum uu = RadicalSum::sqrt_of(u2), vv = RadicalSum::sqrt_of(1 - u2);
        u[0] = uu; v[0] = vv;
        u[1] = vv; v[1] = RadicalSum(0) - uu;
    }
};

inline Int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace detail

// Marginal system for the generalized triangle: variables q(i,j,k,t) >= 0
// with the three-point marginals q(i,j,k) and all single-position marginals
// q(.,t) prescribed. Requires rational squared parameters so the system data
// stays inside one quadratic field.
inline FeasibilityProblem triangle_marginal_problem(const Rational& l02, const Rational& u2) {
    if (!(l02 > 0 && l02 < 1)) throw std::domain_error("need 0 < lambda0^2 < 1");
    if (!(u2 > 0 && u2 < 1)) throw std::domain_error("need 0 < u^2 < 1");
    Rational l12 = 1 - l02;
    RadicalSum l03 = RadicalSum(l02) * RadicalSum::sqrt_of(l02);
    RadicalSum l13 = RadicalSum(l12) * RadicalSum::sqrt_of(l12);
    Rational l06 = l02 * l02 * l02, l16 = l12 * l12 * l12;
    Rational denom = l06 + l16;
    detail::ChiWeights w(u2);

    FeasibilityProblem p;
    p.n_vars = 16;
    auto flat = [](int i, int j, int k, int t) { return ((i * 2 + j) * 2 + k) * 2 + t; };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int t = 0; t < 2; ++t)
                    p.var_names.push_back("q(" + std::to_string(i) + "," + std::to_string(j) +
                                          "," + std::to_string(k) + "," + std::to_string(t) + ")");

    std::vector<RadicalSum> ones(16, RadicalSum(1));
    p.add_row("norm", std::move(ones), RadicalSum(1));

    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                std::vector<RadicalSum> row(16, RadicalSum(0));
                row[flat(i, j, k, 0)] = RadicalSum(1);
                row[flat(i, j, k, 1)] = RadicalSum(1);
                RadicalSum amp = l03 * w.u[i] * w.u[j] * w.u[k] + l13 * w.v[i] * w.v[j] * w.v[k];
                p.add_row("q(" + std::to_string(i) + "," + std::to_string(j) + "," +
                              std::to_string(k) + ")",
                          std::move(row), amp * amp / RadicalSum(denom));
            }

    // q(pos = w, t = 0) = lambda0^6 u_w^2 / (lambda0^6 + lambda1^6), and the
    // lambda1^6 v_w^2 analogue at t = 1; same right sides for all positions.
    const char* pos_name[3] = {"i", "j", "k"};
    for (int pos = 0; pos < 3; ++pos)
        for (int val = 0; val < 2; ++val)
            for (int t = 0; t < 2; ++t) {
                std::vector<RadicalSum> row(16, RadicalSum(0));
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        for (int k = 0; k < 2; ++k) {
                            int idx[3] = {i, j, k};
                            if (idx[pos] == val) row[flat(i, j, k, t)] = RadicalSum(1);
                        }
                RadicalSum sq = (t == 0) ? w.u[val] * w.u[val] : w.v[val] * w.v[val];
                RadicalSum rhs = RadicalSum(t == 0 ? l06 : l16) * sq / RadicalSum(denom);
                p.add_row(std::string("q(") + pos_name[pos] + "=" + std::to_string(val) +
                              ",t=" + std::to_string(t) + ")",
                          std::move(row), rhs);
            }
    return p;
}

// Symmetrized reduction: variables qs(d,t) for d = #(ones) in (i,j,k).
// Symmetrizing is without loss for feasibility since all right sides are
// permutation invariant; the test suite checks both routes agree.
inline FeasibilityProblem triangle_marginal_problem_symmetrized(const Rational& l02,
                                                                const Rational& u2) {
    if (!(l02 > 0 && l02 < 1)) throw std::domain_error("need 0 < lambda0^2 < 1");
    if (!(u2 > 0 && u2 < 1)) throw std::domain_error("need 0 < u^2 < 1");
    Rational l12 = 1 - l02;
    RadicalSum l03 = RadicalSum(l02) * RadicalSum::sqrt_of(l02);
    RadicalSum l13 = RadicalSum(l12) * RadicalSum::sqrt_of(l12);
    Rational l06 = l02 * l02 * l02, l16 = l12 * l12 * l12;
    Rational denom = l06 + l16;
    detail::ChiWeights w(u2);

    FeasibilityProblem p;
    p.n_vars = 8;
    auto flat = [](int d, int t) { return d * 2 + t; };
    for (int d = 0; d <= 3; ++d)
        for (int t = 0; t < 2; ++t)
            p.var_names.push_back("qs(" + std::to_string(d) + "," + std::to_string(t) + ")");

    {
        std::vector<RadicalSum> row(8);
        for (int d = 0; d <= 3; ++d)
            for (int t = 0; t < 2; ++t) row[flat(d, t)] = RadicalSum(Rational(detail::binom(3, d)));
        p.add_row("norm", std::move(row), RadicalSum(1));
    }
    for (int d = 0; d <= 3; ++d) {
        std::vector<RadicalSum> row(8, RadicalSum(0));
        row[flat(d, 0)] = RadicalSum(1);
        row[flat(d, 1)] = RadicalSum(1);
        // Any pattern with d ones has u-product u^(3-d) v^d and v-product
        // v^(3-d) (-u)^d.
        RadicalSum pu(1), pv(1);
        for (int k = 0; k < 3; ++k) {
            int bit = k < d ? 1 : 0;
            pu *= w.u[bit];
            pv *= w.v[bit];
        }
        RadicalSum amp = l03 * pu + l13 * pv;
        p.add_row("qs(" + std::to_string(d) + ")", std::move(row), amp * amp / RadicalSum(denom));
    }
    for (int val = 0; val < 2; ++val)
        for (int t = 0; t < 2; ++t) {
            std::vector<RadicalSum> row(8, RadicalSum(0));
            for (int rest = 0; rest <= 2; ++rest)
                row[flat(val + rest, t)] = RadicalSum(Rational(detail::binom(2, rest)));
            RadicalSum sq = (t == 0) ? w.u[val] * w.u[val] : w.v[val] * w.v[val];
            p.add_row("q(pos=" + std::to_string(val) + ",t=" + std::to_string(t) + ")",
                      std::move(row), RadicalSum(t == 0 ? l06 : l16) * sq / RadicalSum(denom));
        }
    return p;
}

namespace detail {

// Marginal data of the qutrit system, shared by the LP builder and the
// zero-propagation argument.
struct QutritMarginals {
    RadicalSum pair[3][3];   // q(i,j)
    RadicalSum row[3][2];    // q(i,t), t = 1,2
    RadicalSum col[3][2];    // q(j,t)

    QutritMarginals(const Mat<RadicalSum>& eta_up, const Mat<RadicalSum>& eta_down) {
        if (eta_up.rows() != 3 || eta_up.cols() != 3 || eta_down.rows() != 3 ||
            eta_down.cols() != 3)
            throw std::invalid_argument("eta matrices must be 3x3");
        for (const Mat<RadicalSum>* m : {&eta_up, &eta_down})
            if (max_orthogonality_deviation(*m) > 1e-10)
                throw std::invalid_argument("eta matrix is not orthogonal");
        RadicalSum half(Rational(1, 2));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                RadicalSum s = eta_up(i, 0) * eta_down(j, 0) + eta_up(i, 1) * eta_down(j, 1);
                pair[i][j] = half * s * s;
            }
        for (int i = 0; i < 3; ++i)
            for (int t = 0; t < 2; ++t) {
                row[i][t] = half * eta_up(i, t) * eta_up(i, t);
                col[i][t] = half * eta_down(i, t) * eta_down(i, t);
            }
    }
};

}  // namespace detail

// Marginal system for the qutrit triangle: variables q(i,j,t) >= 0 with
// pairwise and single-position marginals prescribed by the eta coefficients.
inline FeasibilityProblem qutrit_marginal_problem(const Mat<RadicalSum>& eta_up,
                                                  const Mat<RadicalSum>& eta_down) {
    detail::QutritMarginals m(eta_up, eta_down);
    FeasibilityProblem p;
    p.n_vars = 18;
    auto flat = [](int i, int j, int t) { return (i * 3 + j) * 2 + t; };  // t in {0,1} ~ {1,2}
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int t = 1; t <= 2; ++t)
                p.var_names.push_back("q(" + std::to_string(i) + "," + std::to_string(j) + ",t=" +
                                      std::to_string(t) + ")");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            std::vector<RadicalSum> row(18, RadicalSum(0));
            row[flat(i, j, 0)] = RadicalSum(1);
            row[flat(i, j, 1)] = RadicalSum(1);
            p.add_row("q(" + std::to_string(i) + "," + std::to_string(j) + ")", std::move(row),
                      m.pair[i][j]);
        }
    for (int i = 0; i < 3; ++i)
        for (int t = 0; t < 2; ++t) {
            std::vector<RadicalSum> row(18, RadicalSum(0));
            for (int j = 0; j < 3; ++j) row[flat(i, j, t)] = RadicalSum(1);
            p.add_row("q(i=" + std::to_string(i) + ",t=" + std::to_string(t + 1) + ")",
                      std::move(row), m.row[i][t]);
        }
    for (int j = 0; j < 3; ++j)
        for (int t = 0; t < 2; ++t) {
            std::vector<RadicalSum> row(18, RadicalSum(0));
            for (int i = 0; i < 3; ++i) row[flat(i, j, t)] = RadicalSum(1);
            p.add_row("q(j=" + std::to_string(j) + ",t=" + std::to_string(t + 1) + ")",
                      std::move(row), m.col[j][t]);
        }
    return p;
}

// Zero-propagation replay for the qutrit system: zero marginals force zero
// entries, then row/column sums determine the rest. When propagation pins
// all 18 entries the result is the unique candidate solution, which may
// carry a negative entry (certifying infeasibility). Otherwise NotForced.
struct QutritForcedSolution {
    bool determined = false;
    Mat<RadicalSum> m1{3, 3}, m2{3, 3};  // m1 ~ t=1, m2 ~ t=2

    bool has_negative() const {
        if (!determined) return false;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (m1(i, j).sign() < 0 || m2(i, j).sign() < 0) return true;
        return false;
    }
};

inline QutritForcedSolution qutrit_forced_solution(const Mat<RadicalSum>& eta_up,
                                                   const Mat<RadicalSum>& eta_down) {
    detail::QutritMarginals m(eta_up, eta_down);
    RadicalSum value[2][3][3];
    bool known[2][3][3] = {};

    auto set = [&](int t, int i, int j, const RadicalSum& v) {
        if (known[t][i][j]) {
            if (value[t][i][j] != v)
                throw std::logic_error("inconsistent marginal data in zero propagation");
            return false;
        }
        known[t][i][j] = true;
        value[t][i][j] = v;
        return true;
    };

    // Zero marginals force zeros.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (m.pair[i][j].is_zero()) {
                set(0, i, j, RadicalSum(0));
                set(1, i, j, RadicalSum(0));
            }
    for (int t = 0; t < 2; ++t)
        for (int i = 0; i < 3; ++i) {
            if (m.row[i][t].is_zero())
                for (int j = 0; j < 3; ++j) set(t, i, j, RadicalSum(0));
            if (m.col[i][t].is_zero())
                for (int j = 0; j < 3; ++j) set(t, j, i, RadicalSum(0));
        }

    // Fixpoint: last unknown in a row/column/pair is determined by the sum.
    bool progress = true;
    while (progress) {
        progress = false;
        for (int t = 0; t < 2; ++t)
            for (int i = 0; i < 3; ++i) {
                int unknown = -1, count = 0;
                RadicalSum acc(0);
                for (int j = 0; j < 3; ++j) {
                    if (known[t][i][j]) acc += value[t][i][j];
                    else { unknown = j; ++count; }
                }
                if (count == 1) progress |= set(t, i, unknown, m.row[i][t] - acc);
            }
        for (int t = 0; t < 2; ++t)
            for (int j = 0; j < 3; ++j) {
                int unknown = -1, count = 0;
                RadicalSum acc(0);
                for (int i = 0; i < 3; ++i) {
                    if (known[t][i][j]) acc += value[t][i][j];
                    else { unknown = i; ++count; }
                }
                if (count == 1) progress |= set(t, unknown, j, m.col[j][t] - acc);
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (known[0][i][j] && !known[1][i][j])
                    progress |= set(1, i, j, m.pair[i][j] - value[0][i][j]);
                else if (!known[0][i][j] && known[1][i][j])
                    progress |= set(0, i, j, m.pair[i][j] - value[1][i][j]);
            }
    }

    QutritForcedSolution out;
    out.determined = true;
    for (int t = 0; t < 2; ++t)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (!known[t][i][j]) out.determined = false;
            }
    if (out.determined)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                out.m1(i, j) = value[0][i][j];
                out.m2(i, j) = value[1][i][j];
            }
    return out;
}

// xi-chain system for the odd N-cycle at rational u^2: free variables
// xi_0..xi_N (split into nonnegative pairs) with
//   Q_d(0) >= 0:  xi_d >= -u^(2(N-d)) v^(2d) - (-1)^d (uv)^N
//   Q_d(1) >= 0:  xi_d <=  v^(2(N-d)) u^(2d) + (-1)^d (uv)^N
// and the two binomial-weighted equalities Gamma_0 = Gamma_1 = 0.
inline FeasibilityProblem cycle_xi_problem(int n, const Rational& u2) {
    if (n < 3 || n % 2 == 0) throw std::domain_error("cycle system needs odd N >= 3");
    if (!(u2 > 0 && u2 < 1)) throw std::domain_error("need 0 < u^2 < 1");
    Rational v2 = 1 - u2;
    int m = (n - 1) / 2;

    // (uv)^N = (u2 v2)^((N-1)/2) * sqrt(u2 v2)
    Rational uv2 = u2 * v2;
    Rational pw(1);
    for (int k = 0; k < m; ++k) pw *= uv2;
    RadicalSum cross = RadicalSum(pw) * RadicalSum::sqrt_of(uv2);

    auto upow = [&](int e) {  // u^(2e)
        Rational r(1);
        for (int k = 0; k < e; ++k) r *= u2;
        return r;
    };
    auto vpow = [&](int e) {
        Rational r(1);
        for (int k = 0; k < e; ++k) r *= v2;
        return r;
    };

    FeasibilityProblem p;
    p.n_vars = static_cast<std::size_t>(4 * (n + 1));
    auto pos = [&](int d) { return 4 * d; };      // xi_d^+
    auto neg = [&](int d) { return 4 * d + 1; };  // xi_d^-
    auto slo = [&](int d) { return 4 * d + 2; };  // slack of the lower bound
    auto shi = [&](int d) { return 4 * d + 3; };  // slack of the upper bound
    for (int d = 0; d <= n; ++d) {
        p.var_names.push_back("xi" + std::to_string(d) + "+");
        p.var_names.push_back("xi" + std::to_string(d) + "-");
        p.var_names.push_back("s_lo" + std::to_string(d));
        p.var_names.push_back("s_hi" + std::to_string(d));
    }
    for (int d = 0; d <= n; ++d) {
        RadicalSum signed_cross = (d % 2 == 0) ? cross : RadicalSum(0) - cross;
        // xi_d - s_lo = -a_d - (-1)^d c
        std::vector<RadicalSum> lo(p.n_vars, RadicalSum(0));
        lo[pos(d)] = RadicalSum(1);
        lo[neg(d)] = RadicalSum(-1);
        lo[slo(d)] = RadicalSum(-1);
        p.add_row("Q(d=" + std::to_string(d) + ",t=0)", std::move(lo),
                  RadicalSum(-upow(n - d) * vpow(d)) - signed_cross);
        // xi_d + s_hi = b_d + (-1)^d c
        std::vector<RadicalSum> hi(p.n_vars, RadicalSum(0));
        hi[pos(d)] = RadicalSum(1);
        hi[neg(d)] = RadicalSum(-1);
        hi[shi(d)] = RadicalSum(1);
        p.add_row("Q(d=" + std::to_string(d) + ",t=1)", std::move(hi),
                  RadicalSum(vpow(n - d) * upow(d)) + signed_cross);
    }
    for (int g = 0; g < 2; ++g) {
        std::vector<RadicalSum> row(p.n_vars, RadicalSum(0));
        for (int d = 0; d <= 2 * m; ++d) {
            RadicalSum c{Rational(detail::binom(2 * m, d))};
            row[pos(d + g)] = c;
            row[neg(d + g)] = RadicalSum(0) - c;
        }
        p.add_row("Gamma" + std::to_string(g), std::move(row), RadicalSum(0));
    }
    return p;
}

// Leading-order coefficient of the asymptotic contradiction for odd cycles:
// A = (-1)^(M+1) binom(2M, M) with M = (N-1)/2, together with the beta/gamma
// regime that makes (gamma - beta) A positive.
struct CycleSign {
    Int a;
    bool beta_gt_gamma;
};

inline CycleSign cycle_asymptotic_sign(int n) {
    if (n < 3 || n % 2 == 0) throw std::domain_error("cycle sign needs odd N >= 3");
    int m = (n - 1) / 2;
    Int a = detail::binom(2 * m, m);
    if (m % 2 == 0) a = -a;  // (-1)^(M+1)
    return {a, n % 4 == 1};
}

}  // namespace qnet
