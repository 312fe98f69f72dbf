// lp.hpp
// Exact linear feasibility: find x >= 0 with Ax = b, or produce a Farkas
// certificate y with y^T A <= 0 and y^T b > 0 proving no such x exists.
//
// The solver is a dense two-phase simplex with Bland's rule, templated on the
// scalar field. Problems here have at most a few dozen variables, so the
// priority is exactness: rationals for rational data, and the quadratic field
// Q(sqrt(r)) (via RadicalSum) when the right-hand sides carry a square root.
// A double instantiation with epsilon pivoting backs the float fallback for
// data outside any single quadratic field.
//
// Witnesses and Farkas vectors are re-verified by substitution before being
// returned; a certificate that fails re-verification is a solver bug and
// throws.

#pragma once

#include "qnet/radical.hpp"

#include <string>
#include <vector>

namespace qnet {

// Scalar glue for the simplex: exact sign for exact fields, epsilon sign for
// doubles.
template <class F>
struct FieldOps {
    static int sign(const F& x) { return x.sign(); }
    static F from_radical(const RadicalSum& x) { return x; }
    static RadicalSum to_radical(const F& x) { return x; }
};

template <>
struct FieldOps<Rational> {
    static int sign(const Rational& x) { return x.sign(); }
    static Rational from_radical(const RadicalSum& x) { return x.as_rational(); }
    static RadicalSum to_radical(const Rational& x) { return RadicalSum(x); }
};

template <>
struct FieldOps<double> {
    static constexpr double eps = 1e-9;
    static int sign(double x) { return x > eps ? 1 : (x < -eps ? -1 : 0); }
    static double from_radical(const RadicalSum& x) { return x.to_double(); }
    static RadicalSum to_radical(double x) { return RadicalSum(Rational(x)); }
};

// A linear feasibility system: equality rows over named nonnegative variables.
struct FeasibilityProblem {
    struct Row {
        std::string name;
        std::vector<RadicalSum> coeffs;  // length n_vars
        RadicalSum rhs;
    };

    std::size_t n_vars = 0;
    std::vector<std::string> var_names;
    std::vector<Row> rows;

    void add_row(std::string name, std::vector<RadicalSum> coeffs, RadicalSum rhs) {
        if (coeffs.size() != n_vars) throw std::invalid_argument("row length mismatch");
        rows.push_back({std::move(name), std::move(coeffs), std::move(rhs)});
    }

    // Radicand of the single quadratic field containing all data, 1 when the
    // data is rational, nullopt when no single field fits.
    std::optional<Int> quadratic_radicand() const {
        Int rad = 1;
        for (const auto& row : rows) {
            auto fold = [&](const RadicalSum& x) -> bool {
                auto r = x.quadratic_radicand();
                if (!r) return false;
                if (*r != 1) {
                    if (rad != 1 && rad != *r) return false;
                    rad = *r;
                }
                return true;
            };
            for (const auto& c : row.coeffs)
                if (!fold(c)) return std::nullopt;
            if (!fold(row.rhs)) return std::nullopt;
        }
        return rad;
    }

    // Plain-text serialization: one row per line, coefficients then "= rhs".
    std::string to_text() const {
        std::string out = "vars:";
        for (const auto& v : var_names) out += " " + v;
        out += "\n";
        for (const auto& row : rows) {
            out += row.name + ":";
            for (const auto& c : row.coeffs) out += " " + c.str();
            out += " = " + row.rhs.str() + "\n";
        }
        return out;
    }
};

enum class Feasibility { Feasible, Infeasible };

struct FeasibilityResult {
    Feasibility status = Feasibility::Infeasible;
    std::vector<RadicalSum> witness;  // x with Ax = b, x >= 0 (if feasible)
    std::vector<RadicalSum> farkas;   // y with y^T A <= 0, y^T b > 0 (if infeasible)
    bool exact = true;                // false for the epsilon-tolerance double path
    bool verified = false;            // certificate re-checked by substitution

    bool feasible() const { return status == Feasibility::Feasible; }
};

namespace detail {

template <class F>
struct SimplexTableau {
    // Phase-1 tableau: rows 0..m-1 are constraints (columns: n structural,
    // m artificial, rhs), row m is the phase-1 objective.
    std::size_t m, n;
    std::vector<std::vector<F>> t;
    std::vector<std::size_t> basis;  // basis[i] = column basic in row i

    SimplexTableau(const FeasibilityProblem& p) : m(p.rows.size()), n(p.n_vars) {
        t.assign(m + 1, std::vector<F>(n + m + 1, F(0)));
        for (std::size_t i = 0; i < m; ++i) {
            F rhs = FieldOps<F>::from_radical(p.rows[i].rhs);
            bool flip = FieldOps<F>::sign(rhs) < 0;
            for (std::size_t j = 0; j < n; ++j) {
                F c = FieldOps<F>::from_radical(p.rows[i].coeffs[j]);
                t[i][j] = flip ? F(0) - c : c;
            }
            t[i][n + i] = F(1);
            t[i][n + m] = flip ? F(0) - rhs : rhs;
        }
        // Objective: minimize sum of artificials; expressed in nonbasic terms.
        for (std::size_t j = 0; j <= n + m; ++j) {
            F acc(0);
            for (std::size_t i = 0; i < m; ++i) acc += t[i][j];
            if (j < n || j == n + m) t[m][j] = F(0) - acc;
        }
        basis.resize(m);
        for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;
    }

    void pivot(std::size_t row, std::size_t col) {
        F inv = F(1) / t[row][col];
        for (auto& v : t[row]) v = v * inv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == row) continue;
            F factor = t[i][col];
            if (FieldOps<F>::sign(factor) == 0) continue;
            for (std::size_t j = 0; j <= n + m; ++j) t[i][j] = t[i][j] - factor * t[row][j];
        }
        basis[row] = col;
    }

    // Bland's rule: entering = lowest-index column with negative reduced
    // cost, leaving = lowest-index basic variable among the ratio-test ties.
    void run() {
        for (;;) {
            std::size_t enter = n + m;
            for (std::size_t j = 0; j < n + m; ++j)
                if (FieldOps<F>::sign(t[m][j]) < 0) { enter = j; break; }
            if (enter == n + m) return;  // optimal
            std::size_t leave = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (FieldOps<F>::sign(t[i][enter]) <= 0) continue;
                if (leave == m) { leave = i; continue; }
                F lhs = t[i][n + m] * t[leave][enter];
                F rhs = t[leave][n + m] * t[i][enter];
                int cmp = FieldOps<F>::sign(lhs - rhs);
                if (cmp < 0 || (cmp == 0 && basis[i] < basis[leave])) leave = i;
            }
            if (leave == m)
                throw std::logic_error("phase-1 simplex cannot be unbounded");
            pivot(leave, enter);
        }
    }
};

}  // namespace detail

// Core solve over a fixed field F.
template <class F>
FeasibilityResult lp_feasible_in(const FeasibilityProblem& p) {
    detail::SimplexTableau<F> tab(p);
    tab.run();
    const std::size_t m = tab.m, n = tab.n;

    FeasibilityResult res;
    res.exact = !std::is_same_v<F, double>;
    // Phase-1 optimum: -t[m][rhs] equals the residual sum of artificials.
    F opt = F(0) - tab.t[m][n + m];
    if (FieldOps<F>::sign(opt) == 0) {
        res.status = Feasibility::Feasible;
        std::vector<F> x(n, F(0));
        for (std::size_t i = 0; i < m; ++i)
            if (tab.basis[i] < n) x[tab.basis[i]] = tab.t[i][n + m];
        if constexpr (!std::is_same_v<F, double>) {
            // Re-verify: Ax = b exactly and x >= 0.
            for (std::size_t i = 0; i < m; ++i) {
                F acc(0);
                for (std::size_t j = 0; j < n; ++j)
                    acc += FieldOps<F>::from_radical(p.rows[i].coeffs[j]) * x[j];
                if (FieldOps<F>::sign(acc - FieldOps<F>::from_radical(p.rows[i].rhs)) != 0)
                    throw std::logic_error("feasibility witness failed re-substitution");
            }
            for (const auto& v : x)
                if (FieldOps<F>::sign(v) < 0)
                    throw std::logic_error("feasibility witness has a negative entry");
            res.verified = true;
        }
        res.witness.reserve(n);
        for (const auto& v : x) res.witness.push_back(FieldOps<F>::to_radical(v));
        return res;
    }

    res.status = Feasibility::Infeasible;
    // Farkas vector from the phase-1 duals: y_i = 1 - reduced_cost(s_i),
    // with a sign flip for rows whose rhs was negated in the tableau.
    std::vector<F> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        F yi = F(1) - tab.t[m][n + i];
        bool flipped = FieldOps<F>::sign(FieldOps<F>::from_radical(p.rows[i].rhs)) < 0;
        y[i] = flipped ? F(0) - yi : yi;
    }
    if constexpr (!std::is_same_v<F, double>) {
        // Re-verify: y^T A <= 0 componentwise, y^T b > 0.
        for (std::size_t j = 0; j < n; ++j) {
            F acc(0);
            for (std::size_t i = 0; i < m; ++i)
                acc += y[i] * FieldOps<F>::from_radical(p.rows[i].coeffs[j]);
            if (FieldOps<F>::sign(acc) > 0)
                throw std::logic_error("Farkas certificate failed y^T A <= 0");
        }
        F yb(0);
        for (std::size_t i = 0; i < m; ++i)
            yb += y[i] * FieldOps<F>::from_radical(p.rows[i].rhs);
        if (FieldOps<F>::sign(yb) <= 0)
            throw std::logic_error("Farkas certificate failed y^T b > 0");
        res.verified = true;
    }
    res.farkas.reserve(m);
    for (const auto& v : y) res.farkas.push_back(FieldOps<F>::to_radical(v));
    return res;
}

// Dispatch on the arithmetic the problem data lives in: rationals, a single
// quadratic field, or (as a labeled fallback) floating point.
inline FeasibilityResult lp_feasible(const FeasibilityProblem& p) {
    auto rad = p.quadratic_radicand();
    if (rad && *rad == 1) return lp_feasible_in<Rational>(p);
    if (rad) return lp_feasible_in<RadicalSum>(p);
    return lp_feasible_in<double>(p);
}

}  // namespace qnet
