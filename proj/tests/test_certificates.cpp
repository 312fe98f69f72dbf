// Certificates: marginal feasibility systems, zero propagation, support
// checks, Finner slack, the threshold inequality and its root.

#include "doctest.h"

#include "qnet/certificates.hpp"
#include "qnet/engine.hpp"

#include <random>

using namespace qnet;

namespace {

const FeasibilityProblem::Row& find_row(const FeasibilityProblem& p, const std::string& name) {
    for (const auto& r : p.rows)
        if (r.name == name) return r;
    throw std::logic_error("no row named " + name);
}

Mat<RadicalSum> example_eta_up() {
    auto s = [](long long n, long long d) { return RadicalSum::signed_sqrt(Rational(n, d)); };
    return {{s(1, 3), s(1, 2), s(1, 6)},
            {s(1, 3), s(-1, 2), s(1, 6)},
            {s(1, 3), RadicalSum(0), s(-2, 3)}};
}

Mat<RadicalSum> example_eta_down() {
    auto s = [](long long n, long long d) { return RadicalSum::signed_sqrt(Rational(n, d)); };
    return {{s(2, 5), s(3, 5), RadicalSum(0)},
            {s(3, 5), s(-2, 5), RadicalSum(0)},
            {RadicalSum(0), RadicalSum(0), RadicalSum(1)}};
}

Mat<RadicalSum> identity3() {
    Mat<RadicalSum> m(3, 3);
    for (int i = 0; i < 3; ++i) m(i, i) = RadicalSum(1);
    return m;
}

}  // namespace

TEST_CASE("triangle marginal problem right-hand sides") {
    auto p = triangle_marginal_problem(Rational(1, 2), Rational(1, 2));
    CHECK(p.n_vars == 16);
    CHECK(p.rows.size() == 21);  // norm + 8 three-point + 12 single-position
    CHECK(find_row(p, "q(i=0,t=0)").rhs.as_rational() == Rational(1, 4));
    CHECK(find_row(p, "q(0,0,0)").rhs.as_rational() == Rational(1, 4));
    CHECK(find_row(p, "q(j=1,t=1)").rhs.as_rational() == Rational(1, 4));
    // d odd patterns vanish at the symmetric point.
    CHECK(find_row(p, "q(0,0,1)").rhs.is_zero());

    CHECK_THROWS_AS(triangle_marginal_problem(Rational(1), Rational(1, 2)), std::domain_error);
    CHECK_THROWS_AS(triangle_marginal_problem(Rational(1, 2), Rational(0)), std::domain_error);
}

TEST_CASE("triangle system: feasible at the symmetric point, infeasible past the threshold") {
    auto easy = lp_feasible(triangle_marginal_problem(Rational(1, 2), Rational(1, 2)));
    CHECK(easy.feasible());
    CHECK(easy.exact);
    CHECK(easy.verified);

    auto hard = lp_feasible(triangle_marginal_problem(Rational(1, 2), Rational(9, 10)));
    CHECK(!hard.feasible());
    CHECK(hard.exact);
    CHECK(hard.verified);

    // Symmetrization is without loss for feasibility.
    for (auto& u2 : {Rational(1, 2), Rational(7, 10), Rational(4, 5), Rational(9, 10),
                     Rational(99, 100)}) {
        auto full = lp_feasible(triangle_marginal_problem(Rational(1, 2), u2));
        auto sym = lp_feasible(triangle_marginal_problem_symmetrized(Rational(1, 2), u2));
        CHECK(full.feasible() == sym.feasible());
    }
}

TEST_CASE("LP status agrees with the exact inequality sign on a grid") {
    // 12-point slice of the acceptance grid (the full 50-point version runs
    // in the acceptance suite).
    for (int k = 1; k <= 12; ++k) {
        Rational u2 = Rational(1, 2) + Rational(k, 25);
        if (u2 >= 1) break;
        bool lp_infeasible = !lp_feasible(triangle_marginal_problem(Rational(1, 2), u2)).feasible();
        bool ineq_negative = ineq_lhs_exact(Rational(1, 2), u2).sign() < 0;
        CHECK(lp_infeasible == ineq_negative);
    }
}

TEST_CASE("qutrit marginal problem right-hand sides match the worked values") {
    auto p = qutrit_marginal_problem(example_eta_up(), example_eta_down());
    CHECK(p.n_vars == 18);
    CHECK(p.rows.size() == 21);
    CHECK(find_row(p, "q(0,0)").rhs.as_rational() == Rational(5, 12));
    CHECK(find_row(p, "q(1,0)").rhs.as_rational() == Rational(1, 60));
    CHECK(find_row(p, "q(2,0)").rhs.as_rational() == Rational(1, 15));
    CHECK(find_row(p, "q(1,1)").rhs.as_rational() == Rational(2, 5));
    CHECK(find_row(p, "q(2,1)").rhs.as_rational() == Rational(1, 10));
    CHECK(find_row(p, "q(0,1)").rhs.is_zero());
    CHECK(find_row(p, "q(0,2)").rhs.is_zero());
    CHECK(find_row(p, "q(i=0,t=1)").rhs.as_rational() == Rational(1, 6));
    CHECK(find_row(p, "q(i=0,t=2)").rhs.as_rational() == Rational(1, 4));
    CHECK(find_row(p, "q(i=2,t=2)").rhs.is_zero());
    CHECK(find_row(p, "q(j=0,t=1)").rhs.as_rational() == Rational(1, 5));
    CHECK(find_row(p, "q(j=0,t=2)").rhs.as_rational() == Rational(3, 10));
    CHECK(find_row(p, "q(j=2,t=1)").rhs.is_zero());

    // Identity eta: q(i,j) = (1/2) delta-pattern on the first two labels.
    auto pid = qutrit_marginal_problem(identity3(), identity3());
    CHECK(find_row(pid, "q(0,0)").rhs.as_rational() == Rational(1, 2));
    CHECK(find_row(pid, "q(1,1)").rhs.as_rational() == Rational(1, 2));
    CHECK(find_row(pid, "q(0,1)").rhs.is_zero());

    Mat<RadicalSum> bad = identity3();
    bad(0, 1) = RadicalSum(1);
    CHECK_THROWS_AS(qutrit_marginal_problem(bad, identity3()), std::invalid_argument);
}

TEST_CASE("qutrit counterexample is exactly infeasible; identity eta is feasible") {
    auto res = lp_feasible(qutrit_marginal_problem(example_eta_up(), example_eta_down()));
    CHECK(!res.feasible());
    CHECK(res.exact);
    CHECK(res.verified);

    auto id = lp_feasible(qutrit_marginal_problem(identity3(), identity3()));
    CHECK(id.feasible());
    CHECK(id.exact);
}

TEST_CASE("zero propagation reconstructs the forced qutrit solution") {
    auto forced = qutrit_forced_solution(example_eta_up(), example_eta_down());
    REQUIRE(forced.determined);
    Rational m1_expect[3][3] = {{Rational(1, 6), 0, 0},
                                {Rational(-1, 30), Rational(1, 5), 0},
                                {Rational(1, 15), Rational(1, 10), 0}};
    Rational m2_expect[3][3] = {{Rational(1, 4), 0, 0},
                                {Rational(1, 20), Rational(1, 5), 0},
                                {0, 0, 0}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(forced.m1(i, j).as_rational() == m1_expect[i][j]);
            CHECK(forced.m2(i, j).as_rational() == m2_expect[i][j]);
        }
    CHECK(forced.m1(1, 0).as_rational() == Rational(-1, 30));
    CHECK(forced.has_negative());

    // Propagation agrees with the LP wherever it determines the solution.
    auto id = qutrit_forced_solution(identity3(), identity3());
    if (id.determined) {
        CHECK(!id.has_negative());
        CHECK(lp_feasible(qutrit_marginal_problem(identity3(), identity3())).feasible());
    }

    auto rt = [](long long n, long long d) { return RadicalSum::signed_sqrt(Rational(n, d)); };
    std::vector<std::pair<Mat<RadicalSum>, Mat<RadicalSum>>> bases;
    // Signed permutation.
    bases.push_back({Mat<RadicalSum>{{RadicalSum(0), RadicalSum(1), RadicalSum(0)},
                                     {RadicalSum(1), RadicalSum(0), RadicalSum(0)},
                                     {RadicalSum(0), RadicalSum(0), RadicalSum(-1)}},
                     identity3()});
    // Planar rotation by 45 degrees in the first two coordinates.
    bases.push_back({Mat<RadicalSum>{{rt(1, 2), rt(1, 2), RadicalSum(0)},
                                     {rt(1, 2), rt(-1, 2), RadicalSum(0)},
                                     {RadicalSum(0), RadicalSum(0), RadicalSum(1)}},
                     Mat<RadicalSum>{{rt(1, 2), RadicalSum(0), rt(1, 2)},
                                     {RadicalSum(0), RadicalSum(1), RadicalSum(0)},
                                     {rt(1, 2), RadicalSum(0), rt(-1, 2)}}});
    for (const auto& [up, down] : bases) {
        auto f = qutrit_forced_solution(up, down);
        if (!f.determined) continue;
        bool lp_ok = lp_feasible(qutrit_marginal_problem(up, down)).feasible();
        CHECK(lp_ok == !f.has_negative());
    }
}

TEST_CASE("cycle xi system feasibility") {
    CHECK(lp_feasible(cycle_xi_problem(3, Rational(1, 2))).feasible());
    auto r39 = lp_feasible(cycle_xi_problem(3, Rational(9, 10)));
    CHECK(!r39.feasible());
    CHECK(r39.exact);
    auto r599 = lp_feasible(cycle_xi_problem(5, Rational(99, 100)));
    CHECK(!r599.feasible());
    CHECK(r599.exact);  // (uv)^5 is irrational here; quadratic-field simplex
    CHECK(lp_feasible(cycle_xi_problem(5, Rational(1, 2))).feasible());

    CHECK_THROWS_AS(cycle_xi_problem(4, Rational(1, 2)), std::domain_error);
    CHECK_THROWS_AS(cycle_xi_problem(1, Rational(1, 2)), std::domain_error);

    // N=3 flips exactly at the triangle threshold: feasible at 0.785,
    // infeasible at 0.7851.
    CHECK(lp_feasible(cycle_xi_problem(3, Rational(785, 1000))).feasible());
    CHECK(!lp_feasible(cycle_xi_problem(3, Rational(7851, 10000))).feasible());
}

TEST_CASE("asymptotic sign coefficient for odd cycles") {
    auto s3 = cycle_asymptotic_sign(3);
    CHECK(s3.a == 2);
    CHECK(!s3.beta_gt_gamma);  // N == 3 (mod 4): beta < gamma
    auto s5 = cycle_asymptotic_sign(5);
    CHECK(s5.a == -6);
    CHECK(s5.beta_gt_gamma);  // N == 1 (mod 4): beta > gamma
    CHECK(cycle_asymptotic_sign(7).a == 20);
    CHECK(cycle_asymptotic_sign(9).a == -70);
    CHECK_THROWS_AS(cycle_asymptotic_sign(4), std::domain_error);
}

TEST_CASE("support constraints hold for quantum distributions and flag violations") {
    auto tri = cycle_distribution(triangle_network<double>(Rational(4, 5)));
    auto rep = check_support_constraints(tri, SupportKind::QubitCycle);
    CHECK(rep.ok(1e-12));

    // Uniform distribution violates the parity rule with mass exactly 1/2.
    Distribution uniform(tri.parties());
    for (std::size_t i = 0; i < uniform.size(); ++i) uniform[i] = 1.0 / 64.0;
    auto bad = check_support_constraints(uniform, SupportKind::QubitCycle);
    CHECK(!bad.ok(1e-12));
    bool found = false;
    for (const auto& c : bad.checks)
        if (c.name == "P(even number of chi outputs)") {
            CHECK(c.observed == doctest::Approx(0.5).epsilon(1e-12));
            found = true;
        }
    CHECK(found);

    auto qt = cycle_distribution(qutrit_triangle_network<double>());
    CHECK(check_support_constraints(qt, SupportKind::QutritTriangle).ok(1e-12));

    auto five = cycle_distribution(qubit_cycle_network<double>(5, Rational(9, 10)));
    CHECK(check_support_constraints(five, SupportKind::QubitCycle).ok(1e-12));
}

TEST_CASE("Finner slack") {
    // Equality at (t0,t0,t0) for the qutrit triangle: 1/27 = sqrt((1/9)^3).
    auto qt = cycle_distribution(qutrit_triangle_network<RadicalSum>());
    auto slack = finner_slack_exact(qt);
    std::vector<int> t000{0, 0, 0};
    CHECK(slack[qt.index_of(t000)].is_zero());
    for (const auto& s : slack) CHECK(s.sign() >= 0);

    // Product distributions have nonnegative slack everywhere.
    PartyLabels coin{{"0", "1"}, {0, 1}, {"0", "1"}};
    Distribution prod({coin, coin, coin});
    double pa[2] = {0.3, 0.7}, pb[2] = {0.9, 0.1}, pc[2] = {0.4, 0.6};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                prod[prod.index_of(std::vector<int>{a, b, c})] = pa[a] * pb[b] * pc[c];
    for (double s : finner_slack(prod)) CHECK(s >= -1e-15);

    // GHZ-type correlations violate Finner at (0,0,0).
    Distribution ghz({coin, coin, coin});
    ghz[ghz.index_of(std::vector<int>{0, 0, 0})] = 0.5;
    ghz[ghz.index_of(std::vector<int>{1, 1, 1})] = 0.5;
    auto gs = finner_slack(ghz);
    CHECK(gs[ghz.index_of(std::vector<int>{0, 0, 0})] ==
          doctest::Approx(std::sqrt(0.125) - 0.5).epsilon(1e-12));
    CHECK(gs[ghz.index_of(std::vector<int>{0, 0, 0})] < 0);

    // Quantum cycle distributions respect Finner everywhere.
    for (auto& u2 : {Rational(1, 2), Rational(4, 5), Rational(9, 10)}) {
        auto d = cycle_distribution(triangle_network<double>(u2));
        for (double s : finner_slack(d)) CHECK(s >= -1e-12);
    }
}

TEST_CASE("threshold inequality values and sign structure") {
    double l0 = 1.0 / std::sqrt(2.0);
    CHECK(ineq_lhs(l0, std::sqrt(0.5)) > 0);
    CHECK(ineq_lhs(l0, std::sqrt(0.79)) < 0);
    CHECK_THROWS_AS(ineq_lhs(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(ineq_lhs(0.5, 1.0), std::domain_error);

    // At lambda0^2 = 1/2 the expression reduces to v^3 (3v - 2u^3) / 4;
    // check the transcription exactly on a few rational points.
    for (auto& u2 : {Rational(1, 2), Rational(3, 5), Rational(4, 5), Rational(9, 10)}) {
        RadicalSum v = RadicalSum::sqrt_of(1 - u2), u = RadicalSum::sqrt_of(u2);
        RadicalSum reduced =
            v * v * v * (RadicalSum(3) * v - RadicalSum(2) * u * u * u) / RadicalSum(4);
        CHECK(ineq_lhs_exact(Rational(1, 2), u2) == reduced);
    }

    // The factored evaluation used by ineq_lhs agrees with the expanded
    // sum-of-squares transcription, exactly, across general parameters.
    std::mt19937_64 rng{99};
    std::uniform_int_distribution<int> num(1, 19);
    for (int trial = 0; trial < 25; ++trial) {
        Rational l02(num(rng), 20), u2(num(rng), 20);
        RadicalSum v = RadicalSum::sqrt_of(1 - u2), u = RadicalSum::sqrt_of(u2);
        RadicalSum l03 = RadicalSum(l02) * RadicalSum::sqrt_of(l02);
        RadicalSum l13 = RadicalSum(1 - l02) * RadicalSum::sqrt_of(1 - l02);
        RadicalSum factored = RadicalSum(2) * v * v * v *
                              (l03 * l03 * v * v * v +
                               l13 * l13 * v * (RadicalSum(3) - RadicalSum(1 - u2)) -
                               RadicalSum(2) * l03 * l13 * u * u * u);
        CHECK(ineq_lhs_exact(l02, u2) == factored);
        double d = ineq_lhs(std::sqrt(qnet::to_double(Rational(l02))),
                            std::sqrt(qnet::to_double(Rational(u2))));
        CHECK(d == doctest::Approx(ineq_lhs_exact(l02, u2).to_double()).epsilon(1e-9));
    }

    // Exact zero of the inequality at lambda0^2 = u^2 = 2/3.
    CHECK(ineq_lhs_exact(Rational(2, 3), Rational(2, 3)).is_zero());
}

TEST_CASE("u_threshold anchors and stability") {
    auto root_half = u_threshold(1.0 / std::sqrt(2.0));
    REQUIRE(root_half.has_value());
    double u2 = *root_half * *root_half;
    CHECK(std::abs(u2 - 0.785) < 1e-3);
    // The threshold at lambda0^2 = 1/2 is the real root of 4x^3 + 9x - 9.
    CHECK(std::abs(4 * u2 * u2 * u2 + 9 * u2 - 9) < 1e-10);

    auto root_23 = u_threshold(std::sqrt(2.0 / 3.0));
    REQUIRE(root_23.has_value());
    CHECK(std::abs(*root_23 * *root_23 - 2.0 / 3.0) < 1e-6);

    // Refining the tolerance does not move the root.
    auto coarse = u_threshold(1.0 / std::sqrt(2.0), 1e-9);
    auto fine = u_threshold(1.0 / std::sqrt(2.0), 1e-12);
    REQUIRE(coarse.has_value());
    REQUIRE(fine.has_value());
    CHECK(std::abs(*coarse - *fine) < 1e-9);

    // Weakly entangled sources still have a threshold, crammed against
    // u = 1 (stable evaluation resolves it).
    auto root_weak = u_threshold(std::sqrt(0.05));
    REQUIRE(root_weak.has_value());
    CHECK(std::abs(*root_weak * *root_weak - 0.999935) < 1e-5);

    // At the extreme ends the crossing moves closer to 1 than doubles can
    // represent: no threshold on the bracket.
    CHECK(!u_threshold(1e-3).has_value());
    CHECK(!u_threshold(std::sqrt(1.0 - 1e-12)).has_value());
}
