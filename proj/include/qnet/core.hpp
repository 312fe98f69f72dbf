// core.hpp
// Domain types for cycle networks: Schmidt-decomposed bipartite sources,
// joint measurement bases with coarse-grained output labels, and the cycle
// topology tying them together. Constructors cover the qubit basis family,
// the reference qutrit basis, and general orthogonal qutrit bases.
//
// Everything is templated on the scalar: double for numeric work, RadicalSum
// for exact work (all coefficients used here are square roots of rationals).
// All types are immutable value types once built; sharing across threads
// needs no synchronization.

#pragma once

#include "qnet/matrix.hpp"
#include "qnet/radical.hpp"
#include "qnet/rational.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qnet {

// Output-label metadata for one party: fine label names, and the coarse class
// each fine label belongs to.
struct PartyLabels {
    std::vector<std::string> names;
    std::vector<int> coarse_of;
    std::vector<std::string> coarse_names;

    std::size_t count() const { return names.size(); }
    bool operator==(const PartyLabels&) const = default;
};

namespace detail {

template <class S>
struct scalar_from {
    static S rational(const Rational& q) { return S(q); }
    static S sqrt_rational(const Rational& q) { return S::sqrt_of(q); }
    static S signed_sqrt(const Rational& q) { return S::signed_sqrt(q); }
    static constexpr bool exact = true;
};

template <>
struct scalar_from<double> {
    static double rational(const Rational& q) { return to_double(q); }
    static double sqrt_rational(const Rational& q) { return std::sqrt(to_double(q)); }
    static double signed_sqrt(const Rational& q) {
        double v = std::sqrt(std::abs(to_double(q)));
        return q < 0 ? -v : v;
    }
    static constexpr bool exact = false;
};

inline double deviation(double value, double expect) { return std::abs(value - expect); }
inline double deviation(const RadicalSum& value, double expect) {
    return std::abs(value.to_double() - expect);
}
inline double deviation(const Rational& value, double expect) {
    return std::abs(to_double(value) - expect);
}

}  // namespace detail

inline int sign_of_scalar(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
inline int sign_of_scalar(const RadicalSum& x) { return x.sign(); }
inline int sign_of_scalar(const Rational& x) { return x.sign(); }

// ---------------------------------------------------------------------------
// Schmidt states

template <class S>
struct BasicSchmidtState {
    std::vector<S> lambda;  // strictly positive, sum of squares = 1

    std::size_t dim() const { return lambda.size(); }
};

template <class S>
BasicSchmidtState<S> make_schmidt_state(std::vector<S> lambda) {
    if (lambda.size() < 2) throw std::domain_error("Schmidt state needs dimension >= 2");
    S norm(0);
    for (const auto& l : lambda) {
        if (!(sign_of_scalar(l) > 0))
            throw std::domain_error("Schmidt coefficients must be strictly positive");
        norm += l * l;
    }
    if (detail::deviation(norm, 1.0) > 1e-12)
        throw std::domain_error("Schmidt coefficients are not normalized");
    return {std::move(lambda)};
}

// State with prescribed squared coefficients (exact construction path).
template <class S>
BasicSchmidtState<S> schmidt_from_squares(const std::vector<Rational>& squares) {
    std::vector<S> lambda;
    lambda.reserve(squares.size());
    Rational total(0);
    for (const auto& q : squares) {
        if (q <= 0) throw std::domain_error("squared Schmidt coefficients must be positive");
        total += q;
        lambda.push_back(detail::scalar_from<S>::sqrt_rational(q));
    }
    if (squares.size() < 2) throw std::domain_error("Schmidt state needs dimension >= 2");
    if (total != 1) throw std::domain_error("squared Schmidt coefficients must sum to 1");
    return {std::move(lambda)};
}

template <class S = double>
BasicSchmidtState<S> maximally_entangled(int d) {
    if (d < 2) throw std::domain_error("maximally entangled state needs dimension >= 2");
    return schmidt_from_squares<S>(std::vector<Rational>(d, Rational(1, d)));
}

// ---------------------------------------------------------------------------
// Joint measurement bases

// An orthonormal basis of d^2 two-qudit eigenstates. Eigenstate a is stored
// as the d x d real matrix C with |phi_a> = sum_ij C[i,j] |ij>, where i is
// the left leg and j the right leg.
template <class S>
struct BasicJointBasis {
    std::size_t dim = 0;
    std::string kind;  // "qubit" | "qutrit" | "custom"
    std::vector<Mat<S>> states;
    PartyLabels labels;

    std::size_t n_outcomes() const { return states.size(); }

    int label_index(const std::string& name) const {
        for (std::size_t i = 0; i < labels.names.size(); ++i)
            if (labels.names[i] == name) return static_cast<int>(i);
        throw std::invalid_argument("unknown output label: " + name);
    }
};

// Gram matrix of the vectorized eigenstates must be the identity.
template <class S>
double max_gram_deviation(const BasicJointBasis<S>& basis) {
    double worst = 0;
    for (std::size_t a = 0; a < basis.states.size(); ++a)
        for (std::size_t b = a; b < basis.states.size(); ++b) {
            S g(0);
            for (std::size_t i = 0; i < basis.dim; ++i)
                for (std::size_t j = 0; j < basis.dim; ++j)
                    g += basis.states[a](i, j) * basis.states[b](i, j);
            worst = std::max(worst, detail::deviation(g, a == b ? 1.0 : 0.0));
        }
    return worst;
}

template <class S>
BasicJointBasis<S> make_joint_basis(std::size_t dim, std::string kind, std::vector<Mat<S>> states,
                                    PartyLabels labels, double tol = 1e-12) {
    BasicJointBasis<S> basis{dim, std::move(kind), std::move(states), std::move(labels)};
    if (basis.states.size() != dim * dim)
        throw std::invalid_argument("joint basis must have dim^2 eigenstates");
    if (basis.labels.names.size() != basis.states.size() ||
        basis.labels.coarse_of.size() != basis.states.size())
        throw std::invalid_argument("joint basis labels do not cover all eigenstates");
    for (int c : basis.labels.coarse_of)
        if (c < 0 || c >= static_cast<int>(basis.labels.coarse_names.size()))
            throw std::invalid_argument("coarse label map out of range");
    if (double dev = max_gram_deviation(basis); dev > tol)
        throw std::invalid_argument("eigenstates are not orthonormal, max Gram deviation " +
                                    std::to_string(dev));
    return basis;
}

// Qubit basis {up=|01>, down=|10>, chi0=u|00>+v|11>, chi1=v|00>-u|11>} with
// v = +sqrt(1-u^2). The chi0/chi1 sign convention is fixed here once and for
// all; downstream formulas assume it.
template <class S>
BasicJointBasis<S> qubit_basis_from_u2(const Rational& u2) {
    if (!(u2 > 0 && u2 < 1)) throw std::domain_error("qubit basis needs 0 < u^2 < 1");
    S u = detail::scalar_from<S>::sqrt_rational(u2);
    S v = detail::scalar_from<S>::sqrt_rational(1 - u2);
    std::vector<Mat<S>> states(4, Mat<S>(2, 2));
    states[0](0, 1) = S(1);            // up
    states[1](1, 0) = S(1);            // down
    states[2](0, 0) = u;               // chi0
    states[2](1, 1) = v;
    states[3](0, 0) = v;               // chi1
    states[3](1, 1) = S(0) - u;
    PartyLabels labels{{"up", "down", "chi0", "chi1"}, {0, 1, 2, 2}, {"up", "down", "chi"}};
    return make_joint_basis<S>(2, "qubit", std::move(states), std::move(labels));
}

inline BasicJointBasis<double> qubit_basis(double u) {
    if (!(u > 0 && u < 1)) throw std::domain_error("qubit basis needs 0 < u < 1");
    double v = std::sqrt(1 - u * u);
    std::vector<Mat<double>> states(4, Mat<double>(2, 2));
    states[0](0, 1) = 1;
    states[1](1, 0) = 1;
    states[2](0, 0) = u;
    states[2](1, 1) = v;
    states[3](0, 0) = v;
    states[3](1, 1) = -u;
    PartyLabels labels{{"up", "down", "chi0", "chi1"}, {0, 1, 2, 2}, {"up", "down", "chi"}};
    return make_joint_basis<double>(2, "qubit", std::move(states), std::move(labels));
}

namespace detail {

template <class S>
double max_orthogonality_deviation(const Mat<S>& m) {
    double worst = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.rows(); ++j) {
            S g(0);
            for (std::size_t k = 0; k < m.cols(); ++k) g += m(i, k) * m(j, k);
            worst = std::max(worst, deviation(g, i == j ? 1.0 : 0.0));
        }
    return worst;
}

}  // namespace detail

// General qutrit basis: {|00>,|11>,|22>} plus two triples of entangled states
// whose coefficient rows are given by orthogonal matrices eta_up (spanning
// |01>,|02>,|12>) and eta_down (spanning |10>,|20>,|21>).
template <class S>
BasicJointBasis<S> qutrit_basis(const Mat<S>& eta_up, const Mat<S>& eta_down) {
    if (eta_up.rows() != 3 || eta_up.cols() != 3 || eta_down.rows() != 3 || eta_down.cols() != 3)
        throw std::invalid_argument("eta matrices must be 3x3");
    for (const Mat<S>* m : {&eta_up, &eta_down}) {
        if (double dev = detail::max_orthogonality_deviation(*m); dev > 1e-10)
            throw std::invalid_argument(
                "eta matrix is not orthogonal, max Gram deviation " + std::to_string(dev));
    }
    std::vector<Mat<S>> states(9, Mat<S>(3, 3));
    states[0](0, 0) = S(1);  // t0
    states[1](1, 1) = S(1);  // t1
    states[2](2, 2) = S(1);  // t2
    for (std::size_t i = 0; i < 3; ++i) {
        states[3 + i](0, 1) = eta_up(i, 0);  // chi_i_up
        states[3 + i](0, 2) = eta_up(i, 1);
        states[3 + i](1, 2) = eta_up(i, 2);
        states[6 + i](1, 0) = eta_down(i, 0);  // chi_i_down
        states[6 + i](2, 0) = eta_down(i, 1);
        states[6 + i](2, 1) = eta_down(i, 2);
    }
    PartyLabels labels{
        {"t0", "t1", "t2", "chi0u", "chi1u", "chi2u", "chi0d", "chi1d", "chi2d"},
        {0, 1, 2, 3, 3, 3, 4, 4, 4},
        {"t0", "t1", "t2", "chiu", "chid"}};
    return make_joint_basis<S>(3, "qutrit", std::move(states), std::move(labels));
}

// The fixed qutrit basis used by the Finner-equality counterexample.
template <class S = double>
BasicJointBasis<S> qutrit_example_basis() {
    using F = detail::scalar_from<S>;
    auto r = [](long long n, long long d) { return Rational(n, d); };
    Mat<S> eta_up{
        {F::signed_sqrt(r(1, 3)), F::signed_sqrt(r(1, 2)), F::signed_sqrt(r(1, 6))},
        {F::signed_sqrt(r(1, 3)), F::signed_sqrt(r(-1, 2)), F::signed_sqrt(r(1, 6))},
        {F::signed_sqrt(r(1, 3)), S(0), F::signed_sqrt(r(-2, 3))}};
    Mat<S> eta_down{
        {F::signed_sqrt(r(2, 5)), F::signed_sqrt(r(3, 5)), S(0)},
        {F::signed_sqrt(r(3, 5)), F::signed_sqrt(r(-2, 5)), S(0)},
        {S(0), S(0), S(1)}};
    return qutrit_basis<S>(eta_up, eta_down);
}

// ---------------------------------------------------------------------------
// Cycle networks

// N parties and N sources on a cycle. Source k sits between party k and party
// k+1 (mod N): its first subsystem is party k's right leg, its second is
// party k+1's left leg.
template <class S>
struct BasicCycleNetwork {
    std::vector<BasicSchmidtState<S>> sources;
    std::vector<BasicJointBasis<S>> measurements;

    std::size_t n_parties() const { return measurements.size(); }
    std::size_t dim() const { return measurements.empty() ? 0 : measurements[0].dim; }

    std::vector<PartyLabels> party_labels() const {
        std::vector<PartyLabels> out;
        out.reserve(measurements.size());
        for (const auto& m : measurements) out.push_back(m.labels);
        return out;
    }
};

template <class S>
BasicCycleNetwork<S> make_cycle_network(std::vector<BasicSchmidtState<S>> sources,
                                        std::vector<BasicJointBasis<S>> measurements) {
    if (measurements.size() < 3) throw std::domain_error("cycle network needs N >= 3 parties");
    if (sources.size() != measurements.size())
        throw std::invalid_argument("cycle network needs one source per party");
    std::size_t d = measurements[0].dim;
    for (const auto& m : measurements)
        if (m.dim != d) throw std::invalid_argument("inconsistent measurement dimensions");
    for (const auto& s : sources)
        if (s.dim() != d) throw std::invalid_argument("source dimension does not match measurements");
    return {std::move(sources), std::move(measurements)};
}

// Triangle with identical two-qubit sources (lambda0^2 = l02) and identical
// qubit measurements (parameter u^2 = u2).
template <class S = double>
BasicCycleNetwork<S> triangle_network(const Rational& u2, const Rational& l02 = Rational(1, 2)) {
    if (!(l02 > 0 && l02 < 1)) throw std::domain_error("triangle needs 0 < lambda0^2 < 1");
    auto src = schmidt_from_squares<S>({l02, 1 - l02});
    auto basis = qubit_basis_from_u2<S>(u2);
    return make_cycle_network<S>({src, src, src}, {basis, basis, basis});
}

inline BasicCycleNetwork<double> triangle_network_from_reals(double u, double lambda0) {
    if (!(lambda0 > 0 && lambda0 < 1)) throw std::domain_error("triangle needs 0 < lambda0 < 1");
    BasicSchmidtState<double> src{{lambda0, std::sqrt(1 - lambda0 * lambda0)}};
    auto basis = qubit_basis(u);
    return make_cycle_network<double>({src, src, src}, {basis, basis, basis});
}

// Odd or even N-cycle with maximally entangled qubit sources.
template <class S = double>
BasicCycleNetwork<S> qubit_cycle_network(int n, const Rational& u2) {
    if (n < 3) throw std::domain_error("cycle network needs N >= 3 parties");
    auto src = maximally_entangled<S>(2);
    auto basis = qubit_basis_from_u2<S>(u2);
    return make_cycle_network<S>(std::vector<BasicSchmidtState<S>>(n, src),
                                 std::vector<BasicJointBasis<S>>(n, basis));
}

// Qutrit triangle with the fixed example basis.
template <class S = double>
BasicCycleNetwork<S> qutrit_triangle_network() {
    auto src = maximally_entangled<S>(3);
    auto basis = qutrit_example_basis<S>();
    return make_cycle_network<S>({src, src, src}, {basis, basis, basis});
}

using SchmidtState = BasicSchmidtState<double>;
using JointBasis = BasicJointBasis<double>;
using CycleNetwork = BasicCycleNetwork<double>;
using ExactSchmidtState = BasicSchmidtState<RadicalSum>;
using ExactJointBasis = BasicJointBasis<RadicalSum>;
using ExactCycleNetwork = BasicCycleNetwork<RadicalSum>;

}  // namespace qnet
