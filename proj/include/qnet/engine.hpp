// engine.hpp
// Exact computation of cycle-network outcome distributions by transfer-matrix
// contraction: the amplitude of an outcome tuple is the trace of an ordered
// product of N small matrices, one per party, with the source Schmidt weights
// folded into the rows. Cost per outcome is O(N d^3); outcomes are independent
// so full enumeration is data-parallel (OpenMP in float mode).

#pragma once

#include "qnet/distribution.hpp"

namespace qnet {

// Transfer matrices for party k: T_a[i,j] = lambda^{(k-1)}_i * C_a[i,j],
// where lambda^{(k-1)} are the weights of the source on the party's left leg
// and C_a is the eigenstate coefficient matrix for output a.
template <class S>
std::vector<std::vector<Mat<S>>> transfer_matrices(const BasicCycleNetwork<S>& net) {
    std::size_t n = net.n_parties(), d = net.dim();
    std::vector<std::vector<Mat<S>>> T(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& left = net.sources[(k + n - 1) % n];
        const auto& basis = net.measurements[k];
        T[k].reserve(basis.n_outcomes());
        for (const auto& C : basis.states) {
            Mat<S> t(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) t(i, j) = left.lambda[i] * C(i, j);
            T[k].push_back(std::move(t));
        }
    }
    return T;
}

// Completeness of each party's transfer set: sum_a T_a^T T_a = I (the source
// weights are normalized) and sum_a T_a T_a^T = d * diag(lambda_i^2).
template <class S>
double max_completeness_deviation(const BasicCycleNetwork<S>& net) {
    auto T = transfer_matrices(net);
    std::size_t n = net.n_parties(), d = net.dim();
    double worst = 0;
    for (std::size_t k = 0; k < n; ++k) {
        Mat<S> right(d, d), left(d, d);
        for (const auto& t : T[k]) {
            auto tt = t.transposed();
            right = right + tt * t;
            left = left + t * tt;
        }
        const auto& lam = net.sources[(k + n - 1) % n].lambda;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                worst = std::max(worst, detail::deviation(right(i, j), i == j ? 1.0 : 0.0));
                S want(0);
                if (i == j) want = S(static_cast<long long>(d)) * lam[i] * lam[i];
                worst = std::max(worst, detail::deviation(left(i, j) - want, 0.0));
            }
    }
    return worst;
}

namespace detail {

template <class S>
S amplitude_from_transfers(const std::vector<std::vector<Mat<S>>>& T,
                           std::span<const int> outcome) {
    Mat<S> prod = T[0][static_cast<std::size_t>(outcome[0])];
    for (std::size_t k = 1; k < T.size(); ++k)
        prod = prod * T[k][static_cast<std::size_t>(outcome[k])];
    return prod.trace();
}

}  // namespace detail

// Inner-product amplitude of one outcome tuple (probability is its square).
template <class S>
S amplitude(const BasicCycleNetwork<S>& net, std::span<const int> outcome) {
    if (outcome.size() != net.n_parties())
        throw std::invalid_argument("outcome arity does not match network");
    for (std::size_t k = 0; k < outcome.size(); ++k)
        if (outcome[k] < 0 || static_cast<std::size_t>(outcome[k]) >= net.measurements[k].n_outcomes())
            throw std::invalid_argument("outcome label out of range for party " + std::to_string(k));
    auto T = transfer_matrices(net);
    return detail::amplitude_from_transfers(T, outcome);
}

template <class S>
S amplitude(const BasicCycleNetwork<S>& net, std::initializer_list<int> outcome) {
    return amplitude(net, std::span<const int>(outcome.begin(), outcome.size()));
}

inline std::size_t outcome_count(std::size_t n_parties, std::size_t dim) {
    std::size_t total = 1, per = dim * dim;
    for (std::size_t k = 0; k < n_parties; ++k) {
        if (total > std::numeric_limits<std::size_t>::max() / per)
            return std::numeric_limits<std::size_t>::max();
        total *= per;
    }
    return total;
}

// Streams (outcome labels, probability) pairs in lexicographic order without
// materializing the full table.
template <class S, class F>
void for_each_outcome(const BasicCycleNetwork<S>& net, F&& f) {
    auto T = transfer_matrices(net);
    std::size_t n = net.n_parties();
    std::vector<int> outcome(n, 0);
    std::size_t total = outcome_count(n, net.dim());
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = n; k-- > 0;) {
            outcome[k] = static_cast<int>(rest % (net.dim() * net.dim()));
            rest /= net.dim() * net.dim();
        }
        S a = detail::amplitude_from_transfers(T, outcome);
        f(std::span<const int>(outcome), a * a);
    }
}

// Full outcome distribution. Serial reference path; the OpenMP kernel below
// is checked against it in the test suite.
template <class S>
BasicDistribution<S> cycle_distribution_serial(const BasicCycleNetwork<S>& net,
                                               std::size_t cap = 100'000'000) {
    std::size_t total = outcome_count(net.n_parties(), net.dim());
    if (total > cap)
        throw ResourceLimitError("outcome table of " + std::to_string(total) +
                                 " entries exceeds cap " + std::to_string(cap));
    BasicDistribution<S> dist(net.party_labels());
    for_each_outcome(net, [&](std::span<const int> outcome, S p) {
        dist[dist.index_of(outcome)] = std::move(p);
    });
    dist.validate(1e-10);
    return dist;
}

// OpenMP-parallel kernel over the flat outcome index (float mode).
inline Distribution cycle_distribution_parallel(const BasicCycleNetwork<double>& net,
                                                std::size_t cap = 100'000'000) {
    std::size_t total = outcome_count(net.n_parties(), net.dim());
    if (total > cap)
        throw ResourceLimitError("outcome table of " + std::to_string(total) +
                                 " entries exceeds cap " + std::to_string(cap));
    Distribution dist(net.party_labels());
    auto T = transfer_matrices(net);
    const std::size_t n = net.n_parties(), per = net.dim() * net.dim();
    const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel
    {
        std::vector<int> outcome(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
            std::size_t rest = static_cast<std::size_t>(idx);
            for (std::size_t k = n; k-- > 0;) {
                outcome[k] = static_cast<int>(rest % per);
                rest /= per;
            }
            double a = detail::amplitude_from_transfers(T, std::span<const int>(outcome));
            dist[static_cast<std::size_t>(idx)] = a * a;
        }
    }
    dist.validate(1e-10);
    return dist;
}

// Dispatch: exact scalars contract serially, floats use the parallel kernel.
template <class S>
BasicDistribution<S> cycle_distribution(const BasicCycleNetwork<S>& net,
                                        std::size_t cap = 100'000'000) {
    if constexpr (std::is_same_v<S, double>) {
        return cycle_distribution_parallel(net, cap);
    } else {
        return cycle_distribution_serial(net, cap);
    }
}

}  // namespace qnet
