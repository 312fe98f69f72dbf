// reference.hpp
// Naive dense contraction kept as the serial reference implementation: for
// each outcome the amplitude is accumulated by looping over all d^(2N)
// assignments of the 2N source subsystem indices, with no factorization at
// all. Deliberately independent of the transfer-matrix engine so the two can
// check (and benchmark against) each other.

#pragma once

#include "qnet/distribution.hpp"

namespace qnet {

template <class S>
S reference_amplitude(const BasicCycleNetwork<S>& net, std::span<const int> outcome) {
    const std::size_t n = net.n_parties(), d = net.dim();
    // Source k emits the ordered pair (x_k, y_k): x_k feeds party k's right
    // leg, y_k feeds party k+1's left leg. The source tensor is diagonal with
    // weight lambda_x on (x, x).
    std::vector<int> x(n, 0), y(n, 0);
    S sum(0);
    std::size_t total = 1;
    for (std::size_t k = 0; k < 2 * n; ++k) total *= d;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = static_cast<int>(rest % d);
            rest /= d;
            y[k] = static_cast<int>(rest % d);
            rest /= d;
        }
        S term(1);
        bool dead = false;
        for (std::size_t k = 0; k < n && !dead; ++k) {
            if (x[k] != y[k]) { dead = true; break; }  // diagonal source tensor
            term *= net.sources[k].lambda[static_cast<std::size_t>(x[k])];
        }
        if (dead) continue;
        for (std::size_t k = 0; k < n; ++k) {
            const auto& C = net.measurements[k].states[static_cast<std::size_t>(outcome[k])];
            int left = y[(k + n - 1) % n];
            int right = x[k];
            term *= C(static_cast<std::size_t>(left), static_cast<std::size_t>(right));
        }
        sum += term;
    }
    return sum;
}

template <class S>
BasicDistribution<S> reference_distribution(const BasicCycleNetwork<S>& net) {
    BasicDistribution<S> dist(net.party_labels());
    const std::size_t n = net.n_parties(), per = net.dim() * net.dim();
    std::vector<int> outcome(n);
    for (std::size_t idx = 0; idx < dist.size(); ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = n; k-- > 0;) {
            outcome[k] = static_cast<int>(rest % per);
            rest /= per;
        }
        S a = reference_amplitude(net, std::span<const int>(outcome));
        dist[idx] = a * a;
    }
    return dist;
}

}  // namespace qnet
