// distribution.hpp
// Dense outcome distributions over label tuples, plus marginals, coarse
// graining, white-noise mixing and total-variation distance. Outcomes are
// enumerated lexicographically with party 0 most significant; that order is
// part of the output contract (reproducible CSV).

#pragma once

#include "qnet/core.hpp"

#include <cstdint>
#include <functional>
#include <numeric>
#include <span>

namespace qnet {

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Probabilities below this are treated as structural zeros in float-mode
// support analysis; raw values are kept in the table.
inline constexpr double kSupportEpsilon = 1e-14;

inline bool is_support_zero(double p) { return std::abs(p) < kSupportEpsilon; }
inline bool is_support_zero(const RadicalSum& p) { return p.is_zero(); }
inline bool is_support_zero(const Rational& p) { return p == 0; }

template <class S>
class BasicDistribution {
public:
    BasicDistribution() = default;
    explicit BasicDistribution(std::vector<PartyLabels> parties)
        : parties_(std::move(parties)) {
        std::size_t total = 1;
        for (const auto& p : parties_) total *= p.count();
        p_.assign(total, S(0));
    }

    std::size_t arity() const { return parties_.size(); }
    std::size_t size() const { return p_.size(); }
    const std::vector<PartyLabels>& parties() const { return parties_; }

    S& operator[](std::size_t idx) { return p_[idx]; }
    const S& operator[](std::size_t idx) const { return p_[idx]; }

    std::size_t index_of(std::span<const int> labels) const {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < parties_.size(); ++k)
            idx = idx * parties_[k].count() + static_cast<std::size_t>(labels[k]);
        return idx;
    }

    void decode(std::size_t idx, std::vector<int>& labels) const {
        labels.resize(parties_.size());
        for (std::size_t k = parties_.size(); k-- > 0;) {
            std::size_t n = parties_[k].count();
            labels[k] = static_cast<int>(idx % n);
            idx /= n;
        }
    }

    const S& prob(std::span<const int> labels) const { return p_[index_of(labels)]; }
    const S& prob(std::initializer_list<int> labels) const {
        return prob(std::span<const int>(labels.begin(), labels.size()));
    }

    S total() const { return std::accumulate(p_.begin(), p_.end(), S(0)); }

    // Nonnegativity (with float slack) and normalization. Float-mode entries
    // in [-1e-12, 0) are clamped to zero.
    void validate(double sum_tol = 1e-10) {
        for (auto& p : p_) {
            if constexpr (std::is_same_v<S, double>) {
                if (p < 0) {
                    if (p < -1e-12) throw std::domain_error("negative probability in distribution");
                    p = 0;
                }
            } else {
                if (sign_of_scalar(p) < 0)
                    throw std::domain_error("negative probability in distribution");
            }
        }
        if (detail::deviation(total(), 1.0) > sum_tol)
            throw std::domain_error("distribution does not sum to 1");
    }

    bool same_outcome_space(const BasicDistribution& o) const { return parties_ == o.parties_; }

private:
    std::vector<PartyLabels> parties_;
    std::vector<S> p_;
};

using Distribution = BasicDistribution<double>;
using ExactDistribution = BasicDistribution<RadicalSum>;
using RationalDistribution = BasicDistribution<Rational>;

// ---------------------------------------------------------------------------
// Conversions

inline Distribution to_double(const ExactDistribution& d) {
    Distribution out(d.parties());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].to_double();
    return out;
}

inline Distribution to_double(const RationalDistribution& d) {
    Distribution out(d.parties());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = to_double(d[i]);
    return out;
}

inline Distribution to_double(const Distribution& d) { return d; }

// Throws when any probability is irrational.
inline RationalDistribution as_rational(const ExactDistribution& d) {
    RationalDistribution out(d.parties());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i].as_rational();
    return out;
}

// ---------------------------------------------------------------------------
// Operations

// Sums out every party not listed in `parties` (ascending, no duplicates).
template <class S>
BasicDistribution<S> marginal(const BasicDistribution<S>& d, const std::vector<int>& parties) {
    if (parties.empty()) throw std::invalid_argument("marginal needs a nonempty party subset");
    std::vector<bool> keep(d.arity(), false);
    for (std::size_t i = 0; i < parties.size(); ++i) {
        int p = parties[i];
        if (p < 0 || p >= static_cast<int>(d.arity()))
            throw std::invalid_argument("marginal party index out of range");
        if (i > 0 && parties[i] <= parties[i - 1])
            throw std::invalid_argument("marginal party subset must be strictly ascending");
        keep[p] = true;
    }
    std::vector<PartyLabels> kept;
    for (std::size_t k = 0; k < d.arity(); ++k)
        if (keep[k]) kept.push_back(d.parties()[k]);
    BasicDistribution<S> out(std::move(kept));
    std::vector<int> full, sub;
    sub.reserve(parties.size());
    for (std::size_t idx = 0; idx < d.size(); ++idx) {
        d.decode(idx, full);
        sub.clear();
        for (std::size_t k = 0; k < d.arity(); ++k)
            if (keep[k]) sub.push_back(full[k]);
        out[out.index_of(sub)] += d[idx];
    }
    return out;
}

// Merges fine labels into their coarse classes (per-party coarse maps are
// carried inside the distribution's label metadata).
template <class S>
BasicDistribution<S> coarse_grain(const BasicDistribution<S>& d) {
    std::vector<PartyLabels> coarse;
    coarse.reserve(d.arity());
    for (const auto& p : d.parties()) {
        PartyLabels c;
        c.names = p.coarse_names;
        c.coarse_names = p.coarse_names;
        c.coarse_of.resize(p.coarse_names.size());
        std::iota(c.coarse_of.begin(), c.coarse_of.end(), 0);
        coarse.push_back(std::move(c));
    }
    BasicDistribution<S> out(std::move(coarse));
    std::vector<int> full, mapped(d.arity());
    for (std::size_t idx = 0; idx < d.size(); ++idx) {
        d.decode(idx, full);
        for (std::size_t k = 0; k < d.arity(); ++k)
            mapped[k] = d.parties()[k].coarse_of[full[k]];
        out[out.index_of(mapped)] += d[idx];
    }
    return out;
}

// Convenience overload matching the network the distribution came from.
template <class S, class T>
BasicDistribution<S> coarse_grain(const BasicDistribution<S>& d, const BasicCycleNetwork<T>& net) {
    if (net.party_labels() != d.parties())
        throw std::invalid_argument("network labels do not match distribution");
    return coarse_grain(d);
}

// (1-p) * d + p * uniform over the full outcome set.
template <class S>
BasicDistribution<S> white_noise_mix(const BasicDistribution<S>& d, const S& p) {
    if (sign_of_scalar(p) < 0 || sign_of_scalar(S(1) - p) < 0)
        throw std::domain_error("noise weight must satisfy 0 <= p <= 1");
    BasicDistribution<S> out(d.parties());
    S uniform = p / S(static_cast<long long>(d.size()));
    S keep = S(1) - p;
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = keep * d[i] + uniform;
    return out;
}

// Half the L1 distance.
template <class S>
S total_variation(const BasicDistribution<S>& a, const BasicDistribution<S>& b) {
    if (!a.same_outcome_space(b))
        throw std::invalid_argument("total variation needs identical outcome sets");
    S acc(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        S diff = a[i] - b[i];
        acc += sign_of_scalar(diff) < 0 ? S(0) - diff : diff;
    }
    return acc / S(2);
}

}  // namespace qnet
