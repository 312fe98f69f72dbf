// trilocal.hpp
// Classical hidden-variable models on cycle networks: finite per-source
// alphabets, per-party response tables (stochastic or deterministic), exact
// evaluation by full enumeration, seeded sampling, and purification of
// response randomness into the sources.
//
// Includes the concrete models for the triangle: the coarse skeleton forced
// by the support constraints, the exact model matching the quantum
// distribution at u^2 = 1/2, and the numerically solved model at the
// threshold measurement parameter.

#pragma once

#include "qnet/distribution.hpp"

#include <cstdint>
#include <numeric>
#include <optional>

namespace qnet {

template <class S>
struct BasicTrilocalModel {
    struct Source {
        std::vector<S> weights;  // sums to 1
        std::vector<std::string> value_names;
        std::size_t size() const { return weights.size(); }
    };
    using ResponseDist = std::vector<std::pair<int, S>>;  // (label, probability)

    // Source k sits between party k and k+1, matching the network layout:
    // party k responds to (left, right) = (source k-1, source k).
    std::vector<Source> sources;
    std::vector<std::vector<ResponseDist>> responses;  // [party][left * right_size + right]
    std::vector<PartyLabels> labels;

    std::size_t n_parties() const { return responses.size(); }

    const ResponseDist& respond(std::size_t party, int left, int right) const {
        std::size_t right_size = sources[party].size();
        return responses[party][static_cast<std::size_t>(left) * right_size +
                                static_cast<std::size_t>(right)];
    }

    void validate() const {
        std::size_t n = n_parties();
        if (sources.size() != n || labels.size() != n)
            throw std::invalid_argument("model component counts disagree");
        for (const auto& src : sources) {
            S total(0);
            for (const auto& w : src.weights) {
                if (sign_of_scalar(w) < 0) throw std::domain_error("negative source weight");
                total += w;
            }
            if (detail::deviation(total, 1.0) > 1e-12)
                throw std::domain_error("source weights must sum to 1");
        }
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t left_size = sources[(k + n - 1) % n].size();
            std::size_t right_size = sources[k].size();
            if (responses[k].size() != left_size * right_size)
                throw std::invalid_argument("response table size mismatch");
            for (const auto& dist : responses[k]) {
                S total(0);
                for (const auto& [label, p] : dist) {
                    if (label < 0 || label >= static_cast<int>(labels[k].count()))
                        throw std::invalid_argument("response label out of range");
                    if (sign_of_scalar(p) < 0) throw std::domain_error("negative response weight");
                    total += p;
                }
                if (detail::deviation(total, 1.0) > 1e-12)
                    throw std::domain_error("response distribution must sum to 1");
            }
        }
    }
};

using TrilocalModel = BasicTrilocalModel<double>;
using ExactTrilocalModel = BasicTrilocalModel<Rational>;

// Exact outcome distribution: sum over all hidden-value tuples of the source
// weight times the product of response probabilities.
template <class S>
BasicDistribution<S> evaluate(const BasicTrilocalModel<S>& model) {
    model.validate();
    const std::size_t n = model.n_parties();
    BasicDistribution<S> dist(model.labels);

    std::vector<int> hidden(n, 0);
    std::vector<int> outcome(n, 0);
    // Expands the per-party response product for one hidden tuple.
    auto expand = [&](auto&& self, std::size_t party, const S& weight) -> void {
        if (party == n) {
            dist[dist.index_of(outcome)] += weight;
            return;
        }
        int left = hidden[(party + n - 1) % n], right = hidden[party];
        for (const auto& [label, p] : model.respond(party, left, right)) {
            outcome[party] = label;
            self(self, party + 1, weight * p);
        }
    };

    for (;;) {
        S weight(1);
        for (std::size_t k = 0; k < n; ++k)
            weight *= model.sources[k].weights[static_cast<std::size_t>(hidden[k])];
        if (sign_of_scalar(weight) != 0) expand(expand, 0, weight);
        std::size_t k = 0;
        while (k < n && ++hidden[k] == static_cast<int>(model.sources[k].size())) {
            hidden[k] = 0;
            ++k;
        }
        if (k == n) break;
    }
    dist.validate(1e-10);
    return dist;
}

// ---------------------------------------------------------------------------
// Sampling

namespace detail {

// Explicit uniform-in-[0,1) so sample streams are reproducible bit for bit
// across platforms for a given seed.
struct SeededUniform {
    std::uint64_t state;
    explicit SeededUniform(std::uint64_t seed) : state(seed) {}
    double next() {
        // splitmix64 step
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

template <class S>
int pick(const std::vector<S>& weights, double roll) {
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += qnet::to_double(weights[i]);
        if (roll < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

}  // namespace detail

// n i.i.d. outcome tuples; each draw samples every source, then every
// response. Identical seeds give identical sample lists.
template <class S>
std::vector<std::vector<int>> sample(const BasicTrilocalModel<S>& model, std::size_t n,
                                     std::uint64_t seed) {
    if (n < 1) throw std::domain_error("sample count must be >= 1");
    model.validate();
    const std::size_t parties = model.n_parties();
    detail::SeededUniform rng(seed);
    std::vector<std::vector<int>> out;
    out.reserve(n);
    std::vector<int> hidden(parties);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t k = 0; k < parties; ++k)
            hidden[k] = detail::pick(model.sources[k].weights, rng.next());
        std::vector<int> outcome(parties);
        for (std::size_t k = 0; k < parties; ++k) {
            const auto& dist = model.respond(k, hidden[(k + parties - 1) % parties], hidden[k]);
            if (dist.size() == 1) {
                outcome[k] = dist[0].first;
            } else {
                double roll = rng.next(), acc = 0;
                outcome[k] = dist.back().first;
                for (const auto& [label, p] : dist) {
                    acc += qnet::to_double(p);
                    if (roll < acc) { outcome[k] = label; break; }
                }
            }
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

// Moves all response randomness into enlarged source alphabets, leaving
// deterministic responses; the outcome distribution is unchanged. Party k
// consumes the coin carried by its left source, so each coin is read by
// exactly one party.
inline ExactTrilocalModel purify(const ExactTrilocalModel& model) {
    model.validate();
    const std::size_t n = model.n_parties();
    // Coin modulus for party k = lcm of its response denominators.
    std::vector<Int> coins(n, 1);
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& dist : model.responses[k])
            for (const auto& [label, p] : dist)
                coins[k] = boost::multiprecision::lcm(coins[k], denominator(p));

    ExactTrilocalModel out;
    out.labels = model.labels;
    out.sources.resize(n);
    out.responses.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Source k carries the coin for party k+1.
        Int c = coins[(k + 1) % n];
        auto& src = out.sources[k];
        for (std::size_t v = 0; v < model.sources[k].size(); ++v)
            for (Int face = 0; face < c; ++face) {
                src.weights.push_back(model.sources[k].weights[v] / Rational(c));
                std::string base = model.sources[k].value_names.empty()
                                       ? std::to_string(v)
                                       : model.sources[k].value_names[v];
                src.value_names.push_back(base + "#" + face.str());
            }
    }
    for (std::size_t k = 0; k < n; ++k) {
        Int c = coins[k];  // carried by source k-1 (the left one)
        std::size_t left_old = model.sources[(k + n - 1) % n].size();
        std::size_t right_old = model.sources[k].size();
        Int right_c = coins[(k + 1) % n];
        std::size_t right_new = right_old * right_c.convert_to<std::size_t>();
        out.responses[k].resize(left_old * c.convert_to<std::size_t>() * right_new);
        for (std::size_t lv = 0; lv < left_old; ++lv)
            for (Int face = 0; face < c; ++face)
                for (std::size_t rv = 0; rv < right_old; ++rv)
                    for (Int rface = 0; rface < right_c; ++rface) {
                        const auto& dist = model.respond(k, static_cast<int>(lv),
                                                         static_cast<int>(rv));
                        // Inverse CDF at coin value face / c.
                        Rational cum(0);
                        int chosen = dist.back().first;
                        for (const auto& [label, p] : dist) {
                            cum += p;
                            if (Rational(face, c) < cum) { chosen = label; break; }
                        }
                        std::size_t li = lv * c.convert_to<std::size_t>() +
                                         face.convert_to<std::size_t>();
                        std::size_t ri = rv * right_c.convert_to<std::size_t>() +
                                         rface.convert_to<std::size_t>();
                        out.responses[k][li * right_new + ri] = {{chosen, Rational(1)}};
                    }
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// The coarse skeleton forced by the support constraints

// Any classical model reproducing the support of the qubit-cycle distribution
// must partition each hidden alphabet into two classes of weights
// (lambda0^2, lambda1^2) and answer through this table on the class bits.
struct PartitionSkeleton {
    Rational class0_weight;

    // Coarse outputs: 0 = up, 1 = down, 2 = chi.
    static int coarse_response(int left_class, int right_class) {
        if (left_class == 0 && right_class == 1) return 0;
        if (left_class == 1 && right_class == 0) return 1;
        return 2;
    }
};

inline PartitionSkeleton support_skeleton(const Rational& l02) {
    if (!(l02 > 0 && l02 < 1)) throw std::domain_error("need 0 < lambda0^2 < 1");
    return {l02};
}

// Skeleton as a runnable model over the coarse labels {up, down, chi}.
inline ExactTrilocalModel skeleton_coarse_model(const Rational& l02, std::size_t n_parties = 3) {
    auto skel = support_skeleton(l02);
    ExactTrilocalModel model;
    PartyLabels coarse{{"up", "down", "chi"}, {0, 1, 2}, {"up", "down", "chi"}};
    for (std::size_t k = 0; k < n_parties; ++k) {
        model.sources.push_back({{skel.class0_weight, 1 - skel.class0_weight}, {"c0", "c1"}});
        model.labels.push_back(coarse);
        std::vector<ExactTrilocalModel::ResponseDist> table(4);
        for (int l = 0; l < 2; ++l)
            for (int r = 0; r < 2; ++r)
                table[static_cast<std::size_t>(l) * 2 + r] = {
                    {PartitionSkeleton::coarse_response(l, r), Rational(1)}};
        model.responses.push_back(std::move(table));
    }
    model.validate();
    return model;
}

// Exact classical model for the triangle at u^2 = 1/2: the skeleton on fair
// class bits, with the chi sub-label chosen as the XOR of one extra fair bit
// per source. Each party's chi output is marginally a fair coin, while the
// XOR correlation reproduces the even-parity support of the quantum
// distribution exactly.
inline ExactTrilocalModel uniform_chi_model() {
    ExactTrilocalModel model;
    PartyLabels qubit{{"up", "down", "chi0", "chi1"}, {0, 1, 2, 2}, {"up", "down", "chi"}};
    // Hidden value = (class bit, chi bit), encoded as 2*t + s.
    for (std::size_t k = 0; k < 3; ++k) {
        model.sources.push_back(
            {{Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)},
             {"c0s0", "c0s1", "c1s0", "c1s1"}});
        model.labels.push_back(qubit);
        std::vector<ExactTrilocalModel::ResponseDist> table(16);
        for (int l = 0; l < 4; ++l)
            for (int r = 0; r < 4; ++r) {
                int coarse = PartitionSkeleton::coarse_response(l >> 1, r >> 1);
                int label = coarse < 2 ? coarse : 2 + ((l ^ r) & 1);
                table[static_cast<std::size_t>(l) * 4 + r] = {{label, Rational(1)}};
            }
        model.responses.push_back(std::move(table));
    }
    model.validate();
    return model;
}

// ---------------------------------------------------------------------------
// Model at the threshold measurement parameter

// Sub-strategy parameters: trit weights kappa for the class-0 branch, bit
// weights tau for the class-1 branch.
struct ThresholdModelParams {
    double u = 0;
    double kappa0 = 0, kappa1 = 0, kappa2 = 0;
    double tau0 = 0, tau1 = 0;
    double max_residual = 0;
};

namespace detail {

// Distribution over the chi sub-labels (i,j,k) produced by one sub-strategy
// with all three sources in the same class.
inline std::array<double, 8> substrategy_dist(const std::vector<double>& weights, bool class0) {
    std::array<double, 8> p{};
    const std::size_t m = weights.size();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c) {
                auto sub = [&](std::size_t l, std::size_t r) {
                    if (class0) return (l == 0 && r == 1) || (l == 1 && r == 0) ? 1 : 0;
                    return (l == 0 && r == 1) ? 0 : 1;
                };
                // Party order (A,B,C) sees (left,right) = (b-src, c-src),
                // (c-src, a-src), (a-src, b-src) in the cycle layout; the
                // labels below only need the triple, so name sources 0,1,2
                // with party k reading (k-1, k).
                int i = sub(a, b), j = sub(b, c), k = sub(c, a);
                p[static_cast<std::size_t>(i) * 4 + static_cast<std::size_t>(j) * 2 +
                  static_cast<std::size_t>(k)] += weights[a] * weights[b] * weights[c];
            }
    return p;
}

// Residuals of the marginal equations the two sub-strategies must satisfy.
inline std::vector<std::pair<std::string, double>> threshold_residuals(double u, double kappa0,
                                                                       double tau0) {
    double u2 = u * u, v2 = 1 - u2;
    double v = std::sqrt(v2);
    double kappa1 = v2 / (2 * kappa0), kappa2 = 1 - kappa0 - kappa1;
    std::vector<double> kappa{kappa0, kappa1, kappa2}, tau{tau0, 1 - tau0};
    auto p0 = substrategy_dist(kappa, true);
    auto p1 = substrategy_dist(tau, false);
    double uu[2] = {u, v}, vv[2] = {v, -u};

    std::vector<std::pair<std::string, double>> res;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                double want = uu[i] * uu[j] * uu[k] + vv[i] * vv[j] * vv[k];
                want = want * want;
                double got = p0[i * 4 + j * 2 + k] + p1[i * 4 + j * 2 + k];
                res.push_back({"q(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                   std::to_string(k) + ")",
                               0.5 * (got - want)});
            }
    for (int pos = 0; pos < 3; ++pos)
        for (int val = 0; val < 2; ++val)
            for (int t = 0; t < 2; ++t) {
                const auto& p = (t == 0) ? p0 : p1;
                double got = 0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        for (int k = 0; k < 2; ++k) {
                            int idx[3] = {i, j, k};
                            if (idx[pos] == val) got += p[i * 4 + j * 2 + k];
                        }
                double want = (t == 0) ? uu[val] * uu[val] : vv[val] * vv[val];
                res.push_back({"q(pos" + std::to_string(pos) + "=" + std::to_string(val) +
                                   ",t=" + std::to_string(t) + ")",
                               0.5 * (got - want)});
            }
    return res;
}

inline double max_abs_residual(const std::vector<std::pair<std::string, double>>& res) {
    double worst = 0;
    for (const auto& [name, r] : res) worst = std::max(worst, std::abs(r));
    return worst;
}

}  // namespace detail

// Solves for (kappa0, tau0) at measurement parameter u by bisection on the
// residual system; returns nothing when no parameters reproduce the required
// marginals (which is the case for any u detectably away from the threshold).
inline std::optional<ThresholdModelParams> solve_threshold_params(double u, double tol = 1e-10) {
    if (!(u > 0 && u < 1)) throw std::domain_error("need 0 < u < 1");
    double u2 = u * u, v2 = 1 - u2;

    // tau0 (1 - tau0) = v^2, upper root by bisection.
    if (v2 > 0.25 + 1e-15) return std::nullopt;
    double lo = 0.5, hi = 1.0;
    auto tau_res = [&](double t) { return t * (1 - t) - v2; };
    if (tau_res(lo) < 0) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (tau_res(mid) >= 0 ? lo : hi) = mid;
    }
    double tau0 = 0.5 * (lo + hi);

    // kappa0: scan the one-chi residual 2 k0 k1 k2 - u^2 v^2 (u - v)^2 and
    // bisect each sign change; keep the largest root with valid weights.
    double v = std::sqrt(v2);
    auto kappa_res = [&](double k0) {
        double k1 = v2 / (2 * k0);
        double k2 = 1 - k0 - k1;
        return 2 * k0 * k1 * k2 - u2 * v2 * (u - v) * (u - v);
    };
    std::optional<double> kappa0;
    const int grid = 2000;
    double prev_x = 1e-6, prev_f = kappa_res(prev_x);
    for (int i = 1; i <= grid; ++i) {
        double x = 1e-6 + (1.0 - 2e-6) * i / grid;
        double f = kappa_res(x);
        if ((prev_f <= 0) != (f <= 0)) {
            double a = prev_x, b = x;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (a + b);
                ((kappa_res(mid) <= 0) == (kappa_res(a) <= 0) ? a : b) = mid;
            }
            double root = 0.5 * (a + b);
            double k1 = v2 / (2 * root), k2 = 1 - root - k1;
            if (k1 >= 0 && k1 <= 1 && k2 >= 0 && k2 <= 1) kappa0 = root;
        }
        prev_x = x;
        prev_f = f;
    }
    if (!kappa0) return std::nullopt;

    auto residuals = detail::threshold_residuals(u, *kappa0, tau0);
    double worst = detail::max_abs_residual(residuals);
    if (worst > tol) return std::nullopt;

    ThresholdModelParams params;
    params.u = u;
    params.kappa0 = *kappa0;
    params.kappa1 = v2 / (2 * *kappa0);
    params.kappa2 = 1 - params.kappa0 - params.kappa1;
    params.tau0 = tau0;
    params.tau1 = 1 - tau0;
    params.max_residual = worst;
    return params;
}

// Full triangle model from solved sub-strategy parameters: each source emits
// a fair class bit extended with a kappa-trit (class 0) or a tau-bit
// (class 1); parties answer up/down from the class bits per the skeleton and
// resolve chi sub-labels with the sub-strategy shared by the agreeing pair.
inline TrilocalModel build_threshold_model(const ThresholdModelParams& params) {
    for (double w : {params.kappa0, params.kappa1, params.kappa2, params.tau0, params.tau1})
        if (!(w >= 0 && w <= 1)) throw std::domain_error("invalid sub-strategy weights");

    TrilocalModel model;
    PartyLabels qubit{{"up", "down", "chi0", "chi1"}, {0, 1, 2, 2}, {"up", "down", "chi"}};
    // Hidden values: 0,1,2 = class 0 with trit m; 3,4 = class 1 with bit m.
    auto cls = [](int v) { return v < 3 ? 0 : 1; };
    auto sub = [](int v) { return v < 3 ? v : v - 3; };
    for (std::size_t k = 0; k < 3; ++k) {
        model.sources.push_back({{0.5 * params.kappa0, 0.5 * params.kappa1, 0.5 * params.kappa2,
                                  0.5 * params.tau0, 0.5 * params.tau1},
                                 {"c0m0", "c0m1", "c0m2", "c1m0", "c1m1"}});
        model.labels.push_back(qubit);
        std::vector<TrilocalModel::ResponseDist> table(25);
        for (int l = 0; l < 5; ++l)
            for (int r = 0; r < 5; ++r) {
                int coarse = PartitionSkeleton::coarse_response(cls(l), cls(r));
                int label;
                if (coarse < 2) {
                    label = coarse;
                } else if (cls(l) == 0) {  // both class 0: chi1 iff trits {0,1}
                    bool chi1 = (sub(l) == 0 && sub(r) == 1) || (sub(l) == 1 && sub(r) == 0);
                    label = chi1 ? 3 : 2;
                } else {  // both class 1: chi0 iff bits (0,1)
                    label = (sub(l) == 0 && sub(r) == 1) ? 2 : 3;
                }
                table[static_cast<std::size_t>(l) * 5 + r] = {{label, 1.0}};
            }
        model.responses.push_back(std::move(table));
    }
    model.validate();
    return model;
}

}  // namespace qnet
