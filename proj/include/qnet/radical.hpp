// radical.hpp
// Exact arithmetic in the ring of finite sums  sum_i q_i * sqrt(d_i)  with
// rational q_i and square-free positive integer radicands d_i (d = 1 is the
// rational part). All state amplitudes and basis coefficients used here are
// square roots of rationals, so this ring is closed under every operation the
// contraction engine needs; squaring an amplitude lands back in it as well.
//
// Division is supported when the denominator lies in a quadratic subfield
// (at most two terms), which is the case for every exact linear program
// solved in this project.

#pragma once

#include "qnet/rational.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace qnet {

namespace detail {

// n = s^2 * d with d square-free. Trial division is capped; the leftover is
// then either prime, a prime square, or a semiprime with huge factors, all of
// which are handled. Inputs here come from user-supplied rationals and stay
// far below the cap.
inline std::pair<Int, Int> factor_out_squares(Int n) {
    Int s = 1, d = 1;
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        std::uint64_t m = n.convert_to<std::uint64_t>();
        std::uint64_t limit = 1000000;
        for (std::uint64_t p = 2; p <= limit && p * p <= m; p += (p == 2 ? 1 : 2)) {
            if (m % p == 0) {
                int e = 0;
                while (m % p == 0) { m /= p; ++e; }
                for (int k = 0; k < e / 2; ++k) s *= p;
                if (e % 2) d *= p;
            }
        }
        n = m;
    } else {
        for (Int p = 2; p <= 1000000 && p * p <= n; p += (p == 2 ? Int(1) : Int(2))) {
            if (n % p == 0) {
                int e = 0;
                while (n % p == 0) { n /= p; ++e; }
                for (int k = 0; k < e / 2; ++k) s *= p;
                if (e % 2) d *= p;
            }
        }
    }
    if (n > 1) {
        Int r = boost::multiprecision::sqrt(n);
        if (r * r == n) s *= r; else d *= n;
    }
    return {s, d};
}

}  // namespace detail

class RadicalSum {
public:
    using Term = std::pair<Int, Rational>;  // (radicand, coefficient)

    RadicalSum() = default;
    RadicalSum(const Rational& q) { if (q != 0) terms_.push_back({Int(1), q}); }
    RadicalSum(long long v) : RadicalSum(Rational(v)) {}
    RadicalSum(int v) : RadicalSum(Rational(v)) {}

    // sqrt(q) for q >= 0, exact.
    static RadicalSum sqrt_of(const Rational& q) {
        if (q < 0) throw std::domain_error("sqrt of negative rational");
        if (q == 0) return RadicalSum();
        // sqrt(p/q) = sqrt(p*q)/q
        auto [s, d] = detail::factor_out_squares(numerator(q) * denominator(q));
        RadicalSum r;
        r.terms_.push_back({d, Rational(s, denominator(q))});
        return r;
    }

    // sign(q) * sqrt(|q|); handy for coefficient tables given as signed squares.
    static RadicalSum signed_sqrt(const Rational& q) {
        RadicalSum r = sqrt_of(q < 0 ? Rational(-q) : q);
        return q < 0 ? -r : r;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1);
    }
    Rational rational_part() const {
        if (!terms_.empty() && terms_[0].first == 1) return terms_[0].second;
        return Rational(0);
    }
    Rational as_rational() const {
        if (!is_rational()) throw std::domain_error("radical sum is irrational: " + str());
        return rational_part();
    }

    // Radicand of the quadratic field containing this value, or 1 when
    // rational; nullopt when more than one irrational radicand is present.
    std::optional<Int> quadratic_radicand() const {
        Int rad = 1;
        for (const auto& [d, c] : terms_) {
            if (d == 1) continue;
            if (rad != 1 && rad != d) return std::nullopt;
            rad = d;
        }
        return rad;
    }

    friend RadicalSum operator-(const RadicalSum& x) {
        RadicalSum r = x;
        for (auto& [d, c] : r.terms_) c = -c;
        return r;
    }

    friend RadicalSum operator+(const RadicalSum& a, const RadicalSum& b) {
        RadicalSum r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
                r.terms_.push_back(b.terms_[j++]);
            } else {
                Rational c = a.terms_[i].second + b.terms_[j].second;
                if (c != 0) r.terms_.push_back({a.terms_[i].first, c});
                ++i; ++j;
            }
        }
        return r;
    }

    friend RadicalSum operator-(const RadicalSum& a, const RadicalSum& b) { return a + (-b); }

    friend RadicalSum operator*(const RadicalSum& a, const RadicalSum& b) {
        RadicalSum r;
        for (const auto& [da, ca] : a.terms_) {
            RadicalSum partial;
            partial.terms_.reserve(b.terms_.size());
            for (const auto& [db, cb] : b.terms_) {
                // sqrt(da)*sqrt(db) = g*sqrt((da/g)(db/g)) with g = gcd; both
                // factors stay square-free.
                Int g = boost::multiprecision::gcd(da, db);
                partial.terms_.push_back({(da / g) * (db / g), ca * cb * g});
            }
            std::sort(partial.terms_.begin(), partial.terms_.end(),
                      [](const Term& x, const Term& y) { return x.first < y.first; });
            r = r + partial;
        }
        return r;
    }

    // Exact division; requires the denominator to span at most two radicands.
    friend RadicalSum operator/(const RadicalSum& a, const RadicalSum& b) {
        if (b.is_zero()) throw std::domain_error("radical division by zero");
        if (b.terms_.size() == 1) {
            const auto& [d, c] = b.terms_[0];
            if (d == 1) return a * RadicalSum(Rational(1) / c);
            RadicalSum root;
            root.terms_.push_back({d, Rational(1) / (c * d)});
            return a * root;  // 1/(c*sqrt(d)) = sqrt(d)/(c*d)
        }
        if (b.terms_.size() == 2) {
            RadicalSum conj;
            conj.terms_ = {b.terms_[0], {b.terms_[1].first, -b.terms_[1].second}};
            RadicalSum den = b * conj;  // rational by construction
            return (a * conj) * RadicalSum(Rational(1) / den.as_rational());
        }
        throw std::domain_error("radical division needs a quadratic denominator: " + b.str());
    }

    RadicalSum& operator+=(const RadicalSum& o) { *this = *this + o; return *this; }
    RadicalSum& operator-=(const RadicalSum& o) { *this = *this - o; return *this; }
    RadicalSum& operator*=(const RadicalSum& o) { *this = *this * o; return *this; }
    RadicalSum& operator/=(const RadicalSum& o) { *this = *this / o; return *this; }

    bool operator==(const RadicalSum& o) const { return terms_ == o.terms_; }
    bool operator!=(const RadicalSum& o) const { return !(*this == o); }
    bool operator<(const RadicalSum& o) const { return (*this - o).sign() < 0; }
    bool operator>(const RadicalSum& o) const { return (*this - o).sign() > 0; }
    bool operator<=(const RadicalSum& o) const { return (*this - o).sign() <= 0; }
    bool operator>=(const RadicalSum& o) const { return (*this - o).sign() >= 0; }

    // Exact sign. Square roots of distinct square-free integers are linearly
    // independent over Q, so a nonempty canonical sum is nonzero and numeric
    // evaluation at escalating precision always terminates.
    int sign() const {
        if (terms_.empty()) return 0;
        int s = terms_[0].second.sign();
        bool mixed = false;
        for (const auto& [d, c] : terms_)
            if (c.sign() != s) { mixed = true; break; }
        if (!mixed) return s;
        if (terms_.size() == 2) {
            const auto& [d0, c0] = terms_[0];
            const auto& [d1, c1] = terms_[1];
            Rational lhs = c0 * c0 * Rational(d0), rhs = c1 * c1 * Rational(d1);
            return lhs > rhs ? c0.sign() : c1.sign();
        }
        if (int s1 = numeric_sign<boost::multiprecision::cpp_bin_float_100>(Rational(1, Int("1" + std::string(80, '0'))))) return s1;
        using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<500>>;
        if (int s2 = numeric_sign<Big>(Rational(1, Int("1" + std::string(450, '0'))))) return s2;
        throw std::runtime_error("sign of radical sum numerically undecidable: " + str());
    }

    RadicalSum abs() const { return sign() < 0 ? -*this : *this; }

    double to_double() const {
        double v = 0;
        for (const auto& [d, c] : terms_)
            v += to_double_term(d, c);
        return v;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            Rational c = terms_[i].second;
            if (i > 0) out += (c < 0) ? "-" : "+";
            else if (c < 0) out += "-";
            Rational a = c < 0 ? Rational(-c) : c;
            if (terms_[i].first == 1) {
                out += to_fraction_string(a);
            } else {
                if (a != 1) out += to_fraction_string(a) + "*";
                out += "sqrt(" + terms_[i].first.str() + ")";
            }
        }
        return out;
    }

private:
    template <class Float>
    int numeric_sign(const Rational& rel_eps) const {
        Float v = 0, mag = 0;
        for (const auto& [d, c] : terms_) {
            Float t = Float(c) * boost::multiprecision::sqrt(Float(d));
            v += t;
            mag += boost::multiprecision::fabs(t);
        }
        Float eps = mag * Float(rel_eps) * Float(terms_.size() + 2);
        if (v > eps) return 1;
        if (v < -eps) return -1;
        return 0;
    }

    static double to_double_term(const Int& d, const Rational& c) {
        double cd = c.convert_to<double>();
        return d == 1 ? cd : cd * std::sqrt(d.convert_to<double>());
    }

    std::vector<Term> terms_;
};

inline double to_double(const RadicalSum& x) { return x.to_double(); }
inline int sign_of(const RadicalSum& x) { return x.sign(); }
inline std::string to_fraction_string(const RadicalSum& x) { return x.str(); }

}  // namespace qnet
