#pragma once

// Exact integer/rational helpers and a fixed-precision p-adic residue type.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "shifted_genus/errors.hpp"

namespace shifted_genus {

using rational = boost::rational<std::int64_t>;

inline std::string to_string(const rational& q)
{
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

// ---------------------------------------------------------------------------
// Extended valuations

/// A p-adic valuation: a signed integer or +infinity (the valuation of zero).
class extended_valuation {
public:
    constexpr extended_valuation() = default;
    constexpr extended_valuation(std::int64_t v) : value_(v) {} // NOLINT: implicit by intent

    static constexpr extended_valuation infinity()
    {
        extended_valuation v;
        v.infinite_ = true;
        return v;
    }

    constexpr bool is_infinite() const { return infinite_; }

    std::int64_t value() const
    {
        if (infinite_)
            throw std::logic_error("extended_valuation::value() on infinity");
        return value_;
    }

    friend constexpr bool operator==(const extended_valuation& a, const extended_valuation& b)
    {
        if (a.infinite_ || b.infinite_)
            return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend constexpr bool operator<(const extended_valuation& a, const extended_valuation& b)
    {
        if (a.infinite_)
            return false;
        if (b.infinite_)
            return true;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator>(const extended_valuation& a, const extended_valuation& b) { return b < a; }
    friend constexpr bool operator<=(const extended_valuation& a, const extended_valuation& b) { return !(b < a); }
    friend constexpr bool operator>=(const extended_valuation& a, const extended_valuation& b) { return !(a < b); }

    friend constexpr extended_valuation operator+(const extended_valuation& a, const extended_valuation& b)
    {
        if (a.infinite_ || b.infinite_)
            return infinity();
        return extended_valuation(a.value_ + b.value_);
    }

    /// Subtracting a finite amount; infinity stays infinity.
    friend extended_valuation operator-(const extended_valuation& a, std::int64_t k)
    {
        if (a.infinite_)
            return infinity();
        return extended_valuation(a.value_ - k);
    }

    friend std::ostream& operator<<(std::ostream& os, const extended_valuation& v)
    {
        if (v.infinite_)
            return os << "inf";
        return os << v.value_;
    }

private:
    std::int64_t value_ = 0;
    bool infinite_ = false;
};

inline extended_valuation min(const extended_valuation& a, const extended_valuation& b) { return b < a ? b : a; }

// ---------------------------------------------------------------------------
// Integer helpers

inline bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline void require_prime(std::int64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument(std::to_string(p) + " is not prime");
}

/// Distinct prime divisors of |n|, ascending.
inline std::vector<std::int64_t> prime_divisors(std::int64_t n)
{
    std::vector<std::int64_t> out;
    if (n < 0)
        n = -n;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0)
                n /= d;
        }
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

/// p^k, throwing on overflow of int64.
inline std::int64_t ipow(std::int64_t p, std::int64_t k)
{
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        if (__builtin_mul_overflow(r, p, &r))
            throw std::overflow_error("ipow overflow");
    }
    return r;
}

/// Euler's totient.
inline std::int64_t totient(std::int64_t n)
{
    std::int64_t r = n;
    for (auto p : prime_divisors(n))
        r = r / p * (p - 1);
    return r;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Reduce a signed integer into [0, m).
inline std::uint64_t reduce(std::int64_t x, std::uint64_t m)
{
    const auto sm = static_cast<__int128>(m);
    __int128 r = static_cast<__int128>(x) % sm;
    if (r < 0)
        r += sm;
    return static_cast<std::uint64_t>(r);
}

/// Inverse of a mod m; a must be coprime to m.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t m)
{
    __int128 old_r = static_cast<__int128>(a % m), r = m;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        __int128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1)
        throw std::domain_error("invmod: not a unit");
    __int128 res = old_s % static_cast<__int128>(m);
    if (res < 0)
        res += m;
    return static_cast<std::uint64_t>(res);
}

// ---------------------------------------------------------------------------
// Valuations of integers and rationals

inline extended_valuation ord(std::int64_t p, std::int64_t x)
{
    if (x == 0)
        return extended_valuation::infinity();
    std::int64_t k = 0;
    while (x % p == 0) {
        x /= p;
        ++k;
    }
    return k;
}

inline extended_valuation ord(std::int64_t p, const rational& x)
{
    if (x.numerator() == 0)
        return extended_valuation::infinity();
    return ord(p, x.numerator()).value() - ord(p, x.denominator()).value();
}

/// Quadratic character at an odd prime: 1 on unit squares, -1 on unit
/// non-squares, -p on multiples of p.
inline std::int64_t eta(std::int64_t p, std::int64_t x)
{
    if (p == 2)
        throw std::invalid_argument("eta is only defined at odd primes");
    const auto up = static_cast<std::uint64_t>(p);
    const std::uint64_t r = reduce(x, up);
    if (r == 0)
        return -p;
    return powmod(r, (up - 1) / 2, up) == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Fixed-precision p-adic integers

/// Largest N with p^N <= 2^62; residues and products stay within 128-bit math.
inline int word_precision_limit(std::int64_t p)
{
    int n = 0;
    unsigned __int128 m = 1;
    while (m * static_cast<unsigned>(p) <= (static_cast<unsigned __int128>(1) << 62)) {
        m *= static_cast<unsigned>(p);
        ++n;
    }
    return n;
}

/// An element of Z_p known modulo p^N (absolute precision N).
class padic {
public:
    padic() = default;

    padic(std::int64_t p, int precision, std::int64_t value)
        : p_(p), precision_(precision)
    {
        check_precision();
        modulus_ = static_cast<std::uint64_t>(ipow(p, precision));
        residue_ = reduce(value, modulus_);
    }

    /// A p-integral rational (denominator coprime to p).
    padic(std::int64_t p, int precision, const rational& value)
        : padic(p, precision, value.numerator())
    {
        const auto den = reduce(value.denominator(), modulus_);
        if (den % static_cast<std::uint64_t>(p) == 0)
            throw std::domain_error("rational is not p-integral");
        residue_ = mulmod(residue_, invmod(den, modulus_), modulus_);
    }

    std::int64_t prime() const { return p_; }
    int precision() const { return precision_; }
    std::uint64_t residue() const { return residue_; }
    std::uint64_t modulus() const { return modulus_; }

    /// Residue modulo p^k, k <= precision.
    std::uint64_t residue_mod(int k) const
    {
        if (k > precision_)
            throw insufficient_precision("residue mod p^" + std::to_string(k) + " requested at precision "
                                         + std::to_string(precision_));
        return residue_ % static_cast<std::uint64_t>(ipow(p_, k));
    }

    /// True when the value is zero to the carried precision (its valuation is >= N).
    bool is_zero() const { return residue_ == 0; }

    /// Exact valuation; certified only below the precision.
    int valuation() const
    {
        if (residue_ == 0)
            throw insufficient_precision("valuation of a value that is 0 mod p^" + std::to_string(precision_));
        int k = 0;
        auto r = residue_;
        const auto up = static_cast<std::uint64_t>(p_);
        while (r % up == 0) {
            r /= up;
            ++k;
        }
        return k;
    }

    /// min(valuation, bound), which is decidable whenever bound <= precision.
    int valuation_min(int bound) const
    {
        if (residue_ != 0)
            return std::min(valuation(), bound);
        if (bound <= precision_)
            return bound;
        throw insufficient_precision("valuation bound " + std::to_string(bound) + " exceeds precision "
                                     + std::to_string(precision_));
    }

    /// Certified ord >= k.
    bool valuation_at_least(int k) const
    {
        if (residue_ == 0) {
            if (k <= precision_)
                return true;
            throw insufficient_precision("cannot certify valuation >= " + std::to_string(k));
        }
        return valuation() >= k;
    }

    bool is_unit() const
    {
        return precision_ >= 1 && residue_ % static_cast<std::uint64_t>(p_) != 0;
    }

    padic with_precision(int n) const
    {
        if (n > precision_)
            throw insufficient_precision("cannot raise precision from " + std::to_string(precision_) + " to "
                                         + std::to_string(n));
        padic r = *this;
        r.precision_ = n;
        r.modulus_ = static_cast<std::uint64_t>(ipow(p_, n));
        r.residue_ %= r.modulus_;
        return r;
    }

    /// Exact division by p^k; the value must be divisible. Loses k digits.
    padic exact_div_p(int k) const
    {
        if (!valuation_at_least(k))
            throw std::domain_error("exact_div_p: not divisible");
        const auto pk = static_cast<std::uint64_t>(ipow(p_, k));
        padic r = with_precision(precision_);
        r.precision_ = precision_ - k;
        r.modulus_ = modulus_ / pk;
        r.residue_ = residue_ / pk;
        return r;
    }

    /// The unit u with value = p^v * u, known to precision N - v.
    padic unit_part() const { return exact_div_p(valuation()); }

    padic inverse() const
    {
        if (!is_unit())
            throw std::domain_error("inverse of a non-unit p-adic");
        padic r = *this;
        r.residue_ = invmod(residue_, modulus_);
        return r;
    }

    friend padic operator+(const padic& a, const padic& b)
    {
        auto [x, y] = align(a, b);
        x.residue_ = (x.residue_ + y.residue_) % x.modulus_;
        return x;
    }
    friend padic operator-(const padic& a, const padic& b)
    {
        auto [x, y] = align(a, b);
        x.residue_ = (x.residue_ + x.modulus_ - y.residue_) % x.modulus_;
        return x;
    }
    friend padic operator*(const padic& a, const padic& b)
    {
        auto [x, y] = align(a, b);
        x.residue_ = mulmod(x.residue_, y.residue_, x.modulus_);
        return x;
    }
    padic operator-() const
    {
        padic r = *this;
        r.residue_ = (modulus_ - residue_) % modulus_;
        return r;
    }
    friend padic operator*(const padic& a, std::int64_t k) { return a * padic(a.p_, a.precision_, k); }
    friend padic operator+(const padic& a, std::int64_t k) { return a + padic(a.p_, a.precision_, k); }
    friend padic operator-(const padic& a, std::int64_t k) { return a - padic(a.p_, a.precision_, k); }

    /// Same value modulo the smaller of the two precisions.
    friend bool congruent(const padic& a, const padic& b)
    {
        auto [x, y] = align(a, b);
        return x.residue_ == y.residue_;
    }

    /// "u*p^k (mod p^N)" with u the unit part's residue; "0 (mod p^N)" for zero.
    std::string to_string() const
    {
        const std::string tail = " (mod " + std::to_string(p_) + "^" + std::to_string(precision_) + ")";
        if (residue_ == 0)
            return "0" + tail;
        const int v = valuation();
        const auto u = unit_part();
        return std::to_string(u.residue_) + "*" + std::to_string(p_) + "^" + std::to_string(v) + tail;
    }

private:
    static std::pair<padic, padic> align(const padic& a, const padic& b)
    {
        if (a.p_ != b.p_)
            throw std::invalid_argument("p-adic arithmetic across different primes");
        const int n = std::min(a.precision_, b.precision_);
        return {a.with_precision(n), b.with_precision(n)};
    }

    void check_precision() const
    {
        if (precision_ < 1)
            throw insufficient_precision("p-adic precision must be positive");
        if (precision_ > word_precision_limit(p_))
            throw insufficient_precision("precision " + std::to_string(precision_) + " exceeds the word limit for p="
                                         + std::to_string(p_));
    }

    std::int64_t p_ = 2;
    int precision_ = 1;
    std::uint64_t modulus_ = 2;
    std::uint64_t residue_ = 0;
};

/// Whether the p-adic unit u is a square in Z_p^x.
inline bool is_unit_square(const padic& u)
{
    if (!u.is_unit())
        throw std::domain_error("is_unit_square expects a unit");
    if (u.prime() == 2) {
        if (u.precision() < 3)
            throw insufficient_precision("squareness of a 2-adic unit needs precision >= 3");
        return u.residue_mod(3) == 1;
    }
    return eta(u.prime(), static_cast<std::int64_t>(u.residue_mod(1))) == 1;
}

/// eta at an odd prime evaluated on a p-adic value (needs precision >= 1).
inline std::int64_t eta(const padic& x)
{
    return eta(x.prime(), static_cast<std::int64_t>(x.residue_mod(1)));
}

} // namespace shifted_genus
