#pragma once

// Finite orthogonal groups O+(L, p^t), O+(X, p^t), their stabilized densities
// beta = lim |O+(X, p^t)| / p^t, and the local index [O+(L_p) : O+(X_p)].

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "shifted_genus/arith.hpp"
#include "shifted_genus/lattice.hpp"

namespace shifted_genus {

// ---------------------------------------------------------------------------
// Enumeration kernel
//
// A congruence system exposes `base_level()` and `accepts(x1, x2, level)`, where
// `accepts` decides membership of a residue pair mod p^level. Systems must be
// reduction-monotone above the base level: a pair accepted at level j + 1 reduces
// to a pair accepted at level j. Lifting then walks only accepted pairs.

/// Pair spaces up to this size are scanned directly. Lifting wins well before
/// the scan gets expensive, so the cut is low.
inline constexpr std::uint64_t direct_scan_limit = std::uint64_t{1} << 12;

class power_table {
public:
    power_table(std::int64_t p, int max_exp)
    {
        pw_.resize(static_cast<std::size_t>(max_exp) + 1);
        pw_[0] = 1;
        for (int k = 1; k <= max_exp; ++k)
            pw_[k] = static_cast<std::uint64_t>(ipow(p, k));
    }
    std::uint64_t operator[](int k) const { return pw_.at(static_cast<std::size_t>(k)); }

private:
    std::vector<std::uint64_t> pw_;
};

template <class System>
std::uint64_t count_direct(const System& sys, std::int64_t p, int t)
{
    const auto m = static_cast<std::uint64_t>(ipow(p, t));
    std::uint64_t n = 0;
    for (std::uint64_t x1 = 0; x1 < m; ++x1)
        for (std::uint64_t x2 = 0; x2 < m; ++x2)
            n += sys.accepts(x1, x2, t) ? 1 : 0;
    return n;
}

namespace detail {

template <class System>
std::uint64_t lift_from(const System& sys, std::uint64_t p, std::uint64_t step, int level, int target,
                        std::uint64_t x1, std::uint64_t x2)
{
    if (level == target)
        return 1;
    std::uint64_t n = 0;
    for (std::uint64_t a = 0; a < p; ++a) {
        const std::uint64_t y1 = x1 + a * step;
        for (std::uint64_t b = 0; b < p; ++b) {
            const std::uint64_t y2 = x2 + b * step;
            if (sys.accepts(y1, y2, level + 1))
                n += lift_from(sys, p, step * p, level + 1, target, y1, y2);
        }
    }
    return n;
}

} // namespace detail

/// Count by scanning the base level and lifting each accepted pair digit by digit.
template <class System>
std::uint64_t count_lifted(const System& sys, std::int64_t p, int t)
{
    const int base = std::min(sys.base_level(), t);
    const auto m = static_cast<std::uint64_t>(ipow(p, base));
    std::uint64_t n = 0;
    for (std::uint64_t x1 = 0; x1 < m; ++x1)
        for (std::uint64_t x2 = 0; x2 < m; ++x2)
            if (sys.accepts(x1, x2, base))
                n += detail::lift_from(sys, static_cast<std::uint64_t>(p), m, base, t, x1, x2);
    return n;
}

template <class System>
std::uint64_t count_solutions(const System& sys, std::int64_t p, int t)
{
    const auto m = static_cast<unsigned __int128>(ipow(p, t));
    if (m * m <= direct_scan_limit)
        return count_direct(sys, p, t);
    return count_lifted(sys, p, t);
}

// ---------------------------------------------------------------------------
// Orthogonal groups of a local form

/// Membership test for O+(X, p^level) in the parametrization M_L(x1, x2).
///
/// Kind 3 congruences are multiplied through by alpha so that all arithmetic is integral:
/// alpha x1^2 + 2 x1 x2 + beta x2^2 = alpha (mod p^(level + e)).
class orthogonal_system {
public:
    orthogonal_system(const local_form& F, const local_shift& S, int max_level)
        : p_(F.p), kind_(F.kind), e_(F.e()), t_alpha_(F.t_alpha()), t_L_(F.t_L()), t_m_(S.t_m),
          pw_(F.p, max_level + F.e() + S.t_m + F.t_alpha() + 1)
    {
        const int need = max_level + quad_extra();
        if (F.precision < need || F.alpha.precision() < need || F.beta.precision() < need)
            throw insufficient_precision("local form precision " + std::to_string(F.precision) + " < "
                                         + std::to_string(need) + " needed for level "
                                         + std::to_string(max_level));
        alpha_ = F.alpha.residue_mod(need);
        beta_ = F.beta.residue_mod(need);
        if (t_m_ > 0) {
            const int s_need = t_m_ + (kind_ == jordan_kind::even ? t_alpha_ : 0);
            s1_ = S.s1.residue_mod(s_need);
            s2_ = S.s2.residue_mod(s_need);
        }
    }

    int base_level() const { return t_L_ + 1; }

    bool accepts(std::uint64_t x1, std::uint64_t x2, int level) const
    {
        return quadratic_ok(x1, x2, level) && (t_m_ == 0 || fixes_shift(x1, x2, std::min(level, t_m_)));
    }

private:
    int quad_extra() const { return kind_ == jordan_kind::hyperbolic ? 0 : e_; }

    bool quadratic_ok(std::uint64_t x1, std::uint64_t x2, int level) const
    {
        const std::uint64_t m = pw_[level + quad_extra()];
        x1 %= m;
        x2 %= m;
        switch (kind_) {
        case jordan_kind::diagonal: {
            const std::uint64_t v = (mulmod(x1, x1, m) + mulmod(alpha_ % m, mulmod(x2, x2, m), m)) % m;
            return v == 1 % m;
        }
        case jordan_kind::hyperbolic:
            return mulmod(x1, x2, m) == 1 % m;
        case jordan_kind::even: {
            const std::uint64_t a = alpha_ % m;
            std::uint64_t v = mulmod(a, mulmod(x1, x1, m), m);
            v = (v + mulmod(2 % m, mulmod(x1, x2, m), m)) % m;
            v = (v + mulmod(beta_ % m, mulmod(x2, x2, m), m)) % m;
            return v == a;
        }
        }
        return false;
    }

    bool fixes_shift(std::uint64_t x1, std::uint64_t x2, int l) const
    {
        const std::uint64_t m = pw_[l + (kind_ == jordan_kind::even ? t_alpha_ : 0)];
        const std::uint64_t s1 = s1_ % m, s2 = s2_ % m, a = alpha_ % m, b = beta_ % m;
        x1 %= m;
        x2 %= m;
        auto sub = [m](std::uint64_t u, std::uint64_t v) { return (u + m - v) % m; };
        auto add = [m](std::uint64_t u, std::uint64_t v) { return (u + v) % m; };
        switch (kind_) {
        case jordan_kind::diagonal: {
            // [[x1, -alpha x2], [x2, x1]] s = s
            const auto r1 = sub(mulmod(x1, s1, m), mulmod(a, mulmod(x2, s2, m), m));
            const auto r2 = add(mulmod(x2, s1, m), mulmod(x1, s2, m));
            return r1 == s1 && r2 == s2;
        }
        case jordan_kind::hyperbolic:
            return mulmod(x1, s1, m) == s1 && mulmod(x2, s2, m) == s2;
        case jordan_kind::even: {
            // alpha * M_L(x1, x2) s = alpha s, with alpha M_L = [[alpha x1, -beta x2], [alpha x2, alpha x1 + 2 x2]]
            const auto r1 = sub(mulmod(mulmod(a, x1, m), s1, m), mulmod(mulmod(b, x2, m), s2, m));
            const auto r2 =
                add(mulmod(mulmod(a, x2, m), s1, m), mulmod(add(mulmod(a, x1, m), mulmod(2 % m, x2, m)), s2, m));
            return r1 == mulmod(a, s1, m) && r2 == mulmod(a, s2, m);
        }
        }
        return false;
    }

    std::int64_t p_;
    jordan_kind kind_;
    int e_, t_alpha_, t_L_, t_m_;
    power_table pw_;
    std::uint64_t alpha_ = 0, beta_ = 0, s1_ = 0, s2_ = 0;
};

/// M_L(x1, x2) reduced mod p^t, row-major.
inline std::array<std::uint64_t, 4> orthogonal_param(const local_form& F, std::uint64_t x1, std::uint64_t x2, int t)
{
    const auto m = static_cast<std::uint64_t>(ipow(F.p, t));
    x1 %= m;
    x2 %= m;
    auto neg = [m](std::uint64_t v) { return (m - v % m) % m; };
    switch (F.kind) {
    case jordan_kind::diagonal:
        return {x1, neg(mulmod(F.alpha.residue_mod(t), x2, m)), x2, x1};
    case jordan_kind::hyperbolic:
        return {x1, 0, 0, x2};
    case jordan_kind::even: {
        const int ta = F.t_alpha();
        const padic a_unit_inv = F.alpha.unit_part().inverse();
        const auto beta_over_alpha = (F.beta.exact_div_p(ta) * a_unit_inv).residue_mod(t);
        const auto two_over_alpha = (padic(2, F.precision, 2).exact_div_p(ta) * a_unit_inv).residue_mod(t);
        return {x1, neg(mulmod(beta_over_alpha, x2, m)), x2, (x1 + mulmod(two_over_alpha, x2, m)) % m};
    }
    }
    return {};
}

/// |O+(L, p^t)|, t >= t_L + 1.
inline std::uint64_t count_group(const local_form& F, int t)
{
    if (t < F.t_L() + 1)
        throw std::invalid_argument("count_group needs t >= t_L + 1");
    return count_solutions(orthogonal_system(F, local_shift::trivial(F.p, F.precision), t), F.p, t);
}

/// |O+(X, p^t)|, t >= max(t_m, t_L + 1).
inline std::uint64_t count_stabilizer(const local_form& F, const local_shift& S, int t)
{
    if (t < std::max(S.t_m, F.t_L() + 1))
        throw std::invalid_argument("count_stabilizer needs t >= max(t_m, t_L + 1)");
    return count_solutions(orthogonal_system(F, S, t), F.p, t);
}

// ---------------------------------------------------------------------------
// Auxiliary congruence systems, counted by brute force next to their closed forms

struct congruence_count {
    std::uint64_t count = 0;
    std::uint64_t closed_form = 0;
    /// The closed count's hypotheses hold, so count == closed_form is guaranteed.
    bool hypotheses_hold = false;
};

namespace detail {

/// Exponent max(0, k) with k possibly minus infinity.
inline int clamp_exponent(std::int64_t t_m, const extended_valuation& t)
{
    if (t.is_infinite())
        return 0;
    return static_cast<int>(std::max<std::int64_t>(0, t_m - t.value()));
}

inline int min_with(int t_m, const extended_valuation& a, const extended_valuation& b)
{
    const auto m = min(extended_valuation(t_m), min(a, b));
    return static_cast<int>(m.value());
}

struct system0 {
    std::int64_t p;
    std::int64_t alpha;
    power_table pw;

    int base_level() const { return 1; }
    bool accepts(std::uint64_t x1, std::uint64_t x2, int level) const
    {
        const auto m = pw[level];
        return (mulmod(x1, x1, m) + mulmod(reduce(alpha, m), mulmod(x2, x2, m), m)) % m == 1 % m;
    }
};

/// x1^2 + alpha x2^2 = 1 (p^(j+e)), x1 = 1 - s x2 (p^t_m), x2 = 0 (p^x2_exp).
struct system1 {
    std::int64_t alpha, s;
    int e, t_m, x2_exp;
    power_table pw;

    int base_level() const { return std::max(1, e); }
    bool accepts(std::uint64_t x1, std::uint64_t x2, int level) const
    {
        const auto mq = pw[level + e];
        if ((mulmod(x1 % mq, x1 % mq, mq) + mulmod(reduce(alpha, mq), mulmod(x2 % mq, x2 % mq, mq), mq)) % mq
            != 1 % mq)
            return false;
        const auto ml = pw[std::min(level, t_m)];
        const auto rhs = (1 % ml + ml - mulmod(reduce(s, ml), x2 % ml, ml)) % ml;
        if (x1 % ml != rhs)
            return false;
        return x2 % pw[std::min(level, x2_exp)] == 0;
    }
};

/// Dyadic systems with alpha cleared:
///   alpha x1^2 + 2 x1 x2 + beta x2^2 = alpha (2^(j+1)),
///   alpha x1 = alpha - (alpha s + 2 shift_on) x2 (2^(t_m + t_alpha)),
///   x2 = 0 (2^x2_exp).
/// With shift_on = false and s = 0 the middle congruence is x1 = 1 (2^t_m).
struct system23 {
    std::int64_t alpha, beta, s;
    bool shift_on;
    int t_m, t_alpha, x2_exp;
    power_table pw;

    int base_level() const { return 1; }
    bool accepts(std::uint64_t x1, std::uint64_t x2, int level) const
    {
        const auto mq = pw[level + 1];
        const auto a = reduce(alpha, mq);
        std::uint64_t v = mulmod(a, mulmod(x1 % mq, x1 % mq, mq), mq);
        v = (v + mulmod(2 % mq, mulmod(x1 % mq, x2 % mq, mq), mq)) % mq;
        v = (v + mulmod(reduce(beta, mq), mulmod(x2 % mq, x2 % mq, mq), mq)) % mq;
        if (v != a)
            return false;
        const auto ml = pw[std::min(level, t_m) + t_alpha];
        const auto al = reduce(alpha, ml);
        const auto coef = shift_on ? (mulmod(al, reduce(s, ml), ml) + 2) % ml : 0;
        const auto lhs = mulmod(al, x1 % ml, ml);
        const auto rhs = (al + ml - mulmod(coef, x2 % ml, ml)) % ml;
        if (lhs != rhs)
            return false;
        return x2 % pw[std::min(level, x2_exp)] == 0;
    }
};

} // namespace detail

/// Solutions of x1^2 + alpha x2^2 = 1 mod p^t (p odd); closed form p^t (1 - eta(-alpha)/p).
inline congruence_count count_system0(std::int64_t p, std::int64_t alpha, int t)
{
    require_prime(p);
    if (p == 2)
        throw std::invalid_argument("count_system0 is for odd primes");
    if (t < 1)
        throw std::invalid_argument("t >= 1 required");
    const detail::system0 sys{p, alpha, power_table(p, t)};
    congruence_count r;
    r.count = count_solutions(sys, p, t);
    r.closed_form = static_cast<std::uint64_t>(ipow(p, t - 1) * (p - eta(p, -alpha)));
    r.hypotheses_hold = true;
    return r;
}

/// Hypotheses (1)-(3) of the shifted Hensel count, with t_s = ord(s), t_nu = ord(s^2 + alpha).
inline bool system1_hypotheses(std::int64_t p, std::int64_t alpha, std::int64_t s, int t_m)
{
    const int e = dyadic_order(p);
    const auto t_s = ord(p, s);
    const auto t_nu = ord(p, s * s + alpha);
    if (t_m < e + 1)
        return false;
    const auto mn = min(extended_valuation(t_m), t_nu).value();
    if (t_s >= t_nu)
        return extended_valuation(t_m) + t_nu - 2 * mn >= extended_valuation(e);
    return extended_valuation(t_m) + t_nu - mn >= t_s + extended_valuation(e + 1);
}

inline congruence_count count_system1(std::int64_t p, std::int64_t alpha, std::int64_t s, int t_m, int t)
{
    require_prime(p);
    if (t < t_m || t < 1)
        throw std::invalid_argument("count_system1 needs t >= max(t_m, 1)");
    const int e = dyadic_order(p);
    const auto t_s = ord(p, s);
    const auto t_nu = ord(p, s * s + alpha);
    const int x2_exp = detail::clamp_exponent(t_m, t_nu);
    const detail::system1 sys{alpha, s, e, t_m, x2_exp, power_table(p, t + e + t_m + 1)};
    congruence_count r;
    r.count = count_solutions(sys, p, t);
    r.closed_form = static_cast<std::uint64_t>(ipow(p, t - t_m + detail::min_with(t_m, t_nu, t_s)));
    r.hypotheses_hold = system1_hypotheses(p, alpha, s, t_m);
    return r;
}

namespace detail {

inline bool system23_hypotheses(std::int64_t alpha, std::int64_t beta, int t_m, int t)
{
    const auto t_alpha = ord(2, alpha);
    return extended_valuation(1) <= t_alpha && t_alpha <= min(extended_valuation(1), ord(2, beta)) && t_m >= 2
           && extended_valuation(t) >= t_alpha + extended_valuation(t_m);
}

inline int checked_t_alpha(std::int64_t alpha)
{
    const auto ta = ord(2, alpha);
    if (ta.is_infinite())
        throw std::invalid_argument("alpha must be nonzero");
    return static_cast<int>(ta.value());
}

} // namespace detail

/// Dyadic system with x1 = 1, x2 = 0 (mod 2^t_m); closed form 2^(t - t_m).
inline congruence_count count_system2(std::int64_t alpha, std::int64_t beta, int t_m, int t)
{
    if (t < t_m || t < 1)
        throw std::invalid_argument("count_system2 needs t >= max(t_m, 1)");
    const int ta = detail::checked_t_alpha(alpha);
    const detail::system23 sys{alpha, beta, 0, false, t_m, ta, t_m, power_table(2, t + t_m + ta + 2)};
    congruence_count r;
    r.count = count_solutions(sys, 2, t);
    r.closed_form = static_cast<std::uint64_t>(ipow(2, t - t_m));
    r.hypotheses_hold = detail::system23_hypotheses(alpha, beta, t_m, t);
    return r;
}

/// Dyadic shifted system with Q_nu = s^2 + 2s/alpha + beta/alpha; closed form 2^(t - t_m).
inline congruence_count count_system3(std::int64_t alpha, std::int64_t beta, std::int64_t s, int t_m, int t)
{
    if (t < t_m || t < 1)
        throw std::invalid_argument("count_system3 needs t >= max(t_m, 1)");
    const int ta = detail::checked_t_alpha(alpha);
    // ord(Q_nu) = ord(alpha s^2 + 2 s + beta) - t_alpha
    const auto t_nu = ord(2, alpha * s * s + 2 * s + beta) - ta;
    const int x2_exp = detail::clamp_exponent(t_m, t_nu);
    const detail::system23 sys{alpha, beta, s, true, t_m, ta, x2_exp, power_table(2, t + t_m + ta + 2)};
    congruence_count r;
    r.count = count_solutions(sys, 2, t);
    r.closed_form = static_cast<std::uint64_t>(ipow(2, t - t_m));
    r.hypotheses_hold = detail::system23_hypotheses(alpha, beta, t_m, t);
    return r;
}

// ---------------------------------------------------------------------------
// Local densities

enum class beta_method { closed, empirical };

inline const char* to_string(beta_method m) { return m == beta_method::closed ? "closed" : "empirical"; }

/// Whether closed forms may be used, or every density is counted.
enum class density_mode { prefer_closed, oracle_only };

struct beta_value {
    rational value;
    beta_method method = beta_method::closed;
    /// Level at which the empirical count stabilized; 0 for closed forms.
    int t_used = 0;
};

/// min(t_m, t_nu, t_s) for a kind-1 form, t_s = ord(s1), t_nu = ord(s1^2 + alpha s2^2).
inline int shift_exponent(const local_form& F, const local_shift& S)
{
    if (F.kind != jordan_kind::diagonal)
        throw std::invalid_argument("shift_exponent is defined for kind 1 forms");
    const int t_s = S.s1.valuation_min(S.t_m);
    const int t_nu = (S.s1 * S.s1 + F.alpha * S.s2 * S.s2).valuation_min(S.t_m);
    return std::min({S.t_m, t_s, t_nu});
}

/// Closed-form density, or nullopt where no closed form applies
/// (dyadic kind 1 with t_m < ord(alpha) + 2, dyadic kind 3 with t_m < 2).
inline std::optional<rational> beta_closed(const local_form& F, const local_shift& S)
{
    const auto p = F.p;
    const int e = F.e();
    const int t_m = S.t_m;
    switch (F.kind) {
    case jordan_kind::diagonal:
        if (p != 2 && t_m == 0)
            return rational(1) - rational(eta(-F.alpha), p);
        if (p == 2 && t_m < F.t_alpha() + e + 1)
            return std::nullopt;
        return rational(1, ipow(p, t_m - shift_exponent(F, S)));
    case jordan_kind::hyperbolic:
        if (t_m == 0)
            return rational(1) - rational(1, p);
        return rational(1, ipow(p, t_m));
    case jordan_kind::even:
        if (t_m < e + 1)
            return std::nullopt;
        return rational(1, ipow(p, t_m));
    }
    return std::nullopt;
}

/// First level used by the empirical density.
inline int empirical_start_level(const local_form& F, const local_shift& S)
{
    return std::max(S.t_m + F.t_alpha() + F.e() + 1, F.t_L() + 1);
}

/// Density from counts: the first level t >= t* with |O+(X, p^(t+1))| = p |O+(X, p^t)|.
inline beta_value beta_empirical(const local_form& F, const local_shift& S)
{
    const int start = empirical_start_level(F, S);
    const int last = start + 3;
    const orthogonal_system sys(F, S, last);
    // Counts grow like p^t, so each level is only counted when the previous pair failed.
    std::vector<std::uint64_t> counts{count_solutions(sys, F.p, start)};
    for (int k = 0; k < 3; ++k) {
        counts.push_back(count_solutions(sys, F.p, start + k + 1));
        const auto c0 = counts[static_cast<std::size_t>(k)];
        const auto c1 = counts[static_cast<std::size_t>(k) + 1];
        if (c0 > 0 && c1 == c0 * static_cast<std::uint64_t>(F.p)) {
            const int t = start + k;
            const rational value(static_cast<std::int64_t>(c0), ipow(F.p, t));
            if (value <= rational(0) || value > rational(2))
                throw invariant_breach("density " + to_string(value) + " outside (0, 2]");
            return {value, beta_method::empirical, t};
        }
    }
    throw not_stabilized("counts did not grow by p between levels " + std::to_string(start) + " and "
                         + std::to_string(last));
}

inline beta_value beta(const local_form& F, const local_shift& S, density_mode mode = density_mode::prefer_closed)
{
    if (mode == density_mode::prefer_closed)
        if (auto v = beta_closed(F, S))
            return {*v, beta_method::closed, 0};
    return beta_empirical(F, S);
}

struct local_index_report {
    std::int64_t p = 0;
    int t_m = 0;
    beta_value beta_L;
    beta_value beta_X;
    std::int64_t index = 1;
    /// closed only when both densities came from closed forms.
    beta_method method = beta_method::closed;
    int t_used = 0;
};

/// [O+(L_p) : O+(X_p)] = beta(L) / beta(X), asserted to be a positive integer.
inline local_index_report local_index(const local_form& F, const local_shift& S,
                                      density_mode mode = density_mode::prefer_closed)
{
    local_index_report r;
    r.p = F.p;
    r.t_m = S.t_m;
    r.beta_L = beta(F, local_shift::trivial(F.p, F.precision), mode);
    r.beta_X = S.t_m == 0 ? r.beta_L : beta(F, S, mode);
    const rational q = r.beta_L.value / r.beta_X.value;
    if (q.denominator() != 1 || q.numerator() < 1)
        throw invariant_breach("local index " + to_string(q) + " at p=" + std::to_string(F.p)
                               + " is not a positive integer");
    r.index = q.numerator();
    r.method = (r.beta_L.method == beta_method::closed && r.beta_X.method == beta_method::closed)
                   ? beta_method::closed
                   : beta_method::empirical;
    r.t_used = std::max(r.beta_L.t_used, r.beta_X.t_used);
    return r;
}

} // namespace shifted_genus
