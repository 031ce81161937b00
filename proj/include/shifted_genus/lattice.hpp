#pragma once

// Binary lattices over Z, shifted lattices L + nu, and local Jordan forms.

#include <array>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include "shifted_genus/arith.hpp"

namespace shifted_genus {

/// Gram matrix [[a11, a12], [a12, a22]] of a binary lattice.
struct gram_matrix {
    std::int64_t a11 = 0;
    std::int64_t a12 = 0;
    std::int64_t a22 = 0;

    std::int64_t det() const { return a11 * a22 - a12 * a12; }
    bool positive_definite() const { return a11 > 0 && det() > 0; }

    /// -det is not a rational square (the 2-dim anisotropy condition).
    bool det_condition() const
    {
        const std::int64_t m = -det();
        if (m == 0)
            return false;
        if (m < 0)
            return true;
        auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<long double>(m))));
        while (r * r > m)
            --r;
        while ((r + 1) * (r + 1) <= m)
            ++r;
        return r * r != m;
    }

    gram_matrix scaled(std::int64_t k) const { return {a11 * k, a12 * k, a22 * k}; }

    /// Gram matrix in the basis given by the columns of m: m^T G m.
    gram_matrix transformed(const std::array<std::int64_t, 4>& m) const
    {
        const auto [p, q, r, s] = m; // columns (p, r) and (q, s)
        return {a11 * p * p + 2 * a12 * p * r + a22 * r * r,
                a11 * p * q + a12 * (p * s + q * r) + a22 * r * s,
                a11 * q * q + 2 * a12 * q * s + a22 * s * s};
    }

    friend bool operator==(const gram_matrix&, const gram_matrix&) = default;
};

inline std::int64_t scale_content(const gram_matrix& g)
{
    const std::int64_t c = std::gcd(std::gcd(g.a11, g.a12), g.a22);
    return c == 0 ? 1 : c;
}

inline gram_matrix primitive_part(const gram_matrix& g)
{
    const auto c = scale_content(g);
    return {g.a11 / c, g.a12 / c, g.a22 / c};
}

/// Coset L + nu, with nu in lattice coordinates reduced into [0, 1)^2.
class shifted_lattice {
public:
    shifted_lattice(gram_matrix g, rational nu1, rational nu2) : gram_(g), shift_{frac(nu1), frac(nu2)}
    {
        if (g.det() == 0)
            throw std::invalid_argument("degenerate Gram matrix");
    }

    const gram_matrix& gram() const { return gram_; }
    const std::array<rational, 2>& shift() const { return shift_; }

    /// Least m >= 1 with m * nu in Z^2.
    std::int64_t conductor() const { return std::lcm(shift_[0].denominator(), shift_[1].denominator()); }

    friend bool operator==(const shifted_lattice& a, const shifted_lattice& b)
    {
        return a.gram_ == b.gram_ && a.shift_ == b.shift_;
    }

private:
    static rational frac(const rational& q)
    {
        const std::int64_t n = q.numerator(), d = q.denominator();
        std::int64_t r = n % d;
        if (r < 0)
            r += d;
        return {r, d};
    }

    gram_matrix gram_;
    std::array<rational, 2> shift_;
};

// ---------------------------------------------------------------------------
// Local Jordan forms

/// Kind 1: c*D(1, alpha). Kind 2: c*A(0, 0). Kind 3: c*A(alpha, beta), p = 2.
enum class jordan_kind { diagonal = 1, hyperbolic = 2, even = 3 };

inline int dyadic_order(std::int64_t p) { return p == 2 ? 1 : 0; }

/// 2x2 p-adic matrix, row-major.
using padic_matrix = std::array<padic, 4>;

inline padic det(const padic_matrix& m) { return m[0] * m[3] - m[1] * m[2]; }

struct local_form {
    std::int64_t p = 2;
    jordan_kind kind = jordan_kind::diagonal;
    padic c;
    padic alpha;
    padic beta;
    /// Columns are the Jordan basis expressed in the global basis.
    padic_matrix U;
    /// Least precision among the carried values.
    int precision = 0;

    int e() const { return dyadic_order(p); }

    int t_alpha() const
    {
        switch (kind) {
        case jordan_kind::hyperbolic:
            return 0;
        default:
            return alpha.valuation();
        }
    }

    /// Extra digits in the defining congruences of the finite orthogonal groups.
    int t_L() const
    {
        switch (kind) {
        case jordan_kind::diagonal:
            return e();
        case jordan_kind::hyperbolic:
            return 0;
        case jordan_kind::even:
            return e() - t_alpha();
        }
        return 0;
    }

    /// Jordan Gram matrix without the factor c.
    padic_matrix normalized_gram() const
    {
        const padic zero(p, precision, 0), one(p, precision, 1);
        switch (kind) {
        case jordan_kind::diagonal:
            return {one, zero, zero, alpha};
        case jordan_kind::hyperbolic:
            return {zero, one, one, zero};
        case jordan_kind::even:
            return {alpha, one, one, beta};
        }
        return {};
    }

    static local_form diagonal(std::int64_t p, int precision, std::int64_t c, padic alpha)
    {
        local_form f = base(p, precision, c);
        f.kind = jordan_kind::diagonal;
        f.alpha = alpha;
        f.precision = std::min(precision, alpha.precision());
        if (alpha.is_zero())
            throw insufficient_precision("alpha vanishes to the carried precision");
        return f;
    }
    static local_form diagonal(std::int64_t p, int precision, std::int64_t c, std::int64_t alpha)
    {
        return diagonal(p, precision, c, padic(p, precision, alpha));
    }

    static local_form hyperbolic(std::int64_t p, int precision, std::int64_t c = 1)
    {
        local_form f = base(p, precision, c);
        f.kind = jordan_kind::hyperbolic;
        return f;
    }

    static local_form even(int precision, std::int64_t c, padic alpha, padic beta)
    {
        local_form f = base(2, precision, c);
        f.kind = jordan_kind::even;
        f.alpha = alpha;
        f.beta = beta;
        f.precision = std::min({precision, alpha.precision(), beta.precision()});
        if (alpha.is_zero() || alpha.valuation() != 1 || !beta.valuation_at_least(1))
            throw std::invalid_argument("kind 3 needs ord(alpha) = 1 <= ord(beta)");
        return f;
    }
    static local_form even(int precision, std::int64_t c, std::int64_t alpha, std::int64_t beta)
    {
        return even(precision, c, padic(2, precision, alpha), padic(2, precision, beta));
    }

private:
    static local_form base(std::int64_t p, int precision, std::int64_t c)
    {
        local_form f;
        f.p = p;
        f.precision = precision;
        f.c = padic(p, precision, c);
        f.alpha = padic(p, precision, 0);
        f.beta = padic(p, precision, 0);
        const padic zero(p, precision, 0), one(p, precision, 1);
        f.U = {one, zero, zero, one};
        return f;
    }
};

/// Shift in the Jordan basis: nu = (s1 e1 + s2 e2) / p^t_m.
struct local_shift {
    int t_m = 0;
    padic s1;
    padic s2;

    static local_shift trivial(std::int64_t p, int precision)
    {
        return {0, padic(p, precision, 0), padic(p, precision, 0)};
    }
};

inline padic_matrix multiply(const padic_matrix& a, const padic_matrix& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

inline padic_matrix transpose(const padic_matrix& a) { return {a[0], a[2], a[1], a[3]}; }

inline padic_matrix to_padic(const gram_matrix& g, std::int64_t p, int precision)
{
    return {padic(p, precision, g.a11), padic(p, precision, g.a12), padic(p, precision, g.a12),
            padic(p, precision, g.a22)};
}

namespace detail {

/// Fixed point of y = -(a + b y^2) / 2 in Z_2 for ord(a), ord(b) >= 1 (an isotropic direction).
inline padic dyadic_isotropic_root(const padic& a, const padic& b)
{
    const int n = std::min(a.precision(), b.precision());
    padic y(2, n, 0);
    for (int i = 0; i <= n; ++i) {
        const padic next = -(a + b * y * y).exact_div_p(1);
        y = padic(2, n, static_cast<std::int64_t>(next.residue()));
    }
    return y.with_precision(n - 1);
}

} // namespace detail

/// Jordan form of G over Z_p at absolute precision N.
///
/// Picks v among e1, e2, e1 + e2 with ord Q(v) minimal; if ord Q(v) <= ord B(e1, e2)
/// completes the square to c*D(1, alpha) with c = Q(v). Otherwise p = 2 and the
/// off-diagonal entry dominates, giving c*A(alpha', beta') with c = B(e1, e2); this
/// is kind 3 when ord alpha' = 1 and is split into an isotropic basis otherwise.
inline local_form jordan_form(const gram_matrix& g, std::int64_t p, int N)
{
    require_prime(p);
    if (g.det() == 0)
        throw std::invalid_argument("degenerate Gram matrix");
    const int e = dyadic_order(p);
    const auto det_ord = ord(p, g.det()).value();
    if (N < det_ord + e + 4)
        throw insufficient_precision("jordan_form needs N >= ord(det) + ord(2) + 4");

    struct candidate {
        std::array<std::int64_t, 2> v, w;
    };
    const std::array<candidate, 3> candidates{{{{1, 0}, {0, 1}}, {{0, 1}, {-1, 0}}, {{1, 1}, {0, 1}}}};
    auto Q = [&](const std::array<std::int64_t, 2>& x) {
        return g.a11 * x[0] * x[0] + 2 * g.a12 * x[0] * x[1] + g.a22 * x[1] * x[1];
    };
    auto B = [&](const std::array<std::int64_t, 2>& x, const std::array<std::int64_t, 2>& y) {
        return g.a11 * x[0] * y[0] + g.a12 * (x[0] * y[1] + x[1] * y[0]) + g.a22 * x[1] * y[1];
    };

    const candidate* best = nullptr;
    extended_valuation best_ord = extended_valuation::infinity();
    for (const auto& cand : candidates) {
        const auto o = ord(p, Q(cand.v));
        if (best == nullptr || o < best_ord) {
            best = &cand;
            best_ord = o;
        }
    }

    if (best_ord <= ord(p, g.a12)) {
        const std::int64_t q = Q(best->v);
        const std::int64_t b = B(best->v, best->w);
        const int k = static_cast<int>(best_ord.value());
        const padic q_unit_inv = padic(p, N, q).unit_part().inverse();
        // w' = w - (b / q) v
        const padic ratio = padic(p, N, b).exact_div_p(k) * q_unit_inv;
        // alpha = det(G) / q^2; the basis change has determinant 1
        const padic alpha = padic(p, N, g.det()).exact_div_p(2 * k) * q_unit_inv * q_unit_inv;
        local_form f = local_form::diagonal(p, N, q, alpha);
        const int n = std::min(ratio.precision(), alpha.precision());
        const auto& v = best->v;
        const auto& w = best->w;
        f.U = {padic(p, n, v[0]), padic(p, n, w[0]) - ratio * v[0], padic(p, n, v[1]),
               padic(p, n, w[1]) - ratio * v[1]};
        f.precision = std::min(f.precision, n);
        return f;
    }

    // p = 2, the off-diagonal entry strictly minimizes the valuation.
    if (p != 2)
        throw invariant_breach("off-diagonal domination at an odd prime");
    const int j = static_cast<int>(ord(p, g.a12).value());
    const padic c_unit_inv = padic(p, N, g.a12).unit_part().inverse();
    padic a1 = padic(p, N, g.a11).exact_div_p(j) * c_unit_inv;
    padic b1 = padic(p, N, g.a22).exact_div_p(j) * c_unit_inv;
    const int n = a1.precision();
    padic_matrix swap = {padic(p, n, 1), padic(p, n, 0), padic(p, n, 0), padic(p, n, 1)};
    if (a1.valuation_min(n) > b1.valuation_min(n)) {
        std::swap(a1, b1);
        swap = {padic(p, n, 0), padic(p, n, 1), padic(p, n, 1), padic(p, n, 0)};
    }

    if (a1.valuation_min(2) == 1) {
        local_form f = local_form::even(n, g.a12, a1, b1);
        f.U = swap;
        return f;
    }

    // ord(alpha') >= 2: A(alpha', beta') is A(0,0) or A(2, 2 rho) by the square class of -det.
    const padic minus_det = -(a1 * b1 - 1);
    if (minus_det.residue_mod(3) != 1)
        throw invariant_breach("ord(alpha') >= 2 with -det not a square: not reachable over Q_2");
    const padic y = detail::dyadic_isotropic_root(a1, b1); // f1 = e1 + y e2
    const padic x = detail::dyadic_isotropic_root(b1, a1); // f2' = x e1 + e2
    const int m = std::min(x.precision(), y.precision());
    const padic one(p, m, 1);
    // f1^T A(a1, b1) f2', a unit
    const padic cross = a1 * x + one + y * (x + b1);
    const padic cross_inv = cross.inverse();
    const padic_matrix local = {one, x * cross_inv, y, cross_inv};
    local_form f = local_form::hyperbolic(p, m, g.a12);
    f.U = multiply(swap, local);
    f.precision = std::min(f.precision, f.U[1].precision());
    return f;
}

/// Shift data (t_m, s1, s2) of X in the Jordan basis of F.
inline local_shift localize_shift(const shifted_lattice& X, const local_form& F)
{
    const auto p = F.p;
    const int t_m = static_cast<int>(ord(p, X.conductor()).value());
    if (F.precision < t_m + 4)
        throw insufficient_precision("localize_shift needs precision >= ord(conductor) + 4");
    const std::int64_t pt = ipow(p, t_m);
    const int n = F.precision;
    const padic w1(p, n, X.shift()[0] * pt);
    const padic w2(p, n, X.shift()[1] * pt);
    const padic d_inv = det(F.U).inverse();
    // U^{-1} = adj(U) / det(U)
    local_shift s;
    s.t_m = t_m;
    s.s1 = (F.U[3] * w1 - F.U[1] * w2) * d_inv;
    s.s2 = (F.U[0] * w2 - F.U[2] * w1) * d_inv;
    return s;
}

// ---------------------------------------------------------------------------
// Precision policy

/// Hard cap on p-adic digits: SHIFTED_GENUS_MAX_PRECISION (default 64), never above the word limit.
inline int max_precision(std::int64_t p)
{
    int cap = 64;
    if (const char* env = std::getenv("SHIFTED_GENUS_MAX_PRECISION")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            cap = static_cast<int>(v);
    }
    return std::min(cap, word_precision_limit(p));
}

inline int default_precision(const gram_matrix& g, std::int64_t p, std::int64_t conductor)
{
    return static_cast<int>(ord(p, g.det()).value() + ord(p, 2 * conductor).value() + 6);
}

/// Run f(N) from the default precision, doubling N on insufficient_precision up to the cap.
template <class F>
auto with_precision_retry(std::int64_t p, int start, F&& f)
{
    const int cap = max_precision(p);
    int n = std::min(start, cap);
    for (;;) {
        try {
            return f(n);
        } catch (const insufficient_precision&) {
            if (n >= cap)
                throw;
            n = std::min(2 * n, cap);
        }
    }
}

} // namespace shifted_genus
