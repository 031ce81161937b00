#pragma once

// Proper class numbers of positive definite shifted binary lattices over Q.
//
//   h+(X) = h+(L) / [O+(L) : O+(X)] * prod_{p | m} [O+(L_p) : O+(X_p)]
//
// and, when the dyadic conductor is large enough, the closed expression
//
//   h+(X) = h+(L) / [O+(L) : O+(X)] * beta_2 * m / gcd(m, I_X) * prod_{p | m odd} (1 - eta(-alpha_p) / p).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "shifted_genus/arith.hpp"
#include "shifted_genus/forms.hpp"
#include "shifted_genus/lattice.hpp"
#include "shifted_genus/local_density.hpp"

namespace shifted_genus {

/// Per-prime data at a prime dividing the conductor.
struct local_data {
    local_form form;
    local_shift shift;
    local_index_report report;
};

struct class_number_breakdown {
    gram_matrix gram;            ///< primitive (scale-normalized) Gram matrix
    std::int64_t content = 1;    ///< scale removed from the input
    std::array<rational, 2> shift;
    std::int64_t h_L = 0;
    int aut_L = 0;
    std::int64_t stab_index = 0;
    std::vector<local_data> locals;
    std::int64_t h_X = 0;
    bool closed_applicable = false;
    std::optional<rational> closed_value;
    std::int64_t I_X = 1;
    rational beta2{1};
    std::int64_t norm_M = 1;
};

/// Stabilizer size of nu = (n1, n2)/m under a group of integral matrices, acting mod m.
inline std::int64_t fixing_count(const std::vector<int_matrix>& group, std::int64_t n1, std::int64_t n2,
                                 std::int64_t m)
{
    std::int64_t k = 0;
    for (const auto& M : group) {
        const std::int64_t a = M[0] * n1 + M[1] * n2 - n1;
        const std::int64_t b = M[2] * n1 + M[3] * n2 - n2;
        if (a % m == 0 && b % m == 0)
            ++k;
    }
    return k;
}

/// Numerators of nu over its conductor m.
inline std::array<std::int64_t, 2> shift_numerators(const shifted_lattice& X)
{
    const std::int64_t m = X.conductor();
    return {X.shift()[0].numerator() * (m / X.shift()[0].denominator()),
            X.shift()[1].numerator() * (m / X.shift()[1].denominator())};
}

inline std::int64_t stabilizer_index(const shifted_lattice& X)
{
    const auto aut = automorphisms(X.gram());
    const auto n = shift_numerators(X);
    return static_cast<std::int64_t>(aut.size()) / fixing_count(aut, n[0], n[1], X.conductor());
}

/// Exponent min(ord s1, ord(s1^2 + alpha s2^2)) at a kind-1 prime.
inline int ideal_exponent(const local_form& F, const local_shift& S)
{
    if (F.kind != jordan_kind::diagonal)
        return 0;
    const padic a = S.s1;
    const padic b = S.s1 * S.s1 + F.alpha * S.s2 * S.s2;
    if (a.is_zero() && b.is_zero())
        throw insufficient_precision("I_X exponent: both valuations exceed the precision");
    if (a.is_zero())
        return b.valuation();
    if (b.is_zero())
        return a.valuation();
    return std::min(a.valuation(), b.valuation());
}

/// Caches everything that depends only on the lattice, for repeated shift queries.
class class_number_engine {
public:
    explicit class_number_engine(const gram_matrix& g)
    {
        if (!g.positive_definite())
            throw not_positive_definite("Gram matrix is not positive definite");
        content_ = scale_content(g);
        gram_ = primitive_part(g);
        h_L_ = h_plus_lattice(gram_);
        aut_ = automorphisms(gram_);
    }

    const gram_matrix& gram() const { return gram_; }
    std::int64_t h_L() const { return h_L_; }
    const std::vector<int_matrix>& automorphism_group() const { return aut_; }

    local_data local(const shifted_lattice& X, std::int64_t p, density_mode mode) const
    {
        const int start = default_precision(gram_, p, X.conductor());
        return with_precision_retry(p, start, [&](int N) {
            local_data d;
            d.form = jordan_form(gram_, p, N);
            d.shift = localize_shift(X, d.form);
            d.report = local_index(d.form, d.shift, mode);
            return d;
        });
    }

    class_number_breakdown compute(const rational& nu1, const rational& nu2,
                                   density_mode mode = density_mode::prefer_closed) const
    {
        const shifted_lattice X(gram_, nu1, nu2);
        class_number_breakdown r;
        r.gram = gram_;
        r.content = content_;
        r.shift = X.shift();
        r.h_L = h_L_;
        r.aut_L = static_cast<int>(aut_.size());
        const std::int64_t m = X.conductor();
        r.norm_M = m;
        const auto n = shift_numerators(X);
        r.stab_index = r.aut_L / fixing_count(aut_, n[0], n[1], m);

        rational h(r.h_L, r.stab_index);
        for (auto p : prime_divisors(m)) {
            r.locals.push_back(local(X, p, mode));
            h *= r.locals.back().report.index;
        }
        if (h.denominator() != 1 || h.numerator() < 1)
            throw invariant_breach("class number " + to_string(h) + " is not a positive integer");
        r.h_X = h.numerator();

        assemble_closed_expression(r);
        return r;
    }

    class_number_breakdown compute(const shifted_lattice& X, density_mode mode = density_mode::prefer_closed) const
    {
        return compute(X.shift()[0], X.shift()[1], mode);
    }

    /// Lexicographically least element of the orbit of (a, b) mod m under O+(L).
    std::array<std::int64_t, 2> canonical_shift(std::int64_t a, std::int64_t b, std::int64_t m) const
    {
        std::array<std::int64_t, 2> best{a, b};
        for (const auto& M : aut_) {
            std::array<std::int64_t, 2> img{((M[0] * a + M[1] * b) % m + m) % m, ((M[2] * a + M[3] * b) % m + m) % m};
            best = std::min(best, img);
        }
        return best;
    }

private:
    void assemble_closed_expression(class_number_breakdown& r) const
    {
        bool applicable = true;
        rational odd_product(1);
        std::int64_t ix = 1;
        std::int64_t gcd_mi = 1;
        for (const auto& d : r.locals) {
            const auto p = d.form.p;
            const int exponent = ideal_exponent(d.form, d.shift);
            ix *= ipow(p, exponent);
            gcd_mi *= ipow(p, std::min(exponent, d.shift.t_m));
            if (p == 2) {
                r.beta2 = d.report.beta_L.value;
                if (d.form.kind == jordan_kind::diagonal && d.shift.t_m < d.form.t_alpha() + 2)
                    applicable = false;
                if (d.form.kind == jordan_kind::even && d.shift.t_m < 2)
                    applicable = false;
            } else {
                odd_product *= rational(1) - rational(eta(-d.form.alpha), p);
            }
        }
        r.I_X = ix;
        r.closed_applicable = applicable;
        if (applicable)
            r.closed_value = rational(r.h_L, r.stab_index) * r.beta2 * rational(r.norm_M, gcd_mi) * odd_product;
    }

    gram_matrix gram_;
    std::int64_t content_ = 1;
    std::int64_t h_L_ = 0;
    std::vector<int_matrix> aut_;
};

inline class_number_breakdown class_number(const shifted_lattice& X, density_mode mode = density_mode::prefer_closed)
{
    return class_number_engine(X.gram()).compute(X, mode);
}

/// The closed class number expression, or nullopt when its dyadic hypotheses fail.
inline std::optional<rational> class_number_closed(const shifted_lattice& X)
{
    return class_number(X).closed_value;
}

/// Product of dyadic lattice densities over 2 | conductor (1 for odd conductor).
inline rational beta2(const shifted_lattice& X) { return class_number(X).beta2; }

inline std::int64_t ideal_I_X(const shifted_lattice& X) { return class_number(X).I_X; }

struct shift_hit {
    std::array<rational, 2> shift;
    std::int64_t conductor;
    std::int64_t h_X;
};

/// Orbit representatives of shifts (a/m, b/m), conductor exactly m <= m_max, with h+(X) = h.
inline std::vector<shift_hit> search_fixed_h(const gram_matrix& g, std::int64_t h, std::int64_t m_max)
{
    std::vector<shift_hit> out;
    if (h < 1)
        return out;
    const class_number_engine engine(g);
    for (std::int64_t m = 1; m <= m_max; ++m) {
        for (std::int64_t a = 0; a < m; ++a) {
            for (std::int64_t b = 0; b < m; ++b) {
                if (std::gcd(std::gcd(a, b), m) != 1)
                    continue;
                if (engine.canonical_shift(a, b, m) != std::array<std::int64_t, 2>{a, b})
                    continue;
                const auto r = engine.compute(rational(a, m), rational(b, m));
                if (r.h_X == h)
                    out.push_back({r.shift, m, r.h_X});
            }
        }
    }
    return out;
}

struct growth_row {
    std::int64_t m;
    std::int64_t norm_M;
    std::int64_t h_X;
};

/// Class numbers along the axis family nu = (1/m, 0).
inline std::vector<growth_row> growth_table(const gram_matrix& g, const std::vector<std::int64_t>& ms)
{
    const class_number_engine engine(g);
    std::vector<growth_row> rows;
    rows.reserve(ms.size());
    for (auto m : ms) {
        const auto r = engine.compute(rational(1, m), rational(0));
        rows.push_back({m, r.norm_M, r.h_X});
    }
    return rows;
}

struct local_audit {
    std::int64_t p;
    rational beta_L_oracle;
    rational beta_X_oracle;
    std::int64_t index_oracle;
    bool agrees;
};

/// Recompute every local factor by counting alone and compare against the reported factors.
inline std::vector<local_audit> audit(const class_number_breakdown& r)
{
    std::vector<local_audit> out;
    for (const auto& d : r.locals) {
        const auto oracle = local_index(d.form, d.shift, density_mode::oracle_only);
        out.push_back({d.form.p, oracle.beta_L.value, oracle.beta_X.value, oracle.index,
                       oracle.beta_L.value == d.report.beta_L.value && oracle.beta_X.value == d.report.beta_X.value
                           && oracle.index == d.report.index});
    }
    return out;
}

} // namespace shifted_genus
