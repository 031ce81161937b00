#pragma once

// Positive definite binary quadratic forms: reduction, reduced-form enumeration,
// genus keys, the proper class count in the genus of a lattice, and automorphisms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <vector>

#include "shifted_genus/errors.hpp"
#include "shifted_genus/lattice.hpp"

namespace shifted_genus {

/// A x^2 + B xy + C y^2.
struct bq_form {
    std::int64_t A = 0;
    std::int64_t B = 0;
    std::int64_t C = 0;

    std::int64_t disc() const { return B * B - 4 * A * C; }
    bool positive_definite() const { return A > 0 && disc() < 0; }
    bool primitive() const { return std::gcd(std::gcd(A, B), C) == 1; }
    bool reduced() const
    {
        const std::int64_t b = B < 0 ? -B : B;
        if (!(b <= A && A <= C))
            return false;
        if ((b == A || A == C) && B < 0)
            return false;
        return true;
    }
    std::int64_t operator()(std::int64_t x, std::int64_t y) const { return A * x * x + B * x * y + C * y * y; }

    friend auto operator<=>(const bq_form&, const bq_form&) = default;
    friend std::ostream& operator<<(std::ostream& os, const bq_form& f)
    {
        return os << "(" << f.A << "," << f.B << "," << f.C << ")";
    }
};

/// Binary form of a Gram matrix: Q(x e1 + y e2) = a11 x^2 + 2 a12 xy + a22 y^2.
inline bq_form to_form(const gram_matrix& g) { return {g.a11, 2 * g.a12, g.a22}; }

inline bq_form primitive_part(const bq_form& f)
{
    const std::int64_t c = std::gcd(std::gcd(f.A, f.B), f.C);
    return {f.A / c, f.B / c, f.C / c};
}

/// The reduced form properly equivalent to f.
inline bq_form gauss_reduce(bq_form f)
{
    if (!f.positive_definite())
        throw not_positive_definite("gauss_reduce: form is not positive definite");
    const std::int64_t D = f.disc();
    for (;;) {
        // b into (-a, a]
        const std::int64_t two_a = 2 * f.A;
        std::int64_t k = (f.A - f.B) / two_a;
        if ((f.A - f.B) % two_a != 0 && (f.A - f.B) < 0)
            --k;
        f.B += two_a * k;
        f.C = (f.B * f.B - D) / (4 * f.A);
        if (f.C < f.A) {
            f = {f.C, -f.B, f.A};
            continue;
        }
        break;
    }
    if (f.A == f.C && f.B < 0)
        f.B = -f.B;
    return f;
}

/// All primitive reduced forms of discriminant D < 0.
inline std::vector<bq_form> enumerate_reduced(std::int64_t D)
{
    if (D >= 0 || ((D % 4) + 4) % 4 > 1)
        throw bad_discriminant("discriminant must be negative and 0 or 1 mod 4, got " + std::to_string(D));
    std::vector<bq_form> out;
    for (std::int64_t a = 1; 3 * a * a <= -D; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            const std::int64_t num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            const bq_form f{a, b, num / (4 * a)};
            if (f.C < a || !f.reduced() || !f.primitive())
                continue;
            out.push_back(f);
        }
    }
    return out;
}

/// Units mod 8|D| represented by a primitive positive definite form.
struct genus_key {
    std::int64_t modulus = 0;
    std::vector<std::int64_t> residues;

    friend bool operator==(const genus_key&, const genus_key&) = default;
    friend auto operator<=>(const genus_key&, const genus_key&) = default;
};

inline genus_key make_genus_key(const bq_form& f)
{
    const std::int64_t M = 8 * (f.disc() < 0 ? -f.disc() : f.disc());
    std::vector<char> seen(static_cast<std::size_t>(M), 0);
    const std::int64_t a = ((f.A % M) + M) % M, b = ((f.B % M) + M) % M, c = ((f.C % M) + M) % M;
    // Values mod M are periodic in x and y with period M.
    for (std::int64_t x = 0; x < M; ++x) {
        const std::int64_t ax2 = a * x % M * x % M;
        const std::int64_t bx = b * x % M;
        for (std::int64_t y = 0; y < M; ++y) {
            const std::int64_t v = (ax2 + bx * y + c * y % M * y) % M;
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    genus_key k{M, {}};
    for (std::int64_t r = 1; r < M; ++r)
        if (seen[static_cast<std::size_t>(r)] && std::gcd(r, M) == 1)
            k.residues.push_back(r);
    return k;
}

/// Reduced forms of D grouped by genus.
inline std::map<genus_key, std::vector<bq_form>> genus_partition(std::int64_t D)
{
    std::map<genus_key, std::vector<bq_form>> out;
    for (const auto& f : enumerate_reduced(D))
        out[make_genus_key(f)].push_back(f);
    return out;
}

/// Proper classes in the genus of the lattice with Gram matrix g.
inline std::int64_t h_plus_lattice(const gram_matrix& g)
{
    if (!g.positive_definite())
        throw not_positive_definite("lattice is not positive definite");
    const bq_form f = gauss_reduce(primitive_part(to_form(g)));
    const auto key = make_genus_key(f);
    std::int64_t n = 0;
    for (const auto& r : enumerate_reduced(f.disc()))
        if (make_genus_key(r) == key)
            ++n;
    return n;
}

/// Integer 2x2 matrix, row-major.
using int_matrix = std::array<std::int64_t, 4>;

/// Vectors v with Q(v) = n for a positive definite Gram matrix.
inline std::vector<std::array<std::int64_t, 2>> vectors_of_norm(const gram_matrix& g, std::int64_t n)
{
    const auto d = static_cast<long double>(g.det());
    const auto xmax = static_cast<std::int64_t>(std::floor(std::sqrt(n * g.a22 / d))) + 1;
    const auto ymax = static_cast<std::int64_t>(std::floor(std::sqrt(n * g.a11 / d))) + 1;
    std::vector<std::array<std::int64_t, 2>> out;
    for (std::int64_t x = -xmax; x <= xmax; ++x)
        for (std::int64_t y = -ymax; y <= ymax; ++y)
            if (g.a11 * x * x + 2 * g.a12 * x * y + g.a22 * y * y == n)
                out.push_back({x, y});
    return out;
}

/// O+(L): integral M with M^T G M = G and det M = 1.
inline std::vector<int_matrix> automorphisms(const gram_matrix& g)
{
    if (!g.positive_definite())
        throw not_positive_definite("automorphisms: lattice is not positive definite");
    std::vector<int_matrix> out;
    const auto firsts = vectors_of_norm(g, g.a11);
    const auto seconds = vectors_of_norm(g, g.a22);
    for (const auto& v : firsts) {
        for (const auto& w : seconds) {
            if (v[0] * w[1] - v[1] * w[0] != 1)
                continue;
            const std::int64_t b = g.a11 * v[0] * w[0] + g.a12 * (v[0] * w[1] + v[1] * w[0]) + g.a22 * v[1] * w[1];
            if (b == g.a12)
                out.push_back({v[0], w[0], v[1], w[1]});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace shifted_genus
