#include <gtest/gtest.h>

#include "shifted_genus/lattice.hpp"

using namespace shifted_genus;

namespace {

// U^T G U == c * J with J the normalized Jordan Gram matrix.
void expect_round_trip(const gram_matrix& g, std::int64_t p, int N)
{
    const auto F = jordan_form(g, p, N);
    const auto lhs = multiply(transpose(F.U), multiply(to_padic(g, p, N), F.U));
    const auto J = F.normalized_gram();
    for (int i = 0; i < 4; ++i)
        EXPECT_TRUE(congruent(lhs[static_cast<std::size_t>(i)], F.c * J[static_cast<std::size_t>(i)]))
            << "G=(" << g.a11 << "," << g.a12 << "," << g.a22 << ") p=" << p << " entry " << i;
    EXPECT_TRUE(det(F.U).is_unit());
}

} // namespace

TEST(Gram, ScaleContent)
{
    EXPECT_EQ(scale_content({2, 0, 2}), 2);
    EXPECT_EQ(scale_content({1, 0, 1}), 1);
    EXPECT_EQ(scale_content({6, 3, 15}), 3);
    EXPECT_EQ(primitive_part(gram_matrix{6, 3, 15}), (gram_matrix{2, 1, 5}));
}

TEST(Gram, BasicPredicates)
{
    EXPECT_TRUE((gram_matrix{1, 0, 1}).positive_definite());
    EXPECT_FALSE((gram_matrix{1, 2, 1}).positive_definite());
    EXPECT_TRUE((gram_matrix{1, 0, 1}).det_condition());
    EXPECT_FALSE((gram_matrix{0, 1, 0}).det_condition());
    EXPECT_EQ((gram_matrix{1, 0, 1}).transformed({1, 1, 0, 1}), (gram_matrix{1, 1, 2}));
}

TEST(ShiftedLattice, Conductor)
{
    EXPECT_EQ(shifted_lattice({1, 0, 1}, rational(1, 5), rational(0)).conductor(), 5);
    EXPECT_EQ(shifted_lattice({1, 0, 1}, rational(0), rational(0)).conductor(), 1);
    EXPECT_EQ(shifted_lattice({1, 0, 1}, rational(1, 4), rational(1, 6)).conductor(), 12);
}

TEST(ShiftedLattice, ShiftIsReducedModuloL)
{
    const shifted_lattice X({1, 0, 1}, rational(-1, 3), rational(7, 2));
    EXPECT_EQ(X.shift()[0], rational(2, 3));
    EXPECT_EQ(X.shift()[1], rational(1, 2));
    EXPECT_THROW(shifted_lattice({1, 1, 1}, rational(0), rational(0)), std::invalid_argument);
}

TEST(Jordan, Examples)
{
    const auto F3 = jordan_form({2, 1, 2}, 3, 10);
    EXPECT_EQ(F3.kind, jordan_kind::diagonal);
    EXPECT_TRUE(congruent(F3.c, padic(3, 10, 2)));
    EXPECT_TRUE(congruent(F3.alpha, padic(3, 10, rational(3, 4))));
    EXPECT_EQ(F3.alpha.valuation(), 1);

    const auto F2 = jordan_form({2, 1, 2}, 2, 10);
    EXPECT_EQ(F2.kind, jordan_kind::even);
    EXPECT_TRUE(congruent(F2.c, padic(2, 10, 1)));
    EXPECT_TRUE(congruent(F2.alpha, padic(2, 10, 2)));
    EXPECT_TRUE(congruent(F2.beta, padic(2, 10, 2)));

    const auto H = jordan_form({0, 1, 0}, 2, 10);
    EXPECT_EQ(H.kind, jordan_kind::hyperbolic);
    EXPECT_TRUE(congruent(H.c, padic(2, 10, 1)));

    const auto I7 = jordan_form({1, 0, 1}, 7, 8);
    EXPECT_EQ(I7.kind, jordan_kind::diagonal);
    EXPECT_TRUE(congruent(I7.alpha, padic(7, 8, 1)));
}

TEST(Jordan, RoundTripOverManyForms)
{
    for (std::int64_t a = -6; a <= 6; ++a)
        for (std::int64_t b = -4; b <= 4; ++b)
            for (std::int64_t c = -6; c <= 6; ++c) {
                const gram_matrix g{a, b, c};
                if (g.det() == 0)
                    continue;
                for (std::int64_t p : {2, 3, 5, 7}) {
                    const int N = static_cast<int>(ord(p, g.det()).value()) + 12;
                    expect_round_trip(g, p, N);
                }
            }
}

TEST(Jordan, EvenUnimodularAtTwo)
{
    // Off-diagonal entry of least valuation: kind 2 when both scaled diagonal entries are in 4Z_2.
    for (const gram_matrix g : {gram_matrix{0, 1, 0}, gram_matrix{4, 1, 0}, gram_matrix{4, 1, 8}, gram_matrix{4, 3, 12}}) {
        const auto F = jordan_form(g, 2, 16);
        EXPECT_EQ(F.kind, jordan_kind::hyperbolic) << g.a11 << "," << g.a12 << "," << g.a22;
        expect_round_trip(g, 2, 16);
    }
    // An entry of valuation exactly one keeps the A(alpha, beta) shape, isotropic or not.
    for (const gram_matrix g : {gram_matrix{2, 1, 0}, gram_matrix{2, 1, 4}, gram_matrix{4, 3, 2}, gram_matrix{2, 3, 4}}) {
        const auto F = jordan_form(g, 2, 16);
        EXPECT_EQ(F.kind, jordan_kind::even) << g.a11 << "," << g.a12 << "," << g.a22;
        EXPECT_EQ(F.t_alpha(), 1);
        expect_round_trip(g, 2, 16);
    }
}

TEST(Jordan, KindIsScaleInvariant)
{
    for (const gram_matrix g : {gram_matrix{1, 0, 1}, gram_matrix{2, 1, 2}, gram_matrix{2, 1, 3}, gram_matrix{1, 0, 5}})
        for (std::int64_t k : {2, 3, 4, 9})
            for (std::int64_t p : {2, 3, 5}) {
                const auto F = jordan_form(g, p, 20);
                const auto G = jordan_form(g.scaled(k), p, 20);
                EXPECT_EQ(F.kind, G.kind);
                EXPECT_EQ(F.t_alpha(), G.t_alpha());
                EXPECT_EQ(G.c.valuation(), F.c.valuation() + ord(p, k).value());
            }
}

TEST(Jordan, InsufficientPrecisionIsReported)
{
    EXPECT_THROW(jordan_form({1, 0, 1}, 2, 3), insufficient_precision);
    EXPECT_THROW(jordan_form({1, 0, 625}, 5, 4), insufficient_precision);
}

TEST(Jordan, TLByKind)
{
    EXPECT_EQ(local_form::diagonal(2, 10, 1, 3).t_L(), 1);
    EXPECT_EQ(local_form::diagonal(5, 10, 1, 3).t_L(), 0);
    EXPECT_EQ(local_form::hyperbolic(2, 10).t_L(), 0);
    EXPECT_EQ(local_form::even(10, 1, 2, 2).t_L(), 0);
    EXPECT_THROW(local_form::even(10, 1, 4, 2), std::invalid_argument);
}

TEST(LocalizeShift, Examples)
{
    {
        const shifted_lattice X({1, 0, 1}, rational(1, 5), rational(0));
        const auto S = localize_shift(X, jordan_form(X.gram(), 5, 10));
        EXPECT_EQ(S.t_m, 1);
        EXPECT_TRUE(congruent(S.s1, padic(5, 10, 1)));
        EXPECT_TRUE(S.s2.is_zero());
    }
    {
        const shifted_lattice X({1, 0, 1}, rational(1, 3), rational(2, 3));
        const auto S = localize_shift(X, jordan_form(X.gram(), 3, 10));
        EXPECT_EQ(S.t_m, 1);
        EXPECT_TRUE(congruent(S.s1, padic(3, 10, 1)));
        EXPECT_TRUE(congruent(S.s2, padic(3, 10, 2)));
    }
    {
        const shifted_lattice X({1, 0, 1}, rational(1, 2), rational(1, 2));
        EXPECT_EQ(localize_shift(X, jordan_form(X.gram(), 5, 10)).t_m, 0);
    }
}

TEST(LocalizeShift, RecoversShiftThroughU)
{
    // U s / p^t_m == nu modulo Z_p^2 with the cofactor of the conductor inverted.
    const shifted_lattice X({2, 1, 3}, rational(3, 8), rational(5, 12));
    for (std::int64_t p : {2, 3}) {
        const auto F = jordan_form(X.gram(), p, 20);
        const auto S = localize_shift(X, F);
        const std::int64_t pt = ipow(p, S.t_m);
        const padic w1 = F.U[0] * S.s1 + F.U[1] * S.s2;
        const padic w2 = F.U[2] * S.s1 + F.U[3] * S.s2;
        EXPECT_TRUE(congruent(w1, padic(p, 20, X.shift()[0] * pt)));
        EXPECT_TRUE(congruent(w2, padic(p, 20, X.shift()[1] * pt)));
    }
}

TEST(Precision, EnvironmentCap)
{
    ::setenv("SHIFTED_GENUS_MAX_PRECISION", "5", 1);
    EXPECT_EQ(max_precision(3), 5);
    int calls = 0;
    EXPECT_THROW(with_precision_retry(3, 2,
                                      [&](int n) -> int {
                                          ++calls;
                                          throw insufficient_precision("need more than " + std::to_string(n));
                                      }),
                 insufficient_precision);
    EXPECT_EQ(calls, 3); // 2, 4, 5
    ::unsetenv("SHIFTED_GENUS_MAX_PRECISION");
    EXPECT_EQ(max_precision(3), 39);
    EXPECT_EQ(max_precision(5), 26);
    EXPECT_EQ(max_precision(2), 62);
}
