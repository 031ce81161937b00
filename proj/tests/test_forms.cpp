#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shifted_genus/forms.hpp"

using namespace shifted_genus;

TEST(Reduce, Examples)
{
    EXPECT_EQ(gauss_reduce({1, 0, 1}), (bq_form{1, 0, 1}));
    EXPECT_EQ(gauss_reduce({2, 2, 3}), (bq_form{2, 2, 3}));
    EXPECT_EQ(gauss_reduce({3, 2, 5}), (bq_form{3, 2, 5}));
    EXPECT_EQ(gauss_reduce({5, 0, 1}), (bq_form{1, 0, 5}));
    EXPECT_EQ(gauss_reduce({2, -1, 3}), (bq_form{2, -1, 3}));
    EXPECT_THROW(gauss_reduce({1, 3, 1}), not_positive_definite);
}

TEST(Reduce, InvariantUnderProperChangeOfBasis)
{
    const std::vector<std::array<std::int64_t, 4>> moves{{1, 1, 0, 1}, {0, -1, 1, 0}, {2, 1, 1, 1}, {1, -3, 0, 1}};
    for (const bq_form f : {bq_form{1, 0, 1}, bq_form{2, 1, 3}, bq_form{3, 2, 5}, bq_form{2, 2, 3}}) {
        for (const auto& [p, q, r, s] : moves) {
            // f(px + qy, rx + sy)
            const bq_form g{f(p, r), 2 * f.A * p * q + f.B * (p * s + q * r) + 2 * f.C * r * s, f(q, s)};
            EXPECT_EQ(g.disc(), f.disc());
            EXPECT_EQ(gauss_reduce(g), gauss_reduce(f));
        }
    }
}

TEST(Enumerate, Examples)
{
    EXPECT_EQ(enumerate_reduced(-4), (std::vector<bq_form>{{1, 0, 1}}));
    const auto d20 = enumerate_reduced(-20);
    EXPECT_EQ(d20.size(), 2u);
    EXPECT_NE(std::find(d20.begin(), d20.end(), bq_form{1, 0, 5}), d20.end());
    EXPECT_NE(std::find(d20.begin(), d20.end(), bq_form{2, 2, 3}), d20.end());
    const auto d23 = enumerate_reduced(-23);
    EXPECT_EQ(d23.size(), 3u);
    EXPECT_NE(std::find(d23.begin(), d23.end(), bq_form{2, -1, 3}), d23.end());
    EXPECT_EQ(enumerate_reduced(-56).size(), 4u);
    EXPECT_THROW(enumerate_reduced(-5), bad_discriminant);
    EXPECT_THROW(enumerate_reduced(8), bad_discriminant);
}

TEST(Enumerate, MatchesBoundedScan)
{
    for (std::int64_t D = -3; D >= -400; --D) {
        if (((D % 4) + 4) % 4 > 1)
            continue;
        EXPECT_EQ(static_cast<std::int64_t>(enumerate_reduced(D).size()), oracle::class_count(D)) << "D=" << D;
    }
}

TEST(Genus, PartitionOfMinus20)
{
    const auto part = genus_partition(-20);
    ASSERT_EQ(part.size(), 2u);
    for (const auto& [key, forms] : part)
        EXPECT_EQ(forms.size(), 1u);
}

TEST(Genus, EqualGeneraForEquivalentForms)
{
    EXPECT_EQ(make_genus_key({2, 1, 3}), make_genus_key({2, -1, 3}));
    EXPECT_NE(make_genus_key({1, 0, 5}), make_genus_key({2, 2, 3}));
    EXPECT_EQ(make_genus_key({1, 0, 1}), make_genus_key(gauss_reduce({5, 6, 2})));
}

TEST(Genus, SizesDivideClassNumberEvenly)
{
    // All genera of a discriminant have the same number of classes, a power-of-two count of genera.
    for (std::int64_t D : {-20, -23, -56, -84, -120, -420, -231}) {
        const auto part = genus_partition(D);
        const auto n = part.begin()->second.size();
        for (const auto& [key, forms] : part)
            EXPECT_EQ(forms.size(), n) << "D=" << D;
        const auto g = part.size();
        EXPECT_EQ(g & (g - 1), 0u) << "D=" << D;
    }
    EXPECT_EQ(genus_partition(-420).size(), 8u);
}

TEST(HPlus, Examples)
{
    EXPECT_EQ(h_plus_lattice({1, 0, 1}), 1);
    EXPECT_EQ(h_plus_lattice({1, 0, 5}), 1);
    EXPECT_EQ(h_plus_lattice({2, 1, 3}), 1);
    EXPECT_EQ(h_plus_lattice({1, 0, 14}), 2);
    EXPECT_EQ(h_plus_lattice({2, 2, 4}), 1);
    EXPECT_EQ(h_plus_lattice({2, 1, 12}), 3);
    EXPECT_THROW(h_plus_lattice({1, 2, 1}), not_positive_definite);
}

TEST(Automorphisms, Examples)
{
    EXPECT_EQ(automorphisms({1, 0, 1}).size(), 4u);
    EXPECT_EQ(automorphisms({2, 1, 2}).size(), 6u);
    EXPECT_EQ(automorphisms({1, 0, 3}).size(), 2u);
}

TEST(Automorphisms, MatchExhaustiveScan)
{
    for (const gram_matrix g : {gram_matrix{1, 0, 1}, gram_matrix{2, 1, 2}, gram_matrix{1, 0, 3}, gram_matrix{2, 1, 3},
                                gram_matrix{3, 1, 3}, gram_matrix{1, 0, 2}, gram_matrix{4, 2, 4}}) {
        const auto aut = automorphisms(g);
        EXPECT_EQ(static_cast<int>(aut.size()), oracle::automorphism_count(g.a11, g.a12, g.a22, 3));
        for (const auto& m : aut) {
            EXPECT_EQ(g.transformed(m), g);
            EXPECT_EQ(m[0] * m[3] - m[1] * m[2], 1);
        }
    }
}
