#include <gtest/gtest.h>

#include "edi/metric.hpp"
#include "oracle.hpp"

using namespace edi;

namespace {

Vocabulary qr() { return Vocabulary({"q", "r"}); }
World w(const char* s, const Vocabulary& v) { return parse_world(s, v); }

PseudoDistance table(const Vocabulary& v, std::vector<std::int64_t> t) { return PseudoDistance(v, std::move(t)); }

} // namespace

TEST(Hamming, Examples) {
    auto v = qr();
    auto d = hamming(v);
    EXPECT_EQ(d(w("11", v), w("10", v)), 1);
    EXPECT_EQ(d(w("11", v), w("00", v)), 2);
    EXPECT_EQ(d(w("01", v), w("01", v)), 0);
    auto v3 = Vocabulary::numbered(3);
    EXPECT_EQ(hamming(v3)(w("101", v3), w("010", v3)), 3);
}

TEST(Hamming, IsAFaithfulPseudoDistanceUpToFourAtoms) {
    for (std::size_t n = 1; n <= 4; ++n) {
        auto r = validate_pseudo_distance(hamming(Vocabulary::numbered(n)));
        for (const auto& c : r.checks) EXPECT_TRUE(c.holds) << c.name << " at n=" << n;
        EXPECT_TRUE(hamming(Vocabulary::numbered(n)).faithful());
    }
}

TEST(Validate, WitnessesViolations) {
    auto v = qr();
    // bits order in the table: index a*4+b with a,b world bits
    auto h = hamming(v).table();
    auto bad_identity = h;
    bad_identity[1 * 4 + 1] = 1;
    auto r = validate_pseudo_distance(table(v, bad_identity));
    EXPECT_FALSE(r["identity"].holds);
    ASSERT_EQ(r["identity"].witness.size(), 1u);
    EXPECT_EQ(render(r["identity"].witness[0], v), "01");
    EXPECT_TRUE(r["symmetry"].holds);

    // d(11,10)=1, d(10,00)=1, d(11,00)=5
    auto bad_triangle = h;
    bad_triangle[3 * 4 + 0] = bad_triangle[0 * 4 + 3] = 5;
    r = validate_pseudo_distance(table(v, bad_triangle));
    EXPECT_FALSE(r["triangle-inequality"].holds);
    ASSERT_EQ(r["triangle-inequality"].witness.size(), 3u);
    EXPECT_EQ(render(r["triangle-inequality"].witness[0], v), "11");
    EXPECT_EQ(render(r["triangle-inequality"].witness[2], v), "00");
    EXPECT_FALSE(r.is_pseudo_distance());

    auto asym = h;
    asym[3 * 4 + 2] = 2;
    r = validate_pseudo_distance(table(v, asym));
    EXPECT_FALSE(r["symmetry"].holds);

    auto neg = h;
    neg[3 * 4 + 2] = neg[2 * 4 + 3] = -1;
    r = validate_pseudo_distance(table(v, neg));
    EXPECT_FALSE(r["non-negativity"].holds);
    EXPECT_FALSE(r["faithfulness"].holds);
}

TEST(MinWorlds, Examples) {
    auto v = qr();
    auto d = hamming(v);
    auto notq = parse_formula("!q", v);
    EXPECT_EQ(render(min_worlds(notq, w("11", v), d), v), "{01}");
    EXPECT_EQ(render(min_worlds(notq, w("00", v), d), v), "{00}");
    EXPECT_EQ(render(min_worlds(notq, w("01", v), d), v), "{01}");
    EXPECT_THROW(min_worlds(parse_formula("false", v), w("11", v), d), EmptyEvidence);
}

TEST(MinWorlds, NonEmptySubsetOfEvidenceEverywhere) {
    auto v = Vocabulary::numbered(3);
    auto d = hamming(v);
    for (std::uint64_t m = 1; m < 256; ++m) {
        auto a = WorldSet::from_mask(m, 8);
        for (std::uint32_t x = 0; x < 8; ++x) {
            auto s = min_worlds(a, World{x}, d);
            EXPECT_FALSE(s.empty());
            EXPECT_TRUE(s.subset_of(a));
            EXPECT_TRUE(s.contains(li_closest(a, World{x}, d)));
        }
    }
}

TEST(DMax, Examples) {
    EXPECT_EQ(d_max(hamming(qr())), 2);
    EXPECT_EQ(d_max(hamming(Vocabulary::numbered(3))), 3);
    EXPECT_EQ(d_max(hamming(Vocabulary({"p"}))), 1);
    EXPECT_EQ(d_max(PseudoDistance(Vocabulary({"p"}), {0, 0, 0, 0})), 0);
}

TEST(LiClosest, Examples) {
    auto v = qr();
    auto d = hamming(v);
    EXPECT_EQ(render(li_closest(parse_formula("!q", v), w("11", v), d), v), "01");
    EXPECT_EQ(render(li_closest(parse_formula("!q", v), w("00", v), d), v), "00");
    // candidates 10, 01 (distance 1) and 00 (distance 2): tie goes to 10
    EXPECT_EQ(render(li_closest(parse_formula("!q | (q & !r)", v), w("11", v), d), v), "10");
}

TEST(LiClosest, MatchesBruteForce) {
    for (unsigned n = 1; n <= 3; ++n) {
        auto v = Vocabulary::numbered(n);
        auto d = hamming(v);
        const unsigned N = 1u << n;
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << N); ++m)
            for (unsigned x = 0; x < N; ++x) {
                unsigned expect = ((m >> x) & 1u) ? x : oracle::closest(m, x, N);
                EXPECT_EQ(li_closest(WorldSet::from_mask(m, N), World{x}, d).bits, expect);
            }
    }
}
