#include <gtest/gtest.h>

#include "edi/belief.hpp"

using namespace edi;

namespace {

Vocabulary km() { return Vocabulary({"book", "mag"}); }
Vocabulary qr() { return Vocabulary({"q", "r"}); }

BeliefState state(const Vocabulary& v, std::vector<const char*> listed) {
    std::vector<Rational> p;
    for (auto s : listed) p.push_back(parse_rational(s));
    return BeliefState::from_canonical(v, p);
}

} // namespace

TEST(BeliefState, ConstructionIsExact) {
    EXPECT_THROW(state(qr(), {"0.3", "0.7", "0", "0.000001"}), InvalidBeliefState);
    EXPECT_THROW(state(qr(), {"1/2", "1/2", "0"}), InvalidBeliefState);
    EXPECT_THROW(state(qr(), {"3/2", "-1/2", "0", "0"}), InvalidBeliefState);
    auto b = state(qr(), {"0.3", "0.7", "0", "0"});
    EXPECT_EQ(b[World{3}], make_rational(3, 10));
    EXPECT_EQ(b.canonical()[1], make_rational(7, 10));
}

TEST(Mass, Examples) {
    auto v = km();
    auto b = state(v, {"0", "1/2", "1/2", "0"});
    EXPECT_EQ(mass(b, parse_formula("book", v)), make_rational(1, 2));
    EXPECT_EQ(mass(b, parse_formula("true", v)), 1);
    auto b37 = state(qr(), {"3/10", "7/10", "0", "0"});
    EXPECT_EQ(mass(b37, parse_formula("!q", qr())), 0);
}

TEST(Mass, AdditiveOverDisjointSets) {
    auto b = state(qr(), {"1/8", "3/8", "1/4", "1/4"});
    for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t c = 0; c < 16; ++c) {
            if (a & c) continue;
            EXPECT_EQ(mass(b, WorldSet::from_mask(a | c, 4)),
                      mass(b, WorldSet::from_mask(a, 4)) + mass(b, WorldSet::from_mask(c, 4)));
        }
}

TEST(Conditioning, Examples) {
    auto v = km();
    auto b = state(v, {"0", "1/2", "1/2", "0"});
    EXPECT_EQ(bayesian_conditioning(b, parse_formula("book", v)), state(v, {"0", "1", "0", "0"}));
    auto one = state(qr(), {"1", "0", "0", "0"});
    EXPECT_EQ(bayesian_conditioning(one, parse_formula("q & r", qr())), one);
    auto b37 = state(qr(), {"3/10", "7/10", "0", "0"});
    EXPECT_THROW(bayesian_conditioning(b37, parse_formula("!q", qr())), ConditioningUndefined);
    EXPECT_EQ(expansion(b, parse_formula("book", v)), bayesian_conditioning(b, parse_formula("book", v)));
}

TEST(Conditioning, Idempotent) {
    auto b = state(qr(), {"1/8", "3/8", "1/4", "1/4"});
    for (std::uint64_t m = 1; m < 16; ++m) {
        auto a = WorldSet::from_mask(m, 4);
        auto once = bayesian_conditioning(b, a);
        EXPECT_EQ(bayesian_conditioning(once, a), once);
    }
}

TEST(Support, Examples) {
    auto v = km();
    EXPECT_EQ(render(support(state(v, {"0", "1/2", "1/2", "0"})), v), "{10,01}");
    EXPECT_EQ(render(support(BeliefState::point_mass(v, World{3})), v), "{11}");
    EXPECT_EQ(render(support(state(v, {"0.3", "0.7", "0", "0"})), v), "{11,10}");
}

TEST(Render, ListsCanonicalOrder) {
    EXPECT_EQ(render(state(qr(), {"3/10", "7/10", "0", "0"})), "<3/10,7/10,0,0>");
}
