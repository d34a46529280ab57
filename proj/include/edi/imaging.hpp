#pragma once

#include <string>
#include <vector>

#include "edi/belief.hpp"
#include "edi/errors.hpp"
#include "edi/logic.hpp"
#include "edi/metric.hpp"
#include "edi/rational.hpp"
#include "edi/weights.hpp"

namespace edi {

struct ChangeResult {
    BeliefState posterior;
    Rational gamma;
    std::string op;
    WorldSet evidence;
};

// Expected distance imaging: each evidence world collects the prior mass of
// every world, weighted by f, and the result is normalized by gamma.
inline ChangeResult edi(const BeliefState& b, const WorldSet& evidence, const WeightFunction& f) {
    if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
    auto kernel = f.bind(evidence, b);
    auto src = support(b).members();

    Probabilities p(b.world_count(), Rational(0));
    Rational gamma = 0;
    for (World w : evidence.members()) {
        Rational acc = 0;
        for (World v : src) acc += b[v] * kernel(w, v);
        p[w.bits] = acc;
        gamma += acc;
    }
    if (sgn(gamma) == 0) throw DegenerateNormalization("weight function " + f.name() + " gives the evidence no mass");
    for (auto& x : p) x /= gamma;
    return {BeliefState(b.vocabulary(), std::move(p)), gamma, f.name(), evidence};
}

inline ChangeResult edi(const BeliefState& b, const Formula& a, const WeightFunction& f) {
    return edi(b, models(a, b.vocabulary()), f);
}

// Each world hands all of its mass to its unique closest evidence world.
inline ChangeResult lewis_imaging(const BeliefState& b, const WorldSet& evidence, const ClosestWorldMap& m) {
    if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
    Probabilities p(b.world_count(), Rational(0));
    for (World v : support(b).members()) p[m.closest(evidence, v).bits] += b[v];
    return {BeliefState(b.vocabulary(), std::move(p)), Rational(1), "li", evidence};
}

inline ChangeResult lewis_imaging(const BeliefState& b, const Formula& a, const ClosestWorldMap& m) {
    return lewis_imaging(b, models(a, b.vocabulary()), m);
}

// Each world splits its mass evenly over its closest evidence worlds.
inline ChangeResult generalized_imaging(const BeliefState& b, const WorldSet& evidence, const PseudoDistance& d) {
    if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
    Probabilities p(b.world_count(), Rational(0));
    for (World v : support(b).members()) {
        WorldSet closest = min_worlds(evidence, v, d);
        Rational share = b[v] / static_cast<long>(closest.size());
        for (World w : closest.members()) p[w.bits] += share;
    }
    return {BeliefState(b.vocabulary(), std::move(p)), Rational(1), "gi", evidence};
}

inline ChangeResult generalized_imaging(const BeliefState& b, const Formula& a, const PseudoDistance& d) {
    return generalized_imaging(b, models(a, b.vocabulary()), d);
}

// b_1 = b EDI a, b_2 = b_1 EDI a, ... Prior-dependent weights are rebound
// against every intermediate state.
inline std::vector<ChangeResult> iterate(const BeliefState& b, const WorldSet& evidence, const WeightFunction& f,
                                         std::size_t t) {
    if (t == 0) throw InvalidParameter("iteration count must be at least 1");
    std::vector<ChangeResult> out;
    out.reserve(t);
    out.push_back(edi(b, evidence, f));
    for (std::size_t i = 1; i < t; ++i) out.push_back(edi(out.back().posterior, evidence, f));
    return out;
}

inline std::vector<ChangeResult> iterate(const BeliefState& b, const Formula& a, const WeightFunction& f,
                                         std::size_t t) {
    return iterate(b, models(a, b.vocabulary()), f, t);
}

} // namespace edi
