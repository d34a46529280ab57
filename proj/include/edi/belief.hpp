#pragma once

#include <string>
#include <vector>

#include "edi/errors.hpp"
#include "edi/logic.hpp"
#include "edi/rational.hpp"

namespace edi {

// Probabilities indexed by World::bits. Unvalidated; BeliefState is the
// checked form.
using Probabilities = std::vector<Rational>;

inline bool is_distribution(const Probabilities& p) {
    Rational sum = 0;
    for (const auto& x : p) {
        if (sgn(x) < 0) return false;
        sum += x;
    }
    return sum == 1;
}

// A probability distribution over every world of a vocabulary. Sums to
// exactly one; there is no tolerance anywhere.
class BeliefState {
public:
    BeliefState(Vocabulary v, Probabilities p) : vocab_(std::move(v)), probs_(std::move(p)) {
        if (probs_.size() != vocab_.world_count())
            throw InvalidBeliefState("expected " + std::to_string(vocab_.world_count()) + " probabilities, got " +
                                     std::to_string(probs_.size()));
        Rational sum = 0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            if (sgn(probs_[i]) < 0)
                throw InvalidBeliefState("negative probability at world " +
                                         render(World{static_cast<std::uint32_t>(i)}, vocab_));
            sum += probs_[i];
        }
        if (sum != 1) throw InvalidBeliefState("probabilities sum to " + to_string(sum) + ", not 1");
    }

    // Probabilities listed in canonical order (11, 10, 01, 00 for two atoms),
    // which is how belief states are usually written down.
    static BeliefState from_canonical(Vocabulary v, const std::vector<Rational>& listed) {
        if (listed.size() != v.world_count())
            throw InvalidBeliefState("expected " + std::to_string(v.world_count()) + " probabilities, got " +
                                     std::to_string(listed.size()));
        Probabilities p(listed.size());
        for (std::size_t k = 0; k < listed.size(); ++k) p[listed.size() - 1 - k] = listed[k];
        return BeliefState(std::move(v), std::move(p));
    }

    static BeliefState point_mass(Vocabulary v, World w) {
        Probabilities p(v.world_count(), Rational(0));
        p.at(w.bits) = 1;
        return BeliefState(std::move(v), std::move(p));
    }

    static BeliefState uniform_on(Vocabulary v, const WorldSet& s) {
        if (s.empty()) throw InvalidBeliefState("uniform distribution over an empty set");
        Probabilities p(v.world_count(), Rational(0));
        Rational share(1, static_cast<long>(s.size()));
        for (World w : s.members()) p[w.bits] = share;
        return BeliefState(std::move(v), std::move(p));
    }

    const Vocabulary& vocabulary() const noexcept { return vocab_; }
    std::size_t world_count() const noexcept { return probs_.size(); }
    const Rational& operator[](World w) const { return probs_.at(w.bits); }
    const Probabilities& probabilities() const noexcept { return probs_; }

    std::vector<Rational> canonical() const { return {probs_.rbegin(), probs_.rend()}; }

    friend bool operator==(const BeliefState& a, const BeliefState& b) {
        return a.vocab_ == b.vocab_ && a.probs_ == b.probs_;
    }

private:
    Vocabulary vocab_;
    Probabilities probs_;
};

inline Rational mass(const BeliefState& b, const WorldSet& s) {
    Rational total = 0;
    for (World w : s.members()) total += b[w];
    return total;
}

inline Rational mass(const BeliefState& b, const Formula& a) { return mass(b, models(a, b.vocabulary())); }

inline WorldSet support(const BeliefState& b) {
    WorldSet s(b.world_count());
    for (std::size_t i = 0; i < b.world_count(); ++i) {
        World w{static_cast<std::uint32_t>(i)};
        if (sgn(b[w]) > 0) s.insert(w);
    }
    return s;
}

inline BeliefState bayesian_conditioning(const BeliefState& b, const WorldSet& evidence) {
    Rational m = mass(b, evidence);
    if (sgn(m) == 0) throw ConditioningUndefined("evidence has prior probability 0");
    Probabilities p(b.world_count(), Rational(0));
    for (World w : evidence.members()) p[w.bits] = b[w] / m;
    return BeliefState(b.vocabulary(), std::move(p));
}

inline BeliefState bayesian_conditioning(const BeliefState& b, const Formula& a) {
    return bayesian_conditioning(b, models(a, b.vocabulary()));
}

// Probabilistic expansion is Bayesian conditioning.
inline BeliefState expansion(const BeliefState& b, const WorldSet& evidence) { return bayesian_conditioning(b, evidence); }
inline BeliefState expansion(const BeliefState& b, const Formula& a) { return bayesian_conditioning(b, a); }

inline std::string render(const BeliefState& b) {
    std::string out = "<";
    auto c = b.canonical();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += to_string(c[i]);
    }
    return out + ">";
}

} // namespace edi
