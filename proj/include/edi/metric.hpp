#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edi/errors.hpp"
#include "edi/logic.hpp"

namespace edi {

// Integer distance table over world pairs. Construction does not enforce
// the pseudo-distance conditions so that broken tables can be inspected;
// validate_pseudo_distance() reports on them.
class PseudoDistance {
public:
    PseudoDistance() = default;

    PseudoDistance(Vocabulary v, std::vector<std::int64_t> table)
        : vocab_(std::move(v)), n_(vocab_.world_count()), table_(std::move(table)) {
        if (table_.size() != n_ * n_) throw InvalidDistance("distance table has wrong size");
    }

    const Vocabulary& vocabulary() const noexcept { return vocab_; }
    std::size_t world_count() const noexcept { return n_; }

    std::int64_t operator()(World a, World b) const { return table_[a.bits * n_ + b.bits]; }

    // Distinct worlds are at positive distance.
    bool faithful() const {
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                if (a != b && table_[a * n_ + b] <= 0) return false;
        return true;
    }

    const std::vector<std::int64_t>& table() const noexcept { return table_; }

private:
    Vocabulary vocab_;
    std::size_t n_ = 0;
    std::vector<std::int64_t> table_;
};

inline PseudoDistance hamming(const Vocabulary& v) {
    const std::size_t n = v.world_count();
    std::vector<std::int64_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t[a * n + b] = std::popcount(static_cast<std::uint32_t>(a ^ b));
    return PseudoDistance(v, std::move(t));
}

struct DistanceCheck {
    std::string name;
    bool holds = true;
    std::vector<World> witness; // empty when holds
};

struct DistanceReport {
    // non-negativity, identity, symmetry, triangle-inequality, faithfulness
    std::array<DistanceCheck, 5> checks;

    // The four defining conditions; faithfulness is optional.
    bool is_pseudo_distance() const { return checks[0].holds && checks[1].holds && checks[2].holds && checks[3].holds; }
    bool faithful() const { return checks[4].holds; }

    const DistanceCheck& operator[](std::string_view name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw std::out_of_range("no distance check named " + std::string(name));
    }
};

// Each violation is witnessed by the first offending tuple in canonical
// world order.
inline DistanceReport validate_pseudo_distance(const PseudoDistance& d) {
    DistanceReport r;
    r.checks = {DistanceCheck{"non-negativity", true, {}}, DistanceCheck{"identity", true, {}}, DistanceCheck{"symmetry", true, {}},
                DistanceCheck{"triangle-inequality", true, {}}, DistanceCheck{"faithfulness", true, {}}};
    auto ws = canonical_worlds(d.vocabulary());
    auto fail = [](DistanceCheck& c, std::vector<World> w) {
        if (c.holds) {
            c.holds = false;
            c.witness = std::move(w);
        }
    };
    for (World a : ws) {
        if (d(a, a) != 0) fail(r.checks[1], {a});
        for (World b : ws) {
            if (d(a, b) < 0) fail(r.checks[0], {a, b});
            if (d(a, b) != d(b, a)) fail(r.checks[2], {a, b});
            if (a != b && d(a, b) <= 0) fail(r.checks[4], {a, b});
            for (World c : ws)
                if (d(a, b) + d(b, c) < d(a, c)) fail(r.checks[3], {a, b, c});
        }
    }
    return r;
}

// Evidence worlds closest to w. Never empty.
inline WorldSet min_worlds(const WorldSet& evidence, World w, const PseudoDistance& d) {
    if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
    std::optional<std::int64_t> best;
    for (World u : evidence.members()) {
        auto du = d(u, w);
        if (!best || du < *best) best = du;
    }
    WorldSet out(evidence.universe());
    for (World u : evidence.members())
        if (d(u, w) == *best) out.insert(u);
    return out;
}

inline WorldSet min_worlds(const Formula& a, World w, const PseudoDistance& d) {
    return min_worlds(models(a, d.vocabulary()), w, d);
}

inline std::int64_t d_max(const PseudoDistance& d) {
    if (d.table().empty()) return 0;
    return *std::max_element(d.table().begin(), d.table().end());
}

// The unique closest evidence world under a total order: distance from w
// first, then canonical world order (so 10 precedes 01). A world that
// satisfies the evidence is its own closest world.
inline World li_closest(const WorldSet& evidence, World w, const PseudoDistance& base) {
    if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
    if (evidence.contains(w)) return w;
    std::optional<World> best;
    for (World u : evidence.members()) // canonical order, so ties keep the earlier world
        if (!best || base(u, w) < base(*best, w)) best = u;
    return *best;
}

inline World li_closest(const Formula& a, World w, const PseudoDistance& base) {
    return li_closest(models(a, base.vocabulary()), w, base);
}

// Per-world total orders derived from a base pseudo-distance, as Lewis
// imaging needs.
class ClosestWorldMap {
public:
    explicit ClosestWorldMap(PseudoDistance base) : base_(std::move(base)) {}

    World closest(const WorldSet& evidence, World w) const { return li_closest(evidence, w, base_); }
    const PseudoDistance& base() const noexcept { return base_; }

private:
    PseudoDistance base_;
};

} // namespace edi
