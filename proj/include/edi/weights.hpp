#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edi/belief.hpp"
#include "edi/classical.hpp"
#include "edi/errors.hpp"
#include "edi/logic.hpp"
#include "edi/metric.hpp"
#include "edi/rational.hpp"

namespace edi {

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

enum class Property {
    NonNegativity,
    Identity,
    Symmetry,
    WeakInversity,
    StrictInversity,
    EquiDistance,
    Faithfulness,
    EvidenceRelaxation,
    NonEvidenceRelaxation,
    Retention,
};

inline constexpr std::array kAllProperties = {
    Property::NonNegativity,   Property::Identity,     Property::Symmetry,
    Property::WeakInversity,   Property::StrictInversity, Property::EquiDistance,
    Property::Faithfulness,    Property::EvidenceRelaxation, Property::NonEvidenceRelaxation,
    Property::Retention,
};

inline std::string_view property_name(Property p) {
    switch (p) {
    case Property::NonNegativity: return "non-negativity";
    case Property::Identity: return "identity";
    case Property::Symmetry: return "symmetry";
    case Property::WeakInversity: return "weak-inversity";
    case Property::StrictInversity: return "strict-inversity";
    case Property::EquiDistance: return "equi-distance";
    case Property::Faithfulness: return "faithfulness";
    case Property::EvidenceRelaxation: return "e-relaxed";
    case Property::NonEvidenceRelaxation: return "n-e-relaxed";
    case Property::Retention: return "retention";
    }
    return "?";
}

inline std::optional<Property> property_from_name(std::string_view s) {
    for (Property p : kAllProperties)
        if (property_name(p) == s) return p;
    return std::nullopt;
}

class PropertySet {
public:
    PropertySet() = default;
    PropertySet(std::initializer_list<Property> ps) {
        for (Property p : ps) insert(p);
    }

    void insert(Property p) { bits_ |= bit(p); }
    void erase(Property p) { bits_ &= ~bit(p); }
    bool contains(Property p) const { return bits_ & bit(p); }
    bool contains_all(const PropertySet& o) const { return (bits_ & o.bits_) == o.bits_; }

    static PropertySet inverse_distance() {
        return {Property::NonNegativity, Property::Identity, Property::Symmetry, Property::WeakInversity};
    }
    static PropertySet relaxed() { return {Property::EvidenceRelaxation, Property::NonEvidenceRelaxation}; }

    PropertySet operator|(const PropertySet& o) const {
        PropertySet r;
        r.bits_ = bits_ | o.bits_;
        return r;
    }

    friend bool operator==(const PropertySet&, const PropertySet&) = default;

private:
    static std::uint32_t bit(Property p) { return 1u << static_cast<unsigned>(p); }
    std::uint32_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Weight functions
// ---------------------------------------------------------------------------

// Weight of source world w' (second argument) towards target world w.
using WeightKernel = std::function<Rational(World target, World source)>;

// A weight function delta(evidence, w, w') that may also read the prior
// belief state. Evaluation goes through bind(): fixing evidence and prior
// once lets prior-dependent instantiations precompute their classical
// step instead of redoing it per world pair.
class WeightFunction {
public:
    using Binder = std::function<WeightKernel(const WorldSet& evidence, const BeliefState& prior)>;

    WeightFunction(std::string name, Binder binder, PropertySet declared, bool uses_evidence, bool uses_prior)
        : name_(std::move(name)), binder_(std::move(binder)), declared_(declared), uses_evidence_(uses_evidence),
          uses_prior_(uses_prior) {}

    const std::string& name() const noexcept { return name_; }
    // Properties the construction claims; check_weight_properties verifies.
    const PropertySet& declared() const noexcept { return declared_; }
    bool uses_evidence() const noexcept { return uses_evidence_; }
    bool uses_prior() const noexcept { return uses_prior_; }

    WeightKernel bind(const WorldSet& evidence, const BeliefState& prior) const { return binder_(evidence, prior); }

    Rational operator()(const WorldSet& evidence, World target, World source, const BeliefState& prior) const {
        return bind(evidence, prior)(target, source);
    }

    WeightFunction renamed(std::string name) const {
        WeightFunction f = *this;
        f.name_ = std::move(name);
        return f;
    }

private:
    std::string name_;
    Binder binder_;
    PropertySet declared_;
    bool uses_evidence_;
    bool uses_prior_;
};

inline WeightFunction rcp_weight(PseudoDistance d, Rational eta) {
    if (sgn(eta) <= 0) throw InvalidParameter("eta must be positive, got " + to_string(eta));
    PropertySet props{Property::NonNegativity, Property::Identity,     Property::Symmetry,
                      Property::WeakInversity, Property::StrictInversity, Property::EquiDistance,
                      Property::EvidenceRelaxation, Property::NonEvidenceRelaxation};
    if (d.faithful()) props.insert(Property::Faithfulness);
    auto binder = [d = std::move(d), eta](const WorldSet&, const BeliefState&) -> WeightKernel {
        return [&d, eta](World w, World v) { return Rational(eta / (Rational(d(w, v)) + eta)); };
    };
    return WeightFunction("rcp(eta=" + to_string(eta) + ")", std::move(binder), props, false, false);
}

inline WeightFunction dfr_weight(PseudoDistance d, Rational eta) {
    if (sgn(eta) <= 0) throw InvalidParameter("eta must be positive, got " + to_string(eta));
    PropertySet props{Property::NonNegativity, Property::Identity,     Property::Symmetry,
                      Property::WeakInversity, Property::StrictInversity, Property::EquiDistance,
                      Property::EvidenceRelaxation, Property::NonEvidenceRelaxation};
    if (d.faithful()) props.insert(Property::Faithfulness);
    Rational top = Rational(d_max(d)) + eta;
    auto binder = [d = std::move(d), top](const WorldSet&, const BeliefState&) -> WeightKernel {
        return [&d, top](World w, World v) { return Rational((top - d(w, v)) / top); };
    };
    return WeightFunction("dfr(eta=" + to_string(eta) + ")", std::move(binder), props, false, false);
}

inline WeightFunction bc_weight() {
    PropertySet props{Property::NonNegativity, Property::Identity,     Property::Symmetry, Property::WeakInversity,
                      Property::EquiDistance,  Property::Faithfulness, Property::Retention};
    auto binder = [](const WorldSet&, const BeliefState&) -> WeightKernel {
        return [](World w, World v) { return Rational(w == v ? 1 : 0); };
    };
    return WeightFunction("bc", std::move(binder), props, false, false);
}

// Lewis imaging as a weight: x off the evidence, 1 towards the unique
// closest evidence world of the source, 0 elsewhere.
inline WeightFunction li_weight(PseudoDistance base, Rational x = 0) {
    if (sgn(x) < 0 || x > 1) throw InvalidParameter("x must lie in [0,1], got " + to_string(x));
    auto binder = [base = std::move(base), x](const WorldSet& evidence, const BeliefState&) -> WeightKernel {
        if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
        std::vector<World> closest(evidence.universe());
        for (std::size_t k = 0; k < closest.size(); ++k)
            closest[k] = li_closest(evidence, World{static_cast<std::uint32_t>(k)}, base);
        return [evidence, closest = std::move(closest), x](World w, World v) {
            if (!evidence.contains(w)) return x;
            return Rational(closest[v.bits] == w ? 1 : 0);
        };
    };
    PropertySet props{Property::NonNegativity, Property::Retention};
    if (x == 1) props.insert(Property::Identity);
    return WeightFunction("li(x=" + to_string(x) + ")", std::move(binder), props, true, false);
}

inline WeightFunction gi_weight(PseudoDistance d) {
    bool faithful = d.faithful();
    auto binder = [d = std::move(d)](const WorldSet& evidence, const BeliefState&) -> WeightKernel {
        if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
        std::vector<WorldSet> closest;
        closest.reserve(evidence.universe());
        for (std::size_t k = 0; k < evidence.universe(); ++k)
            closest.push_back(min_worlds(evidence, World{static_cast<std::uint32_t>(k)}, d));
        return [evidence, closest = std::move(closest)](World w, World v) {
            if (w == v && !evidence.contains(w)) return Rational(1);
            const WorldSet& m = closest[v.bits];
            if (m.contains(w)) return Rational(1, static_cast<long>(m.size()));
            return Rational(0);
        };
    };
    PropertySet props{Property::NonNegativity};
    if (faithful) {
        props.insert(Property::Identity);
        props.insert(Property::Retention);
    }
    return WeightFunction("gi", std::move(binder), props, true, false);
}

namespace detail {
inline void require(const WeightFunction& inner, const PropertySet& needed, std::string_view wrapper) {
    if (!inner.declared().contains_all(needed)) {
        std::string missing;
        for (Property p : kAllProperties)
            if (needed.contains(p) && !inner.declared().contains(p))
                missing += (missing.empty() ? "" : ", ") + std::string(property_name(p));
        throw RejectedWeight(std::string(wrapper) + " cannot wrap " + inner.name() + " (lacks " + missing + ")");
    }
}
} // namespace detail

namespace detail {
inline PropertySet inherit(const WeightFunction& inner, PropertySet base, std::initializer_list<Property> from_inner) {
    for (Property p : from_inner)
        if (inner.declared().contains(p)) base.insert(p);
    return base;
}
} // namespace detail

// Identity on the diagonal, the inner weight whenever either world falls
// outside the evidence, and 0 between distinct evidence worlds. The inner
// weight is meant to be inverse-distance; that is documented, not enforced.
inline WeightFunction zero_weight(WeightFunction inner) {
    PropertySet props = detail::inherit(inner, {Property::Identity, Property::Retention},
                                        {Property::NonNegativity, Property::Symmetry, Property::Faithfulness,
                                         Property::NonEvidenceRelaxation});
    bool uses_prior = inner.uses_prior();
    std::string name = "zero(" + inner.name() + ")";
    auto binder = [inner = std::move(inner)](const WorldSet& evidence, const BeliefState& prior) -> WeightKernel {
        return [evidence, k = inner.bind(evidence, prior)](World w, World v) {
            if (w == v) return Rational(1);
            if (!evidence.contains(w) || !evidence.contains(v)) return k(w, v);
            return Rational(0);
        };
    };
    return WeightFunction(std::move(name), std::move(binder), props, true, uses_prior);
}

// Bayesian conditioning when the prior gives the evidence positive mass,
// zero_weight(inner) otherwise.
inline WeightFunction dct_rev_weight(WeightFunction inner) {
    PropertySet props = detail::inherit(inner, {Property::Identity, Property::Retention},
                                        {Property::NonNegativity, Property::Symmetry, Property::Faithfulness});
    std::string name = "dct-rev(" + inner.name() + ")";
    auto binder = [bc = bc_weight(), zero = zero_weight(std::move(inner))](const WorldSet& evidence,
                                                                          const BeliefState& prior) -> WeightKernel {
        return sgn(mass(prior, evidence)) > 0 ? bc.bind(evidence, prior) : zero.bind(evidence, prior);
    };
    return WeightFunction(std::move(name), std::move(binder), props, true, true);
}

namespace detail {
inline WeightFunction classical_weight(std::string name, ClassicalOperator op, WeightFunction inner, PropertySet props) {
    auto binder = [op = std::move(op), inner = std::move(inner)](const WorldSet& evidence,
                                                                 const BeliefState& prior) -> WeightKernel {
        WorldSet chosen = apply_to_state(op, prior, evidence);
        return [chosen = std::move(chosen), k = inner.bind(evidence, prior)](World w, World v) {
            if (w == v) return Rational(1);
            if (chosen.contains(w)) return k(w, v);
            return Rational(0);
        };
    };
    return WeightFunction(std::move(name), std::move(binder), props, true, true);
}
} // namespace detail

// The classical operator picks the worlds that may receive mass from
// elsewhere; the inner weight decides how much. For revision the inner
// weight should be n-e-relaxed and retentive (zero_weight(rcp) is the usual
// choice), for update relaxed inverse-distance.
inline WeightFunction cls_rev_weight(ClassicalOperator rev, WeightFunction inner) {
    PropertySet props = detail::inherit(inner, {Property::Identity},
                                        {Property::NonNegativity, Property::Faithfulness, Property::Retention});
    std::string name = "cls-rev[" + rev.name + "](" + inner.name() + ")";
    return detail::classical_weight(std::move(name), std::move(rev), std::move(inner), props);
}

inline WeightFunction cls_upd_weight(ClassicalOperator upd, WeightFunction inner) {
    PropertySet props =
        detail::inherit(inner, {Property::Identity}, {Property::NonNegativity, Property::Faithfulness});
    std::string name = "cls-upd[" + upd.name + "](" + inner.name() + ")";
    return detail::classical_weight(std::move(name), std::move(upd), std::move(inner), props);
}

// Direct update: any relaxed inverse-distance weight, used as is.
inline WeightFunction dct_upd_weight(WeightFunction inner) {
    detail::require(inner, PropertySet::inverse_distance() | PropertySet::relaxed(), "dct_upd_weight");
    return inner.renamed("dct-upd(" + inner.name() + ")");
}

// ---------------------------------------------------------------------------
// Exhaustive property checking
// ---------------------------------------------------------------------------

struct PropertyWitness {
    WorldSet evidence;
    std::optional<BeliefState> prior; // set only for prior-dependent weights
    std::vector<World> worlds;        // (w, w') or (w, w', w'', w''')
    std::vector<Rational> values;     // weights at the listed pairs
};

struct PropertyVerdict {
    Property property;
    bool holds = true;
    std::optional<PropertyWitness> witness;
};

struct PropertyReport {
    std::string weight;
    std::string domain; // what was enumerated, e.g. "4 worlds x 15 evidence sets x 1 prior"
    std::vector<PropertyVerdict> verdicts;

    const PropertyVerdict& operator[](Property p) const {
        for (const auto& v : verdicts)
            if (v.property == p) return v;
        throw std::out_of_range("property not in report");
    }
    bool holds(Property p) const { return (*this)[p].holds; }
    bool inverse_distance() const {
        return holds(Property::NonNegativity) && holds(Property::Identity) && holds(Property::Symmetry) &&
               holds(Property::WeakInversity);
    }
    bool relaxed() const { return holds(Property::EvidenceRelaxation) && holds(Property::NonEvidenceRelaxation); }

    PropertySet holding() const {
        PropertySet s;
        for (const auto& v : verdicts)
            if (v.holds) s.insert(v.property);
        return s;
    }
};

// Every non-empty world set, in increasing mask order.
inline std::vector<WorldSet> all_evidence_sets(const Vocabulary& v) {
    if (v.size() > 4) throw SuiteTooLarge("exhaustive evidence enumeration is limited to 4 atoms");
    std::vector<WorldSet> out;
    std::uint64_t limit = std::uint64_t{1} << v.world_count();
    for (std::uint64_t m = 1; m < limit; ++m) out.push_back(WorldSet::from_mask(m, v.world_count()));
    return out;
}

namespace detail {

struct PairTable {
    std::vector<std::pair<World, World>> pairs; // canonical order
    std::vector<std::int64_t> dist;
};

inline PairTable make_pairs(const PseudoDistance& d) {
    PairTable t;
    for (World a : canonical_worlds(d.vocabulary()))
        for (World b : canonical_worlds(d.vocabulary())) {
            t.pairs.emplace_back(a, b);
            t.dist.push_back(d(a, b));
        }
    return t;
}

// Postulates 4-6 compare every pair of pairs. For each pair p (in
// canonical order) we ask whether some q violates the postulate against
// it, using per-distance extrema so the check is O(P log P); only the
// first offending p is scanned for its first partner q.
inline void check_inversity(const PairTable& t, const std::vector<Rational>& m,
                            std::array<std::optional<std::array<std::size_t, 2>>, 3>& found) {
    std::map<std::int64_t, std::pair<Rational, Rational>> level; // distance -> (min, max)
    for (std::size_t i = 0; i < t.pairs.size(); ++i) {
        auto [it, fresh] = level.try_emplace(t.dist[i], m[i], m[i]);
        if (!fresh) {
            if (m[i] < it->second.first) it->second.first = m[i];
            if (m[i] > it->second.second) it->second.second = m[i];
        }
    }
    // min over all levels <= key, and over all levels < key
    std::map<std::int64_t, Rational> upto, below;
    std::optional<Rational> running;
    for (auto& [dist, mm] : level) {
        if (running) below.emplace(dist, *running);
        running = running ? std::min(*running, mm.first) : mm.first;
        upto.emplace(dist, *running);
    }

    auto first_partner = [&](std::size_t p, auto pred) -> std::size_t {
        for (std::size_t q = 0; q < t.pairs.size(); ++q)
            if (pred(q)) return q;
        return p; // unreachable when the extrema said a partner exists
    };

    for (std::size_t p = 0; p < t.pairs.size(); ++p) {
        auto dp = t.dist[p];
        // weak: d(p) >= d(q) and m(p) > m(q)
        if (!found[0] && upto.at(dp) < m[p])
            found[0] = {p, first_partner(p, [&](std::size_t q) { return dp >= t.dist[q] && m[p] > m[q]; })};
        // strict: d(p) > d(q) and m(p) >= m(q)
        if (!found[1] && below.count(dp) && below.at(dp) <= m[p])
            found[1] = {p, first_partner(p, [&](std::size_t q) { return dp > t.dist[q] && m[p] >= m[q]; })};
        // equi: d(p) == d(q) and m(p) != m(q)
        const auto& mm = level.at(dp);
        if (!found[2] && mm.first != mm.second)
            found[2] = {p, first_partner(p, [&](std::size_t q) { return dp == t.dist[q] && m[p] != m[q]; })};
        if (found[0] && found[1] && found[2]) break;
    }
}

} // namespace detail

// Checks all ten properties exhaustively over world pairs/quadruples, the
// evidence suite and the priors. Postulates 1-7 are judged per evidence
// set (and per prior); evidence-independent weights are checked once.
// The witness of a violated property is the first offending tuple in
// suite order, then canonical world order.
inline PropertyReport check_weight_properties(const WeightFunction& f, const PseudoDistance& d,
                                              const std::vector<WorldSet>& evidence_suite,
                                              std::vector<BeliefState> priors = {}) {
    const Vocabulary& v = d.vocabulary();
    if (v.size() > 4) throw SuiteTooLarge("weight property checks are limited to 4 atoms");
    if (evidence_suite.empty()) throw InvalidParameter("empty evidence suite");
    if (priors.empty() || !f.uses_prior()) {
        if (priors.empty()) priors.push_back(BeliefState::uniform_on(v, WorldSet::full(v.world_count())));
        priors.erase(priors.begin() + 1, priors.end());
    }

    PropertyReport report;
    report.weight = f.name();
    report.domain = std::to_string(v.world_count()) + " worlds x " + std::to_string(evidence_suite.size()) +
                    " evidence sets x " + std::to_string(priors.size()) + (priors.size() == 1 ? " prior" : " priors");
    for (Property p : kAllProperties) report.verdicts.push_back({p, true, std::nullopt});

    auto verdict = [&](Property p) -> PropertyVerdict& {
        return report.verdicts[static_cast<std::size_t>(p)];
    };

    const auto table = detail::make_pairs(d);
    const std::size_t N = v.world_count();
    const auto ws = canonical_worlds(v);

    for (const auto& prior : priors) {
        bool checked_static = false;
        for (const auto& evidence : evidence_suite) {
            auto kernel = f.bind(evidence, prior);
            std::vector<Rational> m(table.pairs.size());
            for (std::size_t i = 0; i < table.pairs.size(); ++i) m[i] = kernel(table.pairs[i].first, table.pairs[i].second);
            auto at = [&](World a, World b) -> const Rational& {
                return m[canonical_position(a, N) * N + canonical_position(b, N)];
            };
            auto fail = [&](Property p, std::vector<World> worlds) {
                auto& vd = verdict(p);
                if (!vd.holds) return;
                vd.holds = false;
                PropertyWitness w{evidence, std::nullopt, std::move(worlds), {}};
                if (f.uses_prior()) w.prior = prior;
                for (std::size_t i = 0; i + 1 < w.worlds.size(); i += 2) w.values.push_back(at(w.worlds[i], w.worlds[i + 1]));
                vd.witness = std::move(w);
            };

            if (f.uses_evidence() || !checked_static) {
                for (World a : ws) {
                    if (at(a, a) != 1) fail(Property::Identity, {a, a});
                    for (World b : ws) {
                        if (sgn(at(a, b)) < 0) fail(Property::NonNegativity, {a, b});
                        if (at(a, b) != at(b, a)) fail(Property::Symmetry, {a, b, b, a});
                        if (a != b && at(a, b) >= 1) fail(Property::Faithfulness, {a, b});
                    }
                }
                std::array<std::optional<std::array<std::size_t, 2>>, 3> found;
                detail::check_inversity(table, m, found);
                const Property inv[] = {Property::WeakInversity, Property::StrictInversity, Property::EquiDistance};
                for (int k = 0; k < 3; ++k)
                    if (found[k]) {
                        auto [p, q] = *found[k];
                        fail(inv[k], {table.pairs[p].first, table.pairs[p].second, table.pairs[q].first,
                                      table.pairs[q].second});
                    }
                checked_static = true;
            }

            for (World a : evidence.members())
                for (World b : ws) {
                    bool zero = sgn(at(a, b)) == 0;
                    if (evidence.contains(b)) {
                        if (zero) fail(Property::EvidenceRelaxation, {a, b});
                        if (a != b && !zero) fail(Property::Retention, {a, b});
                    } else if (zero) {
                        fail(Property::NonEvidenceRelaxation, {a, b});
                    }
                }
        }
    }
    return report;
}

} // namespace edi
