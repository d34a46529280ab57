#pragma once

#include <functional>
#include <limits>
#include <string>

#include "edi/belief.hpp"
#include "edi/errors.hpp"
#include "edi/logic.hpp"
#include "edi/metric.hpp"

namespace edi {

enum class ClassicalKind { Revision, Update };

// Model-level classical belief change: (base models, evidence models) ->
// new models. The result is always a subset of the evidence models.
struct ClassicalOperator {
    ClassicalKind kind;
    std::string name;
    std::function<WorldSet(const WorldSet& base, const WorldSet& evidence)> apply;
};

// Dalal revision: evidence models at globally minimal distance from the
// base. An empty base is revised to the evidence itself.
inline ClassicalOperator dalal_revision(PseudoDistance d) {
    return {ClassicalKind::Revision, "dalal", [d = std::move(d)](const WorldSet& base, const WorldSet& evidence) {
                if (evidence.empty()) throw EmptyEvidence("revision by an unsatisfiable formula");
                if (base.empty()) return evidence;
                auto base_worlds = base.members();
                auto gap = [&](World w) {
                    auto best = std::numeric_limits<std::int64_t>::max();
                    for (World b : base_worlds) best = std::min(best, d(w, b));
                    return best;
                };
                auto best = std::numeric_limits<std::int64_t>::max();
                for (World w : evidence.members()) best = std::min(best, gap(w));
                WorldSet out(evidence.universe());
                for (World w : evidence.members())
                    if (gap(w) == best) out.insert(w);
                return out;
            }};
}

// Winslett's PMA: each base world moves to its own closest evidence worlds.
inline ClassicalOperator pma_update(PseudoDistance d) {
    return {ClassicalKind::Update, "pma", [d = std::move(d)](const WorldSet& base, const WorldSet& evidence) {
                if (evidence.empty()) throw EmptyEvidence("update by an unsatisfiable formula");
                WorldSet out(evidence.universe());
                for (World b : base.members()) out = out | min_worlds(evidence, b, d);
                return out;
            }};
}

// Operator given by an explicit rule, for reproducing scenarios that fix
// the classical result by assumption. Results are clipped to the evidence.
inline ClassicalOperator table_operator(ClassicalKind kind, std::string name,
                                        std::function<WorldSet(const WorldSet&, const WorldSet&)> rule) {
    return {kind, std::move(name), [rule = std::move(rule)](const WorldSet& base, const WorldSet& evidence) {
                if (evidence.empty()) throw EmptyEvidence("classical change by an unsatisfiable formula");
                return rule(base, evidence) & evidence;
            }};
}

inline WorldSet apply_to_state(const ClassicalOperator& op, const BeliefState& b, const WorldSet& evidence) {
    return op.apply(support(b), evidence);
}

inline WorldSet apply_to_state(const ClassicalOperator& op, const BeliefState& b, const Formula& a) {
    return apply_to_state(op, b, models(a, b.vocabulary()));
}

} // namespace edi
