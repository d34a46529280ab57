#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edi/belief.hpp"
#include "edi/classical.hpp"
#include "edi/errors.hpp"
#include "edi/imaging.hpp"
#include "edi/metric.hpp"
#include "edi/weights.hpp"

namespace edi {

// A probabilistic belief change operator b * alpha, with alpha given by its
// models.
struct ChangeOperator {
    std::string name;
    std::function<ChangeResult(const BeliefState&, const WorldSet&)> apply;
    std::optional<WeightFunction> weight; // set for operators that are EDI by construction

    ChangeResult operator()(const BeliefState& b, const WorldSet& evidence) const { return apply(b, evidence); }
    ChangeResult operator()(const BeliefState& b, const Formula& a) const {
        return apply(b, models(a, b.vocabulary()));
    }
};

inline ChangeOperator edi_operator(std::string name, WeightFunction f) {
    auto apply = [f, name](const BeliefState& b, const WorldSet& evidence) {
        ChangeResult r = edi(b, evidence, f);
        r.op = name;
        return r;
    };
    return {std::move(name), std::move(apply), std::move(f)};
}

struct OperatorOptions {
    PseudoDistance distance;
    std::string inner = "rcp"; // rcp | dfr
    Rational eta = 1;
    Rational li_x = 0;
};

inline const std::vector<std::string>& operator_names() {
    static const std::vector<std::string> names = {"bc",     "li",      "gi",      "edi-rcp", "edi-dfr",
                                                   "cls-rev", "dct-rev", "cls-upd", "dct-upd"};
    return names;
}

inline WeightFunction inner_weight(const OperatorOptions& o) {
    if (o.inner == "rcp") return rcp_weight(o.distance, o.eta);
    if (o.inner == "dfr") return dfr_weight(o.distance, o.eta);
    throw InvalidParameter("unknown inner weight '" + o.inner + "' (expected rcp or dfr)");
}

inline ChangeOperator make_operator(std::string_view name, const OperatorOptions& o) {
    const PseudoDistance& d = o.distance;
    if (name == "bc") {
        auto apply = [](const BeliefState& b, const WorldSet& evidence) {
            if (evidence.empty()) throw EmptyEvidence("no world satisfies the evidence");
            return ChangeResult{bayesian_conditioning(b, evidence), mass(b, evidence), "bc", evidence};
        };
        return {"bc", apply, std::nullopt};
    }
    if (name == "li") {
        auto apply = [m = ClosestWorldMap(d)](const BeliefState& b, const WorldSet& evidence) {
            return lewis_imaging(b, evidence, m);
        };
        return {"li", apply, std::nullopt};
    }
    if (name == "gi") {
        auto apply = [d](const BeliefState& b, const WorldSet& evidence) {
            return generalized_imaging(b, evidence, d);
        };
        return {"gi", apply, std::nullopt};
    }
    if (name == "edi-rcp") return edi_operator("edi-rcp", rcp_weight(d, o.eta));
    if (name == "edi-dfr") return edi_operator("edi-dfr", dfr_weight(d, o.eta));
    // The classical route wants a retentive, n-e-relaxed inner weight, so
    // the relaxed base weight is zeroed between evidence worlds first.
    if (name == "cls-rev") return edi_operator("cls-rev", cls_rev_weight(dalal_revision(d), zero_weight(inner_weight(o))));
    if (name == "dct-rev") return edi_operator("dct-rev", dct_rev_weight(inner_weight(o)));
    if (name == "cls-upd") return edi_operator("cls-upd", cls_upd_weight(pma_update(d), inner_weight(o)));
    if (name == "dct-upd") return edi_operator("dct-upd", dct_upd_weight(inner_weight(o)));
    throw InvalidParameter("unknown operator '" + std::string(name) + "'");
}

// Operators whose weights are retentive by construction, for which repeated
// application with the same evidence is a no-op after the first step.
inline bool is_retentive_operator(std::string_view name, const OperatorOptions& o) {
    if (name == "gi") return o.distance.faithful();
    return name == "bc" || name == "li" || name == "cls-rev" || name == "dct-rev";
}

} // namespace edi
