#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "edi/belief.hpp"
#include "edi/errors.hpp"
#include "edi/imaging.hpp"
#include "edi/logic.hpp"
#include "edi/metric.hpp"
#include "edi/postulates.hpp"
#include "edi/rational.hpp"
#include "edi/weights.hpp"

namespace edi::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(what + " is not valid JSON: " + e.what());
    }
}

namespace detail {

inline Vocabulary vocabulary_of(const Json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
        throw InvalidVocabulary(what + " needs an \"atoms\" array");
    std::vector<std::string> atoms;
    for (const auto& a : j["atoms"]) {
        if (!a.is_string()) throw InvalidVocabulary(what + ": atom names must be strings");
        atoms.push_back(a.get<std::string>());
    }
    return Vocabulary(std::move(atoms));
}

// Exact numbers only: strings such as "3/10" or "0.3", or JSON integers.
// JSON floats would already have been rounded to binary, so they are refused.
template <class E>
Rational number_of(const Json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const InvalidParameter& e) {
            throw E(where + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw E(where + ": expected a rational string such as \"3/10\"");
}

} // namespace detail

// {"atoms": ["q","r"], "probabilities": {"11":"3/10", "10":"7/10"}};
// unlisted worlds get 0.
inline BeliefState belief_state_from_json(const Json& j) {
    Vocabulary v = detail::vocabulary_of(j, "belief state");
    if (!j.contains("probabilities") || !j["probabilities"].is_object())
        throw InvalidBeliefState("belief state needs a \"probabilities\" object");
    Probabilities p(v.world_count(), Rational(0));
    std::vector<bool> seen(v.world_count(), false);
    for (const auto& [key, value] : j["probabilities"].items()) {
        World w;
        try {
            w = parse_world(key, v);
        } catch (const ParseError&) {
            throw InvalidBeliefState("'" + key + "' is not a world over " + std::to_string(v.size()) + " atoms");
        }
        if (seen[w.bits]) throw InvalidBeliefState("world " + key + " listed twice");
        seen[w.bits] = true;
        p[w.bits] = detail::number_of<InvalidBeliefState>(value, "probability of " + key);
    }
    return BeliefState(std::move(v), std::move(p));
}

inline BeliefState load_belief_state(const std::string& path) {
    return belief_state_from_json(parse_json(read_file(path), path));
}

// World -> rational string, in canonical order.
inline Json probabilities_json(const BeliefState& b) {
    Json out = Json::object();
    for (World w : canonical_worlds(b.vocabulary())) out[render(w, b.vocabulary())] = to_string(b[w]);
    return out;
}

inline Json belief_state_json(const BeliefState& b) {
    return Json{{"atoms", b.vocabulary().atoms()}, {"probabilities", probabilities_json(b)}};
}

inline Json world_set_json(const WorldSet& s, const Vocabulary& v) {
    Json out = Json::array();
    for (World w : s.members()) out.push_back(render(w, v));
    return out;
}

struct LoadedDistance {
    PseudoDistance distance;
    DistanceReport report;
};

// {"atoms": [...], "entries": {"11,00": "2", ...}}. A pair given in one
// direction only is mirrored; the diagonal defaults to 0; any other missing
// pair is an error. The table is validated but not rejected here, so
// callers can decide what a broken table means to them.
inline LoadedDistance distance_from_json(const Json& j) {
    Vocabulary v = detail::vocabulary_of(j, "distance table");
    if (!j.contains("entries") || !j["entries"].is_object())
        throw InvalidDistance("distance table needs an \"entries\" object");
    const std::size_t n = v.world_count();
    std::vector<std::optional<std::int64_t>> t(n * n);
    for (const auto& [key, value] : j["entries"].items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw InvalidDistance("entry key '" + key + "' is not of the form w,w'");
        World a, b;
        try {
            a = parse_world(key.substr(0, comma), v);
            b = parse_world(key.substr(comma + 1), v);
        } catch (const ParseError&) {
            throw InvalidDistance("entry key '" + key + "' does not name two worlds");
        }
        Rational r = detail::number_of<InvalidDistance>(value, "entry " + key);
        if (r.get_den() != 1 || !r.get_num().fits_slong_p())
            throw InvalidDistance("entry " + key + " must be an integer, got " + to_string(r));
        if (t[a.bits * n + b.bits]) throw InvalidDistance("entry " + key + " listed twice");
        t[a.bits * n + b.bits] = r.get_num().get_si();
    }
    std::vector<std::int64_t> table(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            auto& x = t[a * n + b];
            if (x) table[a * n + b] = *x;
            else if (t[b * n + a]) table[a * n + b] = *t[b * n + a];
            else if (a == b) table[a * n + b] = 0;
            else
                throw InvalidDistance("no entry for " + render(World{static_cast<std::uint32_t>(a)}, v) + "," +
                                      render(World{static_cast<std::uint32_t>(b)}, v));
        }
    PseudoDistance d(v, std::move(table));
    DistanceReport rep = validate_pseudo_distance(d);
    return {std::move(d), std::move(rep)};
}

inline LoadedDistance load_distance(const std::string& path) {
    return distance_from_json(parse_json(read_file(path), path));
}

inline Json distance_report_json(const DistanceReport& r, const Vocabulary& v) {
    Json out = Json::object();
    for (const auto& c : r.checks) {
        Json e{{"holds", c.holds}};
        if (!c.holds) {
            Json w = Json::array();
            for (World x : c.witness) w.push_back(render(x, v));
            e["witness"] = w;
        }
        out[c.name] = e;
    }
    return out;
}

inline Json change_result_json(const ChangeResult& r, bool with_gamma) {
    Json out{{"operator", r.op},
             {"evidence", world_set_json(r.evidence, r.posterior.vocabulary())},
             {"posterior", probabilities_json(r.posterior)}};
    if (with_gamma) out["gamma"] = to_string(r.gamma);
    return out;
}

inline Json property_report_json(const PropertyReport& r, const Vocabulary& v) {
    Json props = Json::object();
    for (const auto& pv : r.verdicts) {
        Json e{{"verdict", pv.holds ? "holds-on-suite" : "violated"}};
        if (pv.witness) {
            const auto& w = *pv.witness;
            Json wj{{"evidence", world_set_json(w.evidence, v)}};
            if (w.prior) wj["prior"] = probabilities_json(*w.prior);
            Json worlds = Json::array();
            for (World x : w.worlds) worlds.push_back(render(x, v));
            wj["worlds"] = worlds;
            Json values = Json::array();
            for (const auto& x : w.values) values.push_back(to_string(x));
            wj["values"] = values;
            e["witness"] = wj;
        }
        props[std::string(property_name(pv.property))] = e;
    }
    return Json{{"weight", r.weight},
                {"domain", r.domain},
                {"inverse-distance", r.inverse_distance()},
                {"relaxed", r.relaxed()},
                {"properties", props}};
}

inline Json postulate_instance_json(Postulate p, const PostulateInstance& inst) {
    const Vocabulary& v = inst.prior.vocabulary();
    Json out{{"prior", probabilities_json(inst.prior)},
             {"alpha", render(formula_of_world_set(inst.alpha, v), v)},
             {"alpha_models", world_set_json(inst.alpha, v)}};
    auto [beta_role, psi_role] = postulate_roles(p);
    if (inst.beta && !beta_role.empty()) {
        out[std::string(beta_role)] = render(formula_of_world_set(*inst.beta, v), v);
        out[std::string(beta_role) + "_models"] = world_set_json(*inst.beta, v);
    }
    if (inst.psi && !psi_role.empty()) {
        out[std::string(psi_role)] = render(formula_of_world_set(*inst.psi, v), v);
        out[std::string(psi_role) + "_models"] = world_set_json(*inst.psi, v);
    }
    if (!inst.variant.empty()) out["variant"] = inst.variant;
    return out;
}

// postulate id -> {verdict, witness?, suite, ...}, in report order.
inline Json postulate_report_json(const PostulateReport& r, bool all) {
    Json suite{{"kind", r.suite_kind},
               {"atoms", r.suite.atoms},
               {"grid_denominator", r.suite.grid},
               {"states", r.suite.states},
               {"evidence_sets", r.suite.evidence_sets}};
    Json ps = Json::object();
    for (const auto& res : r.results) {
        if (!all && !is_core(res.postulate)) continue;
        Json e{{"verdict", std::string(verdict_name(res.verdict))}};
        if (res.witness) {
            Json w = postulate_instance_json(res.postulate, res.witness->instance);
            w["detail"] = res.witness->detail;
            e["witness"] = w;
        }
        e["suite"] = suite;
        e["label"] = std::string(postulate_label(res.postulate));
        e["core"] = is_core(res.postulate);
        e["checked"] = res.checked;
        e["vacuous"] = res.vacuous;
        e["violations"] = res.violations;
        ps[std::string(postulate_id(res.postulate))] = e;
    }
    return Json{{"operator", r.op}, {"suite", suite}, {"postulates", ps}};
}

} // namespace edi::io
