#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edi/belief.hpp"
#include "edi/errors.hpp"
#include "edi/logic.hpp"
#include "edi/operators.hpp"
#include "edi/rational.hpp"

namespace edi {

enum class Postulate {
    PR1, PR2, PR3, PR4, PR5, PR6,
    PU1, PU2a, PU2b, PU2c, PU3, PU4, PU5, PU6a, PU6b, PU7,
};

inline constexpr std::array kRevisionPostulates = {Postulate::PR1, Postulate::PR2, Postulate::PR3,
                                                   Postulate::PR4, Postulate::PR5, Postulate::PR6};
inline constexpr std::array kUpdatePostulates = {Postulate::PU1,  Postulate::PU2a, Postulate::PU2b, Postulate::PU2c,
                                                 Postulate::PU3,  Postulate::PU4,  Postulate::PU5,  Postulate::PU6a,
                                                 Postulate::PU6b, Postulate::PU7};

inline std::string_view postulate_id(Postulate p) {
    constexpr std::string_view ids[] = {"PR1",  "PR2",  "PR3",  "PR4", "PR5", "PR6",  "PU1",  "PU2a",
                                        "PU2b", "PU2c", "PU3",  "PU4", "PU5", "PU6a", "PU6b", "PU7"};
    return ids[static_cast<std::size_t>(p)];
}

inline std::string_view postulate_label(Postulate p) {
    constexpr std::string_view labels[] = {"P∘1",  "P∘2",  "P∘3",  "P∘4", "P∘5", "P∘6",  "P⋄1",  "P⋄2a",
                                           "P⋄2b", "P⋄2c", "P⋄3",  "P⋄4", "P⋄5", "P⋄6a", "P⋄6b", "P⋄7"};
    return labels[static_cast<std::size_t>(p)];
}

inline std::optional<Postulate> postulate_from_id(std::string_view s) {
    for (int i = 0; i <= static_cast<int>(Postulate::PU7); ++i) {
        auto p = static_cast<Postulate>(i);
        if (postulate_id(p) == s || postulate_label(p) == s) return p;
    }
    return std::nullopt;
}

inline bool is_core(Postulate p) {
    switch (p) {
    case Postulate::PR1:
    case Postulate::PR2:
    case Postulate::PR3:
    case Postulate::PU1:
    case Postulate::PU3:
    case Postulate::PU4: return true;
    default: return false;
    }
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxSuiteAtoms = 3;
inline constexpr std::size_t kMaxGridStates = 1000;

// All distributions whose probabilities are multiples of 1/D, in
// lexicographic order of their canonical numerator vectors. Point masses
// are always included (they are the vectors with a single D).
inline std::vector<BeliefState> belief_grid(const Vocabulary& v, unsigned denominator) {
    if (denominator == 0) throw InvalidParameter("grid denominator must be positive");
    if (v.size() > kMaxSuiteAtoms)
        throw SuiteTooLarge("postulate suites are limited to " + std::to_string(kMaxSuiteAtoms) + " atoms");
    const std::size_t n = v.world_count();
    // number of compositions, C(D+n-1, n-1), checked before enumerating
    long double count = 1;
    for (std::size_t i = 1; i < n; ++i) count = count * (denominator + i) / i;
    if (count > kMaxGridStates)
        throw SuiteTooLarge("grid with denominator " + std::to_string(denominator) + " has more than " +
                            std::to_string(kMaxGridStates) + " states");

    std::vector<BeliefState> out;
    std::vector<unsigned> num(n, 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
        if (i + 1 == n) {
            num[i] = left;
            std::vector<Rational> listed;
            for (unsigned k : num) listed.emplace_back(make_rational(k, denominator));
            out.push_back(BeliefState::from_canonical(v, listed));
            return;
        }
        for (unsigned k = 0; k <= left; ++k) {
            num[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, denominator);
    return out;
}

inline unsigned default_grid_denominator(std::size_t atoms) { return atoms >= 3 ? 2 : 4; }

struct SuiteConfig {
    std::size_t atoms = 2;
    unsigned grid = 0; // 0 picks the default for the atom count
};

struct SuiteDescriptor {
    std::size_t atoms = 0;
    unsigned grid = 0;
    std::size_t states = 0;
    std::size_t evidence_sets = 0;
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class PostulateVerdict { Holds, Violated, NotApplicable };

inline std::string_view verdict_name(PostulateVerdict v) {
    switch (v) {
    case PostulateVerdict::Holds: return "holds-on-suite";
    case PostulateVerdict::Violated: return "violated";
    case PostulateVerdict::NotApplicable: return "not-applicable";
    }
    return "?";
}

// One instance of a postulate. Which of beta/psi are used, and what they
// mean, depends on the postulate (see postulate_roles).
struct PostulateInstance {
    BeliefState prior;
    WorldSet alpha;
    std::optional<WorldSet> beta;
    std::optional<WorldSet> psi;
    std::string variant; // syntactic variant for the equivalence postulates
};

struct PostulateWitness {
    PostulateInstance instance;
    std::string detail;
};

// Names of the beta and psi slots, e.g. {"beta", ""} or {"phi", "psi"}.
inline std::pair<std::string_view, std::string_view> postulate_roles(Postulate p) {
    switch (p) {
    case Postulate::PR5:
    case Postulate::PR6: return {"beta", ""};
    case Postulate::PU2b:
    case Postulate::PU2c: return {"phi", ""};
    case Postulate::PU5: return {"phi", "psi"};
    case Postulate::PU6a: return {"alpha2", ""};
    case Postulate::PU6b:
    case Postulate::PU7: return {"alpha2", "phi"};
    default: return {"", ""};
    }
}

struct PostulateResult {
    Postulate postulate;
    PostulateVerdict verdict = PostulateVerdict::NotApplicable;
    std::uint64_t checked = 0;    // instances where the guard held
    std::uint64_t vacuous = 0;    // instances where it did not
    std::uint64_t violations = 0;
    std::optional<PostulateWitness> witness; // first violation in suite order
};

struct PostulateReport {
    std::string op;
    std::string suite_kind; // revision | update
    SuiteDescriptor suite;
    std::vector<PostulateResult> results;

    const PostulateResult& operator[](Postulate p) const {
        for (const auto& r : results)
            if (r.postulate == p) return r;
        throw std::out_of_range("postulate not in report");
    }
    bool cores_hold() const {
        return std::all_of(results.begin(), results.end(), [](const PostulateResult& r) {
            return !is_core(r.postulate) || r.verdict == PostulateVerdict::Holds;
        });
    }
};

// ---------------------------------------------------------------------------
// Instance evaluation
// ---------------------------------------------------------------------------

namespace detail {

// Result of applying an operator, with masses of every world subset
// precomputed (universes here have at most 8 worlds).
struct Outcome {
    bool defined = false;
    std::string error;
    Probabilities p;
    std::vector<Rational> mass; // indexed by subset mask
    std::vector<double> approx; // the same masses in floating point, for prefiltering
    bool distribution = false;

    const Rational& operator()(std::uint64_t mask) const { return mass[mask]; }
};

inline std::vector<Rational> subset_masses(const Probabilities& p) {
    std::vector<Rational> t(std::size_t{1} << p.size());
    t[0] = 0;
    for (std::uint64_t m = 1; m < t.size(); ++m) t[m] = t[m & (m - 1)] + p[std::countr_zero(m)];
    return t;
}

// A postulate subject: b, alpha -> probabilities over worlds. Unlike a
// ChangeOperator it may return something that is not a distribution, so
// that broken operators can be examined.
using RawOperator = std::function<Probabilities(const BeliefState&, const WorldSet&)>;

inline Outcome run(const RawOperator& op, const BeliefState& b, const WorldSet& a) {
    Outcome o;
    try {
        o.p = op(b, a);
        if (o.p.size() != b.world_count()) throw InvalidBeliefState("operator returned the wrong number of worlds");
        o.defined = true;
        o.distribution = is_distribution(o.p);
        o.mass = subset_masses(o.p);
        o.approx.reserve(o.mass.size());
        for (const auto& m : o.mass) o.approx.push_back(m.get_d());
    } catch (const Error& e) {
        o.defined = false;
        o.error = e.what();
    }
    return o;
}

inline std::string render_probs(const Probabilities& p) {
    std::string out = "<";
    for (std::size_t k = p.size(); k-- > 0;) {
        out += to_string(p[k]);
        if (k) out += ",";
    }
    return out + ">";
}

inline std::string describe(const Outcome& o) { return o.defined ? render_probs(o.p) : "undefined (" + o.error + ")"; }

inline bool same(const Outcome& a, const Outcome& b) {
    if (a.defined != b.defined) return false;
    return !a.defined || a.p == b.p;
}

// Expansion (Bayesian conditioning) of raw probabilities.
inline Probabilities conditioned(const Probabilities& p, const Rational& denom, std::uint64_t mask) {
    Probabilities q(p.size(), Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i)
        if ((mask >> i) & 1u) q[i] = p[i] / denom;
    return q;
}

inline std::vector<std::string> syntactic_variants(const WorldSet& a, const Vocabulary& v) {
    std::string dnf = render(formula_of_world_set(a, v), v);
    std::string cnf;
    for (World w : a.complement().members()) {
        std::string clause;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) clause += " | ";
            clause += (truth(w, i, v.size()) ? "!" : "") + v.atoms()[i];
        }
        cnf += (cnf.empty() ? "" : " & ") + (v.size() > 1 ? "(" + clause + ")" : clause);
    }
    if (cnf.empty()) cnf = v.atoms()[0] + " | !" + v.atoms()[0];
    return {dnf, cnf, "!!(" + dnf + ") & true"};
}

enum class Eval { Vacuous, Satisfied, Violated };

struct Judgement {
    Eval eval;
    std::string detail;
};

inline Judgement vacuous() { return {Eval::Vacuous, {}}; }
inline Judgement satisfied() { return {Eval::Satisfied, {}}; }
inline Judgement violated(std::string d) { return {Eval::Violated, std::move(d)}; }

// Evaluates one instance. `get` yields the operator's outcome on the
// instance's prior for an evidence mask.
inline Judgement evaluate(Postulate p, const RawOperator& op, const PostulateInstance& inst,
                          const std::function<const Outcome&(std::uint64_t)>& get) {
    const BeliefState& b = inst.prior;
    const Vocabulary& v = b.vocabulary();
    const std::uint64_t A = inst.alpha.mask();
    const std::uint64_t B = inst.beta ? inst.beta->mask() : 0;
    const std::uint64_t S = inst.psi ? inst.psi->mask() : 0;
    auto prior_mass = [&](std::uint64_t m) { return mass(b, WorldSet::from_mask(m, b.world_count())); };

    switch (p) {
    case Postulate::PR1:
    case Postulate::PU3: {
        const Outcome& r = get(A);
        if (!r.defined) return violated("result undefined: " + r.error);
        if (!r.distribution) return violated("result " + describe(r) + " is not a probability distribution");
        return satisfied();
    }
    case Postulate::PR2:
    case Postulate::PU1: {
        const Outcome& r = get(A);
        if (!r.defined) return vacuous();
        if (r(A) != 1) return violated("result " + describe(r) + " gives the evidence mass " + to_string(r(A)));
        return satisfied();
    }
    case Postulate::PR3:
    case Postulate::PU4: {
        const Outcome& r = get(A);
        Formula f = parse_formula(inst.variant, v);
        WorldSet m = models(f, v);
        if (m != inst.alpha) return violated("variant '" + inst.variant + "' has different models");
        Outcome r2 = run(op, b, m);
        if (!same(r, r2))
            return violated("variant '" + inst.variant + "' gives " + describe(r2) + ", canonical form gives " +
                            describe(r));
        return satisfied();
    }
    case Postulate::PR4: {
        Rational ba = prior_mass(A);
        const Outcome& r = get(A);
        if (sgn(ba) == 0 || !r.defined) return vacuous();
        Probabilities plus = conditioned(b.probabilities(), ba, A);
        if (r.p != plus) return violated("result " + describe(r) + " but expansion gives " + render_probs(plus));
        return satisfied();
    }
    case Postulate::PR5: {
        const Outcome& r = get(A);
        if (!r.defined || sgn(r(B)) == 0 || (A & B) == 0) return vacuous();
        const Outcome& rab = get(A & B);
        Probabilities plus = conditioned(r.p, r(B), B);
        if (!rab.defined || rab.p != plus)
            return violated("revising by alpha&beta gives " + describe(rab) + " but expanding the revision gives " +
                            render_probs(plus));
        return satisfied();
    }
    case Postulate::PR6: {
        const Outcome& r = get(A);
        if (!r.defined || B == 0 || (B & ~A) != 0) return vacuous();
        Rational before = prior_mass(B);
        if (r(B) < before)
            return violated("mass of beta drops from " + to_string(before) + " to " + to_string(r(B)));
        return satisfied();
    }
    case Postulate::PU2a: {
        const Outcome& r = get(A);
        if (prior_mass(A) != 1 || !r.defined) return vacuous();
        if (r.p != b.probabilities())
            return violated("prior already certain of alpha but result is " + describe(r));
        return satisfied();
    }
    case Postulate::PU2b:
    case Postulate::PU2c: {
        const Outcome& r = get(A);
        if (!r.defined || B == 0 || (B & ~A) != 0) return vacuous();
        bool before = sgn(prior_mass(B)) > 0;
        bool after = sgn(r(B)) > 0;
        if (p == Postulate::PU2c && !before) return vacuous();
        if (before != after)
            return violated("phi has prior mass " + to_string(prior_mass(B)) + " and posterior mass " +
                            to_string(r(B)));
        return satisfied();
    }
    case Postulate::PU5: {
        if ((A & B) == 0 || S == 0 || (S & ~B) != 0) return vacuous();
        const Outcome& r = get(A);
        const Outcome& rab = get(A & B);
        if (!r.defined || !rab.defined) return vacuous();
        if (rab(S) < r(S))
            return violated("psi has mass " + to_string(r(S)) + " after alpha but " + to_string(rab(S)) +
                            " after alpha&phi");
        return satisfied();
    }
    case Postulate::PU6a:
    case Postulate::PU6b: {
        const Outcome& r1 = get(A);
        const Outcome& r2 = get(B);
        if (!r1.defined || !r2.defined || r1(B) != 1 || r2(A) != 1) return vacuous();
        if (p == Postulate::PU6a) {
            if (r1.p != r2.p) return violated("results " + describe(r1) + " and " + describe(r2) + " differ");
            return satisfied();
        }
        if (S == 0) return vacuous();
        if ((sgn(r1(S)) > 0) != (sgn(r2(S)) > 0))
            return violated("phi has mass " + to_string(r1(S)) + " after alpha1 but " + to_string(r2(S)) +
                            " after alpha2");
        return satisfied();
    }
    case Postulate::PU7: {
        bool point = std::any_of(b.probabilities().begin(), b.probabilities().end(),
                                 [](const Rational& x) { return x == 1; });
        if (!point || S == 0) return vacuous();
        const Outcome& r1 = get(A);
        const Outcome& r2 = get(B);
        const Outcome& r12 = get(A | B);
        if (!r1.defined || !r2.defined || !r12.defined) return vacuous();
        const Rational& lo = std::min(r1(S), r2(S));
        Rational hi = r1(S) + r2(S);
        if (r12(S) < lo || r12(S) > hi)
            return violated("mass of phi after alpha1|alpha2 is " + to_string(r12(S)) + ", outside [" +
                            to_string(lo) + ", " + to_string(hi) + "]");
        return satisfied();
    }
    }
    return vacuous();
}

// x(s) < y(s), decided in floating point when the gap is far above
// rounding error and exactly otherwise.
inline bool mass_less(const Outcome& x, const Outcome& y, std::uint64_t s) {
    constexpr double margin = 1e-9;
    double dx = x.approx[s], dy = y.approx[s];
    if (dx < dy - margin) return true;
    if (dx > dy + margin) return false;
    return x(s) < y(s);
}

inline std::vector<std::uint64_t> submasks(std::uint64_t m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 1; s <= m; ++s)
        if ((s & ~m) == 0) out.push_back(s);
    return out;
}

} // namespace detail

inline detail::RawOperator raw(const ChangeOperator& op) {
    return [op](const BeliefState& b, const WorldSet& a) { return op(b, a).posterior.probabilities(); };
}

// Re-runs a witness from scratch. True when the violation reproduces.
inline bool replay(Postulate p, const detail::RawOperator& op, const PostulateInstance& inst) {
    std::map<std::uint64_t, detail::Outcome> cache;
    auto get = [&](std::uint64_t m) -> const detail::Outcome& {
        auto it = cache.find(m);
        if (it == cache.end())
            it = cache.emplace(m, detail::run(op, inst.prior, WorldSet::from_mask(m, inst.prior.world_count()))).first;
        return it->second;
    };
    return detail::evaluate(p, op, inst, get).eval == detail::Eval::Violated;
}

inline bool replay(Postulate p, const ChangeOperator& op, const PostulateInstance& inst) {
    return replay(p, raw(op), inst);
}

// Sweeps every postulate in `which` over the grid and all non-empty
// evidence sets. Instances are enumerated state by state (grid order),
// then by alpha mask, then by the secondary masks, each ascending; the
// first violation in that order is the witness.
inline PostulateReport check_postulates(std::string op_name, const detail::RawOperator& op, const Vocabulary& v,
                                        const std::vector<Postulate>& which, SuiteConfig cfg = {}) {
    if (v.size() > kMaxSuiteAtoms)
        throw SuiteTooLarge("postulate suites are limited to " + std::to_string(kMaxSuiteAtoms) + " atoms");
    unsigned D = cfg.grid ? cfg.grid : default_grid_denominator(v.size());
    auto grid = belief_grid(v, D);
    const std::size_t N = v.world_count();
    const std::uint64_t full = (std::uint64_t{1} << N) - 1;

    PostulateReport report;
    report.op = std::move(op_name);
    report.suite = {v.size(), D, grid.size(), static_cast<std::size_t>(full)};
    for (Postulate p : which) report.results.push_back({p, PostulateVerdict::NotApplicable, 0, 0, 0, std::nullopt});

    std::vector<std::vector<std::string>> variants(full + 1);
    for (std::uint64_t a = 1; a <= full; ++a) variants[a] = detail::syntactic_variants(WorldSet::from_mask(a, N), v);

    std::vector<detail::Outcome> cache(full + 1);
    for (const BeliefState& b : grid) {
        for (std::uint64_t a = 1; a <= full; ++a) cache[a] = detail::run(op, b, WorldSet::from_mask(a, N));
        auto get = [&](std::uint64_t m) -> const detail::Outcome& { return cache.at(m); };
        const bool point_mass = std::any_of(b.probabilities().begin(), b.probabilities().end(),
                                            [](const Rational& x) { return x == 1; });

        for (auto& res : report.results) {
            const Postulate p = res.postulate;
            PostulateInstance inst{b, WorldSet(N), std::nullopt, std::nullopt, {}};
            auto record = [&](const detail::Judgement& j) {
                switch (j.eval) {
                case detail::Eval::Vacuous: ++res.vacuous; break;
                case detail::Eval::Satisfied: ++res.checked; break;
                case detail::Eval::Violated:
                    ++res.checked;
                    ++res.violations;
                    if (!res.witness) res.witness = PostulateWitness{inst, j.detail};
                    break;
                }
            };
            auto judge = [&]() { record(detail::evaluate(p, op, inst, get)); };

            for (std::uint64_t a = 1; a <= full; ++a) {
                inst.alpha = WorldSet::from_mask(a, N);
                switch (p) {
                case Postulate::PR3:
                case Postulate::PU4:
                    for (const auto& text : variants[a]) {
                        inst.variant = text;
                        judge();
                    }
                    inst.variant.clear();
                    break;
                case Postulate::PR5:
                    for (std::uint64_t x = 1; x <= full; ++x) {
                        inst.beta = WorldSet::from_mask(x, N);
                        judge();
                    }
                    break;
                case Postulate::PR6:
                case Postulate::PU2b:
                case Postulate::PU2c:
                    for (std::uint64_t x : detail::submasks(a)) {
                        inst.beta = WorldSet::from_mask(x, N);
                        judge();
                    }
                    break;
                case Postulate::PU5:
                    for (std::uint64_t x = 1; x <= full; ++x) {
                        if ((a & x) == 0) continue;
                        inst.beta = WorldSet::from_mask(x, N);
                        // psi ranges over the subsets of phi; per-world
                        // dominance decides all of them at once, and only a
                        // failing phi is scanned for its first psi.
                        const auto& r = cache[a];
                        const auto& rab = cache[a & x];
                        std::uint64_t subsets = (std::uint64_t{1} << std::popcount(x)) - 1;
                        if (!r.defined || !rab.defined) {
                            res.vacuous += subsets;
                            continue;
                        }
                        bool dominated = true;
                        for (std::size_t i = 0; i < N; ++i)
                            if (((x >> i) & 1u) && rab.p[i] < r.p[i]) dominated = false;
                        if (dominated) {
                            res.checked += subsets;
                            continue;
                        }
                        for (std::uint64_t s : detail::submasks(x)) {
                            inst.psi = WorldSet::from_mask(s, N);
                            judge();
                        }
                        inst.psi.reset();
                    }
                    break;
                case Postulate::PU6a:
                    for (std::uint64_t x = 1; x <= full; ++x) {
                        inst.beta = WorldSet::from_mask(x, N);
                        judge();
                    }
                    break;
                case Postulate::PU6b:
                case Postulate::PU7:
                    // Triple quantifier: decided straight from the mass
                    // tables, materializing an instance only on violation.
                    for (std::uint64_t x = 1; x <= full; ++x) {
                        const auto& r1 = cache[a];
                        const auto& r2 = cache[x];
                        bool guard = r1.defined && r2.defined;
                        if (p == Postulate::PU6b) guard = guard && r1(x) == 1 && r2(a) == 1;
                        else guard = guard && point_mass && cache[a | x].defined;
                        if (!guard) {
                            res.vacuous += full;
                            continue;
                        }
                        const auto& r12 = cache[a | x];
                        // The upper bound is additive, so it holds for every
                        // phi iff it holds world by world.
                        bool upper_ok = true;
                        if (p == Postulate::PU7)
                            for (std::size_t i = 0; i < N; ++i)
                                if (r12.p[i] > r1.p[i] + r2.p[i]) upper_ok = false;
                        for (std::uint64_t s = 1; s <= full; ++s) {
                            bool bad;
                            if (p == Postulate::PU6b) {
                                bad = (sgn(r1(s)) > 0) != (sgn(r2(s)) > 0);
                            } else {
                                bad = (detail::mass_less(r12, r1, s) && detail::mass_less(r12, r2, s)) ||
                                      (!upper_ok && r12(s) > r1(s) + r2(s));
                            }
                            if (!bad) {
                                ++res.checked;
                                continue;
                            }
                            if (res.witness) {
                                ++res.checked;
                                ++res.violations;
                                continue;
                            }
                            inst.beta = WorldSet::from_mask(x, N);
                            inst.psi = WorldSet::from_mask(s, N);
                            judge();
                        }
                    }
                    break;
                default: judge(); break;
                }
                inst.beta.reset();
                inst.psi.reset();
            }
        }
    }

    for (auto& res : report.results) {
        if (res.violations) res.verdict = PostulateVerdict::Violated;
        else if (res.checked) res.verdict = PostulateVerdict::Holds;
        else res.verdict = PostulateVerdict::NotApplicable;
    }
    return report;
}

inline PostulateReport check_revision(const ChangeOperator& op, const Vocabulary& v, SuiteConfig cfg = {}) {
    auto r = check_postulates(op.name, raw(op), v, {kRevisionPostulates.begin(), kRevisionPostulates.end()}, cfg);
    r.suite_kind = "revision";
    return r;
}

inline PostulateReport check_update(const ChangeOperator& op, const Vocabulary& v, SuiteConfig cfg = {}) {
    auto r = check_postulates(op.name, raw(op), v, {kUpdatePostulates.begin(), kUpdatePostulates.end()}, cfg);
    r.suite_kind = "update";
    return r;
}

} // namespace edi
