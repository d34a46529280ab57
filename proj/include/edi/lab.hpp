#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "edi/belief.hpp"
#include "edi/errors.hpp"
#include "edi/imaging.hpp"
#include "edi/logic.hpp"
#include "edi/metric.hpp"
#include "edi/rational.hpp"
#include "edi/weights.hpp"

namespace edi::lab {

enum class WeightKind { Rcp, Dfr, Bc };

inline std::string weight_kind_name(WeightKind k) {
    switch (k) {
    case WeightKind::Rcp: return "rcp";
    case WeightKind::Dfr: return "dfr";
    case WeightKind::Bc: return "bc";
    }
    return "?";
}

inline WeightKind parse_weight_kind(std::string_view s) {
    if (s == "rcp") return WeightKind::Rcp;
    if (s == "dfr") return WeightKind::Dfr;
    if (s == "bc") return WeightKind::Bc;
    throw InvalidParameter("unknown weight '" + std::string(s) + "' (expected rcp, dfr or bc)");
}

struct TrialConfig {
    WeightKind weight = WeightKind::Rcp;
    Rational eta = 1;
    std::size_t atoms = 3;
    std::size_t trials = 100;
    std::size_t iterations = 10;
    std::uint64_t seed = 0;
    // When set, every trial's evidence has exactly this many models.
    std::optional<std::size_t> forced_evidence_size;
    // 0 = one per hardware thread. Never affects results.
    std::size_t workers = 1;
};

inline void validate(const TrialConfig& c) {
    if (c.trials < 1) throw InvalidParameter("trials must be at least 1");
    if (c.iterations < 2) throw InvalidParameter("iterations must be at least 2");
    if (c.atoms < 1 || c.atoms > kMaxAtoms) throw InvalidParameter("atoms must lie in [1,16]");
    if (c.weight != WeightKind::Bc && sgn(c.eta) <= 0) throw InvalidParameter("eta must be positive");
    if (c.forced_evidence_size) {
        std::size_t k = *c.forced_evidence_size;
        if (k == 0 || k >= (std::size_t{1} << c.atoms))
            throw InvalidParameter("forced evidence size must name a non-empty proper subset");
    }
}

inline WeightFunction make_weight(const TrialConfig& c, const PseudoDistance& d) {
    switch (c.weight) {
    case WeightKind::Rcp: return rcp_weight(d, c.eta);
    case WeightKind::Dfr: return dfr_weight(d, c.eta);
    case WeightKind::Bc: return bc_weight();
    }
    throw InvalidParameter("unknown weight");
}

// ---------------------------------------------------------------------------
// Randomness. Everything is derived from explicit 64-bit generators so runs
// are reproducible across platforms and standard libraries; std::
// distributions are avoided for that reason.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// The seed is split before the trial index is mixed in; xoring raw seeds
// with small indices would make neighbouring seeds share trial streams.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return splitmix64(splitmix64(seed) ^ trial); }

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    return std::mt19937_64(trial_seed(seed, trial));
}

// Uniform on (0,1], never 0 so that log() is finite.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53; }

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
}

inline constexpr long kSimplexGrain = 1000000;

// Uniform point of the simplex by normalized exponential spacings, rounded
// to multiples of 1e-6 and renormalized exactly.
inline BeliefState sample_belief_state(std::mt19937_64& rng, const Vocabulary& v) {
    const std::size_t n = v.world_count();
    std::vector<double> e(n);
    double total = 0;
    for (auto& x : e) total += (x = -std::log(uniform01(rng)));
    std::vector<long> k(n);
    long sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += (k[i] = std::lround(e[i] / total * kSimplexGrain));
    if (sum == 0) return BeliefState::uniform_on(v, WorldSet::full(n));
    Probabilities p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = make_rational(k[i], sum);
    return BeliefState(v, std::move(p));
}

// Uniform over the non-empty proper subsets of the worlds.
inline WorldSet sample_evidence(std::mt19937_64& rng, const Vocabulary& v) {
    const std::size_t n = v.world_count();
    if (n < 2) throw InvalidParameter("need at least two worlds for a proper non-empty subset");
    for (;;) {
        WorldSet s(n);
        for (std::size_t i = 0; i < n; ++i)
            if (rng() >> 63) s.insert(World{static_cast<std::uint32_t>(i)});
        if (!s.empty() && s.size() != n) return s;
    }
}

// Uniform over the subsets with exactly k worlds (partial Fisher-Yates).
inline WorldSet sample_evidence_of_size(std::mt19937_64& rng, const Vocabulary& v, std::size_t k) {
    const std::size_t n = v.world_count();
    if (k == 0 || k >= n) throw InvalidParameter("evidence size must lie strictly between 0 and the world count");
    std::vector<std::uint32_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
    WorldSet s(n);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + uniform_below(rng, n - i);
        std::swap(idx[i], idx[j]);
        s.insert(World{idx[i]});
    }
    return s;
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

struct TrialResult {
    BeliefState initial;
    WorldSet evidence;
    std::vector<Rational> mean_abs_diff; // entry t-1 is mean_w |b_t(w) - b_{t-1}(w)|
    std::vector<BeliefState> states;     // b_1 .. b_T
};

inline Rational mean_abs_diff(const BeliefState& a, const BeliefState& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.world_count(); ++i) {
        World w{static_cast<std::uint32_t>(i)};
        s += abs(Rational(a[w] - b[w]));
    }
    return s / static_cast<long>(a.world_count());
}

inline TrialResult run_trial(const TrialConfig& c, const WeightFunction& f, const Vocabulary& v,
                             std::uint64_t trial) {
    auto rng = trial_rng(c.seed, trial);
    BeliefState b0 = sample_belief_state(rng, v);
    WorldSet a = c.forced_evidence_size ? sample_evidence_of_size(rng, v, *c.forced_evidence_size)
                                        : sample_evidence(rng, v);
    TrialResult r{b0, a, {}, {}};
    const BeliefState* prev = &r.initial;
    r.states.reserve(c.iterations);
    for (std::size_t t = 0; t < c.iterations; ++t) {
        r.states.push_back(edi(*prev, a, f).posterior);
        r.mean_abs_diff.push_back(mean_abs_diff(r.states.back(), *prev));
        prev = &r.states.back();
    }
    return r;
}

struct ConvergenceTable {
    TrialConfig config;
    std::vector<Rational> mean_abs_diff; // one entry per iteration
    std::vector<TrialResult> trials;     // kept when requested
};

inline ConvergenceTable run_convergence(const TrialConfig& c, bool keep_trials = false) {
    validate(c);
    const Vocabulary v = Vocabulary::numbered(c.atoms);
    const WeightFunction f = make_weight(c, hamming(v));

    std::vector<std::optional<TrialResult>> slots(c.trials);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(c.trials);
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < c.trials;) {
            try {
                slots[t] = run_trial(c, f, v, t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    std::size_t workers = c.workers ? c.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, c.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e); // lowest failing trial, independent of scheduling

    ConvergenceTable table{c, std::vector<Rational>(c.iterations, Rational(0)), {}};
    for (auto& slot : slots) {
        for (std::size_t t = 0; t < c.iterations; ++t) table.mean_abs_diff[t] += slot->mean_abs_diff[t];
        if (keep_trials) table.trials.push_back(std::move(*slot));
    }
    for (auto& m : table.mean_abs_diff) m /= static_cast<long>(c.trials);
    return table;
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

inline std::string csv_filename(const TrialConfig& c) {
    return weight_kind_name(c.weight) + "_eta" + c.eta.get_num().get_str() + "-" + c.eta.get_den().get_str() +
           "_seed" + std::to_string(c.seed) + ".csv";
}

inline std::string csv_text(const ConvergenceTable& t) {
    if (t.mean_abs_diff.empty()) throw InvalidParameter("convergence table has no rows");
    std::string out = "iteration,mean_abs_diff\n";
    for (std::size_t i = 0; i < t.mean_abs_diff.size(); ++i)
        out += std::to_string(i + 1) + "," + to_decimal(t.mean_abs_diff[i], 12) + "\n";
    return out;
}

inline void emit_csv(const ConvergenceTable& t, const std::string& path) {
    std::string text = csv_text(t);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("failed writing '" + path + "'");
}

inline std::string emit_summary(const ConvergenceTable& t) {
    if (t.mean_abs_diff.empty()) throw InvalidParameter("convergence table has no rows");
    const auto& c = t.config;
    const Rational& first = t.mean_abs_diff.front();
    const Rational& last = t.mean_abs_diff.back();
    std::ostringstream s;
    s << "weight " << weight_kind_name(c.weight) << ", eta " << to_string(c.eta) << ", " << c.atoms << " atoms, "
      << c.trials << " trials, " << c.iterations << " iterations, seed " << c.seed << "\n";
    s << "first mean |diff|: " << to_decimal(first, 12) << "\n";
    s << "last mean |diff|:  " << to_decimal(last, 12) << "\n";
    if (sgn(first) != 0) s << "last/first:        " << to_decimal(Rational(last / first), 12) << "\n";
    else s << "last/first:        undefined (first difference is 0)\n";
    return s.str();
}

} // namespace edi::lab
