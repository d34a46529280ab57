#pragma once

// Slow, direct re-implementations used as test oracles. Nothing here calls
// into the library's engine: worlds are plain integers, distances are
// computed from bit patterns, and sums run over every world.

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;
using Dist = std::vector<Q>; // indexed by world bits

inline int ham(unsigned a, unsigned b) { return std::popcount(a ^ b); }

// EDI written out: for w in A, sum_{w'} b(w') * delta(w, w'), then
// divide by the total. delta is (target, source).
inline Dist edi(const Dist& b, std::uint64_t A, const std::function<Q(unsigned, unsigned)>& delta) {
    const unsigned N = static_cast<unsigned>(b.size());
    Dist out(N, Q(0));
    Q gamma = 0;
    for (unsigned w = 0; w < N; ++w) {
        if (!((A >> w) & 1u)) continue;
        for (unsigned src = 0; src < N; ++src) out[w] += b[src] * delta(w, src);
        gamma += out[w];
    }
    for (auto& x : out) x /= gamma;
    return out;
}

inline Q rcp(int d, const Q& eta) { return eta / (d + eta); }
inline Q dfr(int d, int dmax, const Q& eta) { return (dmax + eta - d) / (dmax + eta); }

inline Dist bc(const Dist& b, std::uint64_t A) {
    Q m = 0;
    for (unsigned w = 0; w < b.size(); ++w)
        if ((A >> w) & 1u) m += b[w];
    Dist out(b.size(), Q(0));
    for (unsigned w = 0; w < b.size(); ++w)
        if ((A >> w) & 1u) out[w] = b[w] / m;
    return out;
}

// Closest A-world to `from` under hamming, ties to the larger bit pattern
// (the world printed first).
inline unsigned closest(std::uint64_t A, unsigned from, unsigned N) {
    int best = -1;
    unsigned pick = 0;
    for (unsigned k = N; k-- > 0;)
        if ((A >> k) & 1u) {
            int d = ham(k, from);
            if (best < 0 || d < best) best = d, pick = k;
        }
    return pick;
}

inline Dist lewis(const Dist& b, std::uint64_t A) {
    const unsigned N = static_cast<unsigned>(b.size());
    Dist out(N, Q(0));
    for (unsigned src = 0; src < N; ++src) out[closest(A, src, N)] += b[src];
    return out;
}

// Generalized imaging over an arbitrary distance table d[a*N+b].
inline Dist gi(const Dist& b, std::uint64_t A, const std::vector<long>& d) {
    const unsigned N = static_cast<unsigned>(b.size());
    Dist out(N, Q(0));
    for (unsigned src = 0; src < N; ++src) {
        long best = -1;
        for (unsigned k = 0; k < N; ++k)
            if (((A >> k) & 1u) && (best < 0 || d[k * N + src] < best)) best = d[k * N + src];
        std::vector<unsigned> near;
        for (unsigned k = 0; k < N; ++k)
            if (((A >> k) & 1u) && d[k * N + src] == best) near.push_back(k);
        for (unsigned k : near) out[k] += b[src] / static_cast<long>(near.size());
    }
    return out;
}

inline std::vector<long> hamming_table(unsigned N) {
    std::vector<long> d(N * N);
    for (unsigned a = 0; a < N; ++a)
        for (unsigned b = 0; b < N; ++b) d[a * N + b] = ham(a, b);
    return d;
}

// All distributions with denominator D over N worlds, in any order.
inline std::vector<Dist> grid(unsigned N, unsigned D) {
    std::vector<Dist> out;
    std::vector<unsigned> k(N, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned left) {
        if (i + 1 == N) {
            k[i] = left;
            Dist p(N);
            for (unsigned j = 0; j < N; ++j) p[j] = Q(k[j], D);
            for (auto& x : p) x.canonicalize();
            out.push_back(p);
            return;
        }
        for (unsigned x = 0; x <= left; ++x) k[i] = x, rec(i + 1, left - x);
    };
    rec(0, D);
    return out;
}

} // namespace oracle
