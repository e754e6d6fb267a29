#pragma once

#include <random>
#include <vector>

#include "nsbox/box.hpp"
#include "nsbox/polytope.hpp"
#include "nsbox/relabel.hpp"
#include "nsbox/wiring.hpp"

namespace nsbox::testing {

using Rng = std::mt19937_64;

// Random exact box: a random rational convex combination of the 24 extremal
// boxes. Covers the whole non-signaling polytope.
inline Box random_box(Rng& rng) {
    static const VPolytope ns = ns_polytope();
    std::uniform_int_distribution<int> d(0, 12);
    std::vector<Rat> w(ns.size());
    Rat total(0);
    for (auto& v : w) {
        v = d(rng);
        total += v;
    }
    if (total == 0) {
        w[0] = 1;
        total = 1;
    }
    Box out;
    for (std::size_t j = 0; j < ns.size(); ++j) {
        if (w[j] == 0) continue;
        Rat f = w[j] / total;
        for (int i = 0; i < 16; ++i) out.p[i] += f * ns.vertices[j].p[i];
    }
    return out;
}

inline Box random_local_vertex(Rng& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    return make_local_deterministic(bit(rng), bit(rng), bit(rng), bit(rng));
}

inline TruthTable random_table(int arity, Rng& rng) {
    TruthTable t(arity);
    std::uniform_int_distribution<std::uint64_t> d;
    for (auto& w : t.words) w = d(rng);
    if (t.arity < 6) t.words[0] &= (std::uint64_t(1) << (1u << arity)) - 1;
    return t;
}

inline PartyStrategy random_strategy(int n, Rng& rng) {
    PartyStrategy s;
    s.order.resize(n);
    for (int i = 0; i < n; ++i) s.order[i] = i;
    std::shuffle(s.order.begin(), s.order.end(), rng);
    for (int j = 0; j < n; ++j) s.input_fn.push_back(random_table(j + 1, rng));
    s.output_fn = random_table(n + 1, rng);
    return s;
}

inline Wiring random_wiring(int n, Rng& rng) {
    Wiring w;
    w.n = n;
    w.alice = random_strategy(n, rng);
    w.bob = random_strategy(n, rng);
    return w;
}

inline Relabeling random_relabeling(Rng& rng) {
    std::uniform_int_distribution<int> d(0, 127);
    return all_relabelings()[d(rng)];
}

}  // namespace nsbox::testing
