#pragma once

#include <array>
#include <vector>

#include "nsbox/box.hpp"

namespace nsbox {

// One party's half of an interface relabeling: flip the input wire, and flip
// the output wire conditioned on the (outer) input value.
struct PartyRelabel {
    int in_flip = 0;
    std::array<int, 2> out_flip{0, 0};

    bool operator==(const PartyRelabel&) const = default;
};

// Element of the local symmetry group of the scenario: optional party swap
// followed by per-party wire flips, |group| = 2 * 8 * 8 = 128. The action on
// a box is (g B)(a b|x y) = C(a^oa[x], b^ob[y] | x^ia, y^ib) where C is B with
// parties swapped when swap_parties is set.
struct Relabeling {
    bool swap_parties = false;
    PartyRelabel a;
    PartyRelabel b;

    bool operator==(const Relabeling&) const = default;

    static Relabeling identity() { return {}; }
    bool is_identity() const { return *this == Relabeling{}; }
};

// Group operations. compose(g, h) acts as first h, then g:
// apply(compose(g,h), B) == apply(g, apply(h, B)).
Relabeling compose(const Relabeling& g, const Relabeling& h);
Relabeling inverse(const Relabeling& g);

Box apply_relabeling(const Relabeling& g, const Box& b);

// The permutation of the 16 table cells realizing the action:
// apply(g, B).p[i] == B.p[perm[i]].
std::array<int, 16> cell_permutation(const Relabeling& g);

// All 128 elements in a fixed order (swap, then Alice bits, then Bob bits).
const std::vector<Relabeling>& all_relabelings();

}  // namespace nsbox
