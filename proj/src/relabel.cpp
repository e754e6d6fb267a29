#include "nsbox/relabel.hpp"

namespace nsbox {

static PartyRelabel compose_party(const PartyRelabel& outer, const PartyRelabel& inner) {
    // outer applied first on the way in: x -> x^outer.in -> x^outer.in^inner.in,
    // outputs unwind in the same order.
    PartyRelabel r;
    r.in_flip = outer.in_flip ^ inner.in_flip;
    for (int x = 0; x < 2; ++x)
        r.out_flip[x] = outer.out_flip[x] ^ inner.out_flip[x ^ outer.in_flip];
    return r;
}

Relabeling compose(const Relabeling& g, const Relabeling& h) {
    Relabeling r;
    r.swap_parties = g.swap_parties ^ h.swap_parties;
    // Move g's swap past h's local part: swapping conjugates the party roles.
    const PartyRelabel& ha = g.swap_parties ? h.b : h.a;
    const PartyRelabel& hb = g.swap_parties ? h.a : h.b;
    r.a = compose_party(g.a, ha);
    r.b = compose_party(g.b, hb);
    return r;
}

static PartyRelabel invert_party(const PartyRelabel& p) {
    PartyRelabel r;
    r.in_flip = p.in_flip;
    for (int x = 0; x < 2; ++x) r.out_flip[x] = p.out_flip[x ^ p.in_flip];
    return r;
}

Relabeling inverse(const Relabeling& g) {
    Relabeling r;
    r.swap_parties = g.swap_parties;
    PartyRelabel ia = invert_party(g.a);
    PartyRelabel ib = invert_party(g.b);
    r.a = g.swap_parties ? ib : ia;
    r.b = g.swap_parties ? ia : ib;
    return r;
}

std::array<int, 16> cell_permutation(const Relabeling& g) {
    std::array<int, 16> perm{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    int sa = a ^ g.a.out_flip[x];
                    int sb = b ^ g.b.out_flip[y];
                    int sx = x ^ g.a.in_flip;
                    int sy = y ^ g.b.in_flip;
                    int src = g.swap_parties ? Box::index(sb, sa, sy, sx)
                                             : Box::index(sa, sb, sx, sy);
                    perm[Box::index(a, b, x, y)] = src;
                }
    return perm;
}

Box apply_relabeling(const Relabeling& g, const Box& b) {
    auto perm = cell_permutation(g);
    Box out;
    for (int i = 0; i < 16; ++i) out.p[i] = b.p[perm[i]];
    return out;
}

const std::vector<Relabeling>& all_relabelings() {
    static const std::vector<Relabeling> group = [] {
        std::vector<Relabeling> v;
        v.reserve(128);
        for (int swap = 0; swap < 2; ++swap)
            for (int bits = 0; bits < 64; ++bits) {
                Relabeling g;
                g.swap_parties = swap;
                g.a.in_flip = bits & 1;
                g.a.out_flip = {(bits >> 1) & 1, (bits >> 2) & 1};
                g.b.in_flip = (bits >> 3) & 1;
                g.b.out_flip = {(bits >> 4) & 1, (bits >> 5) & 1};
                v.push_back(g);
            }
        return v;
    }();
    return group;
}

}  // namespace nsbox
