#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox {

// A bipartite binary-input/binary-output conditional distribution P(ab|xy),
// 16 exact rational entries. Storage and serialization order is (x,y,a,b)
// row-major: index = x*8 + y*4 + a*2 + b.
struct Box {
    std::array<Rat, 16> p{};

    static constexpr int index(int a, int b, int x, int y) {
        return x * 8 + y * 4 + a * 2 + b;
    }
    Rat& at(int a, int b, int x, int y) { return p[index(a, b, x, y)]; }
    const Rat& at(int a, int b, int x, int y) const { return p[index(a, b, x, y)]; }

    bool operator==(const Box& o) const { return p == o.p; }
};

// Strict lexicographic order on the entry table, for sets and dedup.
bool box_less(const Box& lhs, const Box& rhs);

// Correlator coordinates of a box. E[x][y] = <(-1)^(a+b)> given inputs x,y;
// marginals in the +/-1 convention: ma[x] = <(-1)^a | x>, mb[y] = <(-1)^b | y>.
// These eight numbers are affine coordinates for the non-signaling polytope.
struct Correlators {
    Rat E[2][2];
    Rat ma[2];
    Rat mb[2];

    bool operator==(const Correlators& o) const;
};

struct ValidationReport {
    bool normalized = false;
    bool nonnegative = false;
    bool nonsignaling = false;
    std::string detail;  // first failure, empty when ok

    bool ok() const { return normalized && nonnegative && nonsignaling; }
};

// --- canonical box families ---------------------------------------------

// Deterministic box a = mu*x + nu, b = sigma*y + tau (mod 2).
Box make_local_deterministic(int mu, int nu, int sigma, int tau);

// Extremal non-local box: p = 1/2 when a+b = x*y + mu*x + nu*y + sigma (mod 2),
// else 0. (0,0,0) is the PR box.
Box make_extremal_nl(int mu, int nu, int sigma);

// Every entry 1/4.
Box make_maximally_mixed();

// eps * PR + (1-eps) * P_L^{0101}.
Box make_correlated_nl(const Rat& eps);

// eps * PR + (1-eps) * maximally mixed.
Box make_isotropic(const Rat& eps);

// eps * PR + gamma * P_L^{0101} + (1-eps-gamma) * maximally mixed.
Box make_section_box(const Rat& eps, const Rat& gamma);

// eps * P_NL^{mu nu sigma} + (1-eps) * P_L^{alpha beta gamma delta} with
// delta = (alpha^mu)(gamma^nu) ^ beta ^ sigma, i.e. the local box sits on the
// CHSH facet below the chosen extremal box; the result lies on a
// one-dimensional edge of NS \ L.
Box make_edge_box(int mu, int nu, int sigma, int alpha, int beta, int gamma,
                  const Rat& eps);

// Entrywise convex combination. Throws InvalidMixtureError unless all weights
// are >= 0 and sum to exactly 1.
Box mix(const std::vector<std::pair<Rat, Box>>& terms);

// --- coordinates and functionals -----------------------------------------

Correlators correlators(const Box& b);

// Inverse of correlators(); exact. Throws OutsidePolytopeError if any
// reconstructed entry is negative (the coordinates lie outside NS).
Box box_from_correlators(const Correlators& c);

// The 8 CHSH forms, indexed by sym = mu*4 + nu*2 + sigma in 0..7:
//   CHSH_sym(B) = sum_{xy} (-1)^(xy + mu*x + nu*y + sigma) E_xy.
// sym=0 is E00+E01+E10-E11, and CHSH_sym is maximized (value 4) exactly by
// make_extremal_nl(mu,nu,sigma). Together these are the odd-sign-parity
// orbit of the canonical form.
Rat chsh_value(const Box& b, int sym);

// CH = 1 - P(11|00) - P(00|10) - P(00|01) + P(00|11); identically equal to
// 1/2 - chsh_value(b,0)/4 on valid boxes.
Rat ch_value(const Box& b);

ValidationReport validate(const Box& b);

}  // namespace nsbox
