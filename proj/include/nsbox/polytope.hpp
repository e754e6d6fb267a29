#pragma once

#include <string>
#include <vector>

#include "nsbox/box.hpp"
#include "nsbox/relabel.hpp"

namespace nsbox {

// Vertex-list polytope of boxes. reduce() maintains the invariant that no
// vertex is a convex combination of the others.
struct VPolytope {
    std::vector<Box> vertices;
    std::vector<std::string> labels;  // parallel to vertices, may be empty

    std::size_t size() const { return vertices.size(); }
    void push(const Box& b, std::string label = "");
};

// Affine functional over the 16 table entries, oriented as "f(B) >= 0 holds".
struct LinearFunctional {
    std::array<Rat, 16> coeff{};
    Rat offset{0};
    std::string label;

    Rat eval(const Box& b) const;

    // Canonical integer form in correlator coordinates (8 coefficients plus
    // constant, cleared of denominators, gcd 1, sign preserved). Coordinates
    // are affine for the polytope, so two functionals agree on every valid
    // box iff their keys match.
    std::array<Int, 9> canonical_key() const;
};

bool same_functional(const LinearFunctional& f, const LinearFunctional& g);

// Pullback along the relabeling action: pull(g, f)(B) = f(apply_relabeling(g, B)).
LinearFunctional pull_functional(const Relabeling& g, const LinearFunctional& f);

// Orbit of f under all 128 relabelings, deduplicated by canonical key and
// returned in key order.
std::vector<LinearFunctional> facet_orbit(const LinearFunctional& f);

// --- membership -----------------------------------------------------------

struct MembershipCertificate {
    bool inside = false;
    std::vector<Rat> weights;      // convex weights over poly vertices
    LinearFunctional separator;    // h(b) < 0 <= h(v) for all vertices

    // Exact recheck against the query; in_hull always returns verified
    // certificates, this is for certificates read back from disk.
    bool verify(const Box& b, const VPolytope& poly) const;
};

// Exact membership via rational LP over correlator coordinates. Always
// decides; the certificate is verified before returning. Separators are
// normalized to integer table coefficients with gcd 1.
MembershipCertificate in_hull(const Box& b, const VPolytope& poly);

// Removes every point that is a convex combination of the others; idempotent.
VPolytope reduce(const VPolytope& poly);

// --- named polytopes -------------------------------------------------------

// 16 deterministic vertices.
VPolytope local_polytope();

// All 24 extremal boxes of the non-signaling set.
VPolytope ns_polytope();

// CHSH cut-off polytope, 2 < S < 4: the 16 local vertices plus the 64 edge
// boxes at eps = S/2 - 1.
VPolytope r_a_polytope(const Rat& S);

// Noisy-extremal polytope, 2 < S < 4: the 16 local vertices plus the 8
// isotropic-noise vertices at eps = S/4.
VPolytope r_b_polytope(const Rat& S);

// --- functional families ----------------------------------------------------

// p(ab|xy) >= 0.
LinearFunctional positivity_facet(int a, int b, int x, int y);
std::vector<LinearFunctional> positivity_facets();

// CH >= 0 (equivalently CHSH_0 <= 2 on valid boxes).
LinearFunctional ch_functional();

// S - CHSH_sym >= 0.
LinearFunctional chsh_bound_facet(int sym, const Rat& S);

// Tilted CH inequality I(q) = CH + q * P(11|11) >= 0.
LinearFunctional tilted_ch(const Rat& q);

// Tilt that makes I(q) a facet of r_b_polytope(4*eps): q = 2(2eps-1)/(1-eps),
// defined for 1/2 < eps < 1.
Rat facet_q(const Rat& eps);

// Facet lists used by the closure experiments.
std::vector<LinearFunctional> r_a_facets(const Rat& S);
std::vector<LinearFunctional> r_b_facets(const Rat& S);

// --- Uffink set -------------------------------------------------------------

// (E00+E10)^2 + (E01-E11)^2, the quadratic form whose level 4 bounds the set.
Rat uffink_lhs(const Box& b);
bool in_uffink(const Box& b);

// --- small exact linear algebra ---------------------------------------------

// Affine dimension of a set of boxes (rank of differences in correlator
// coordinates). Empty set: -1, single point: 0.
int affine_dimension(const std::vector<Box>& pts);

}  // namespace nsbox
