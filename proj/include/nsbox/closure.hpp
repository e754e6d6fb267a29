#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsbox/polytope.hpp"
#include "nsbox/wiring.hpp"

namespace nsbox {

// --- AND-wiring escape from the noisy-extremal polytope ---------------------

struct EscapeCondition {
    Rat lhs;        // 2^(1-n) - 3 z+^n + (1+q) z-^n with z± = (1±eps)/4
    bool violated;  // lhs < 0
};

// Closed-form escape test for the AND wiring on n copies of the isotropic box
// at eps, against the tilted-CH facet I(facet_q(eps)). The (1+q) coefficient
// is the one that matches the exact evaluation of I(q) on the wired box; the
// tests pin this down against the brute-force oracle.
EscapeCondition and_escape_condition(int n, const Rat& eps);

struct EscapeCertificate {
    bool violated = false;
    Box box;                    // and_closed_form(isotropic(eps), n)
    LinearFunctional facet;     // the violated I(q)
    Rat value;                  // facet.eval(box), negative when violated
    Rat chsh_in;                // 4*eps
    Rat chsh_out;               // max over the 8 forms on the wired box
};

// Builds the wired box and an exact violation certificate (or reports that
// the condition fails). Also checks the wired box does not exceed the input
// CHSH value.
EscapeCertificate and_escape_box(int n, const Rat& eps);

// --- iterated hull growth ----------------------------------------------------

struct HullStage {
    int n = 0;                   // AND copy count generating this stage
    std::size_t vertex_count = 0;
    std::size_t added = 0;       // new orbit boxes outside the previous hull
    bool base_box_outside = false;
    Box base_box;                     // and_closed_form(isotropic(eps), n)
    LinearFunctional base_separator;  // LP certificate for the generating box
};

struct HullIterationReport {
    Rat eps;
    std::vector<HullStage> stages;
    VPolytope final_hull;
};

// Stage 1 is r_b_polytope(4 eps); stage n takes the 128-group orbit of
// and_closed_form(isotropic(eps), n), keeps the members outside the previous
// hull (with LP separators), extends and reduces.
HullIterationReport iterate_hull(const Rat& eps, int n_max);

// --- exhaustive two-box wiring search ----------------------------------------

struct SearchBudget {
    std::uint64_t max_vertex_pairs = UINT64_MAX;  // scope knob; full space when >= size^2
    std::size_t max_violations_recorded = 16;
    int workers = 1;
    std::uint64_t lp_spot_checks = 0;  // sampled in_hull cross-checks of produced boxes
};

struct SearchViolation {
    std::string kind;  // "and", "distill" or "scan"
    Wiring wiring;
    int vertex1 = 0, vertex2 = 0;  // indices into the searched polytope
    Box produced;
    std::size_t facet_index = 0;
    LinearFunctional facet;  // embedded so records re-verify standalone
    Rat value;               // facet evaluation, negative
};

struct SearchCounters {
    std::uint64_t raw_strategies_per_party = 0;        // 32768
    std::uint64_t plans_per_input = 0;                 // 192
    std::uint64_t canonical_strategies_per_party = 0;  // 28672
    std::uint64_t wirings_covered = 0;                 // canonical^2
    std::uint64_t vertex_pairs = 0;                    // ordered pairs scanned
    std::uint64_t facets_checked = 0;
    std::uint64_t violation_regions = 0;  // (pair, facet, alice pair) with a violating bob
    std::uint64_t full_passes = 0;        // (pair, facet) needing full enumeration
    std::uint64_t pruned_combinations = 0;  // (pair, facet) closed by the relaxation bound
    std::uint64_t lp_spot_checks_done = 0;
    std::uint64_t lp_anomalies = 0;  // inside all facets yet outside the hull
};

struct SearchReport {
    SearchCounters counters;
    bool completed = false;  // every ordered vertex pair scanned (budget not exhausted)
    bool any_violation = false;
    std::vector<SearchViolation> violations;
    // Certified lower bound per facet over all wirings x scanned pairs; exact
    // minimum wherever the relaxation could not already certify nonnegativity.
    std::vector<Rat> facet_min;
    std::vector<std::string> facet_labels;
    double seconds = 0.0;
    std::string arithmetic;  // evaluation path, "int64"
};

// Scans every deterministic two-box wiring (canonicalized by the induced
// strategy map) applied to every ordered pair of poly vertices, and checks
// the given facets exactly. Multilinearity of apply_wiring makes vertex
// pairs sufficient for the whole polytope. Facets must be valid on the
// vertices. Deterministic output for any worker count.
SearchReport two_box_closure_search(const VPolytope& poly,
                                    const std::vector<LinearFunctional>& facets,
                                    const SearchBudget& budget = {});

// --- distilling edge boxes out of the cut-off polytope ------------------------

struct EdgeTrajectory {
    int mu, nu, sigma, alpha, beta, gamma;
    Relabeling conjugation;      // symmetry adapting the protocol to this edge
    std::vector<Rat> eps_steps;  // eps_0 .. eps_k, strictly increasing
    int chsh_sym = 0;            // the form this edge saturates
    std::vector<Rat> chsh_steps;
};

// Finds the relabeling conjugation of the distillation protocol that maps
// this edge family to itself with eps -> 2 eps - eps^2, then iterates k
// steps on pairs of identical boxes.
EdgeTrajectory distill_edge_out(int mu, int nu, int sigma, int alpha, int beta,
                                int gamma, const Rat& eps, int k);

// --- escape from the Uffink set ------------------------------------------------

struct UffinkCell {
    int i = 0, j = 0;            // grid coordinates, eps = i/g, gamma = j/g
    Rat eps, gamma;
    bool inside_simplex = false;
    bool inside_uffink = false;
    int first_escape = 0;        // iteration count, 0 = never within budget
    bool quartic_predicts = false;  // closed-form one-step escape test
};

struct UffinkScan {
    int grid = 0;
    int iters = 0;
    std::vector<UffinkCell> cells;
    std::uint64_t one_step_escapes = 0;
};

// Exact scan of the (eps, gamma) section: iterate the distillation protocol
// on each in-Uffink grid node and record the first iteration whose image
// violates the quadratic bound. The one-step region must coincide with the
// quartic inequality in the initial correlators; both are evaluated exactly
// and stored per cell.
UffinkScan uffink_escape_scan(int grid, int iters, int workers = 1);

// Quartic one-step escape predicate on the initial correlators
// (E00 = eps + gamma, E11 = gamma - eps):
//   4 E00^4 + [E00^2 + (E00 - E11 - E11^2 - E00 E11)/2]^2 > 4.
bool uffink_quartic_escape(const Rat& e00, const Rat& e11);

}  // namespace nsbox
