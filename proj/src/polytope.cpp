#include "nsbox/polytope.hpp"

#include <algorithm>
#include <map>

#include "nsbox/lp.hpp"

namespace nsbox {

void VPolytope::push(const Box& b, std::string label) {
    vertices.push_back(b);
    labels.push_back(std::move(label));
}

Rat LinearFunctional::eval(const Box& b) const {
    Rat s = offset;
    for (int i = 0; i < 16; ++i)
        if (coeff[i] != 0) s += coeff[i] * b.p[i];
    return s;
}

// Correlator coordinates of a table cell: p(ab|xy) viewed as an affine
// function of (E, ma, mb). Returns the 9 coefficients (8 coords + const).
static std::array<Rat, 9> cell_in_coords(int a, int b, int x, int y) {
    std::array<Rat, 9> c{};
    Rat quarter(1, 4);
    c[x * 2 + y] = (a ^ b) ? -quarter : quarter;  // E[x][y]
    c[4 + x] = a ? -quarter : quarter;            // ma[x]
    c[6 + y] = b ? -quarter : quarter;            // mb[y]
    c[8] = quarter;
    return c;
}

std::array<Int, 9> LinearFunctional::canonical_key() const {
    std::array<Rat, 9> acc{};
    acc[8] = offset;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const Rat& w = coeff[Box::index(a, b, x, y)];
                    if (w == 0) continue;
                    auto cc = cell_in_coords(a, b, x, y);
                    for (int k = 0; k < 9; ++k) acc[k] += w * cc[k];
                }
    Int l(1);
    for (const Rat& v : acc) l = lcm(l, denominator(v));
    std::array<Int, 9> key{};
    Int g(0);
    for (int k = 0; k < 9; ++k) {
        key[k] = numerator(Rat(acc[k] * l));
        g = gcd(g, key[k]);
    }
    if (g > 1)
        for (auto& v : key) v /= g;
    return key;
}

bool same_functional(const LinearFunctional& f, const LinearFunctional& g) {
    return f.canonical_key() == g.canonical_key();
}

LinearFunctional pull_functional(const Relabeling& g, const LinearFunctional& f) {
    auto perm = cell_permutation(g);
    LinearFunctional out;
    out.offset = f.offset;
    out.label = f.label;
    // f(gB) = sum_i c_i B[perm[i]]
    for (int i = 0; i < 16; ++i) out.coeff[perm[i]] += f.coeff[i];
    return out;
}

std::vector<LinearFunctional> facet_orbit(const LinearFunctional& f) {
    std::map<std::array<Int, 9>, LinearFunctional> seen;
    for (const Relabeling& g : all_relabelings()) {
        LinearFunctional h = pull_functional(g, f);
        seen.emplace(h.canonical_key(), h);
    }
    std::vector<LinearFunctional> orbit;
    orbit.reserve(seen.size());
    int i = 0;
    for (auto& [key, fn] : seen) {
        fn.label = f.label + "#" + std::to_string(i++);
        orbit.push_back(fn);
    }
    return orbit;
}

// --- membership -------------------------------------------------------------

static std::array<Rat, 9> coords_of(const Box& b) {
    Correlators c = correlators(b);
    return {c.E[0][0], c.E[0][1], c.E[1][0], c.E[1][1],
            c.ma[0],   c.ma[1],   c.mb[0],   c.mb[1],   Rat(1)};
}

bool MembershipCertificate::verify(const Box& b, const VPolytope& poly) const {
    if (inside) {
        if (weights.size() != poly.size()) return false;
        Rat total(0);
        std::array<Rat, 16> acc{};
        for (std::size_t j = 0; j < weights.size(); ++j) {
            if (weights[j] < 0) return false;
            total += weights[j];
            if (weights[j] != 0)
                for (int i = 0; i < 16; ++i) acc[i] += weights[j] * poly.vertices[j].p[i];
        }
        if (total != 1) return false;
        return acc == b.p;
    }
    if (separator.eval(b) >= 0) return false;
    for (const Box& v : poly.vertices)
        if (separator.eval(v) < 0) return false;
    return true;
}

MembershipCertificate in_hull(const Box& b, const VPolytope& poly) {
    std::vector<std::vector<Rat>> cols;
    cols.reserve(poly.size());
    for (const Box& v : poly.vertices) {
        auto cc = coords_of(v);
        cols.emplace_back(cc.begin(), cc.end());
    }
    auto target = coords_of(b);
    LpFeasibility lp =
        solve_equality_feasibility(cols, std::vector<Rat>(target.begin(), target.end()));

    MembershipCertificate cert;
    if (lp.feasible) {
        cert.inside = true;
        cert.weights = std::move(lp.weights);
    } else {
        // Farkas vector y: y.coords(v) <= 0 for vertices, y.coords(b) > 0.
        // The separator is h = -y written back in table coefficients; the
        // coordinates are linear in the entries (E picks its own cell with
        // sign, each marginal averages the two slices).
        LinearFunctional h;
        Rat half(1, 2);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int bb = 0; bb < 2; ++bb) {
                        Rat w = ((a ^ bb) ? -1 : 1) * lp.farkas[x * 2 + y];
                        w += (a ? -half : half) * lp.farkas[4 + x];
                        w += (bb ? -half : half) * lp.farkas[6 + y];
                        h.coeff[Box::index(a, bb, x, y)] = -w;
                    }
        h.offset = -lp.farkas[8];
        // normalize to integer coefficients, gcd 1
        Int l(1);
        l = lcm(l, denominator(h.offset));
        for (const Rat& v : h.coeff) l = lcm(l, denominator(v));
        Int g(0);
        g = gcd(g, numerator(Rat(h.offset * l)));
        for (const Rat& v : h.coeff) g = gcd(g, numerator(Rat(v * l)));
        if (g == 0) g = 1;
        Rat scale = Rat(l) / Rat(g);
        for (auto& v : h.coeff) v *= scale;
        h.offset *= scale;
        h.label = "separator";
        cert.inside = false;
        cert.separator = h;
    }
    if (!cert.verify(b, poly)) throw Error("in_hull produced a bad certificate");
    return cert;
}

VPolytope reduce(const VPolytope& poly) {
    std::size_t n = poly.size();
    std::vector<char> keep(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        VPolytope others;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && keep[j]) others.push(poly.vertices[j]);
        if (others.size() == 0) continue;
        if (in_hull(poly.vertices[i], others).inside) keep[i] = 0;
    }
    VPolytope out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i])
            out.push(poly.vertices[i],
                     poly.labels.size() == n ? poly.labels[i] : std::string());
    return out;
}

// --- named polytopes ----------------------------------------------------------

VPolytope local_polytope() {
    VPolytope p;
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            for (int sg = 0; sg < 2; ++sg)
                for (int ta = 0; ta < 2; ++ta)
                    p.push(make_local_deterministic(mu, nu, sg, ta),
                           "L" + std::to_string(mu) + std::to_string(nu) +
                               std::to_string(sg) + std::to_string(ta));
    return p;
}

VPolytope ns_polytope() {
    VPolytope p = local_polytope();
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            for (int sg = 0; sg < 2; ++sg)
                p.push(make_extremal_nl(mu, nu, sg), "NL" + std::to_string(mu) +
                                                         std::to_string(nu) +
                                                         std::to_string(sg));
    return p;
}

static void check_cutoff(const Rat& S) {
    if (S <= 2 || S >= 4) throw ParameterError("S must satisfy 2 < S < 4, got " + rat_string(S));
}

VPolytope r_a_polytope(const Rat& S) {
    check_cutoff(S);
    Rat eps = S / 2 - 1;
    VPolytope p = local_polytope();
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            for (int sg = 0; sg < 2; ++sg)
                for (int al = 0; al < 2; ++al)
                    for (int be = 0; be < 2; ++be)
                        for (int ga = 0; ga < 2; ++ga)
                            p.push(make_edge_box(mu, nu, sg, al, be, ga, eps),
                                   "E" + std::to_string(mu) + std::to_string(nu) +
                                       std::to_string(sg) + "." + std::to_string(al) +
                                       std::to_string(be) + std::to_string(ga));
    return p;
}

VPolytope r_b_polytope(const Rat& S) {
    check_cutoff(S);
    Rat eps = S / 4;
    VPolytope p = local_polytope();
    Box mixed = make_maximally_mixed();
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            for (int sg = 0; sg < 2; ++sg)
                p.push(mix({{eps, make_extremal_nl(mu, nu, sg)}, {1 - eps, mixed}}),
                       "I" + std::to_string(mu) + std::to_string(nu) + std::to_string(sg));
    return p;
}

// --- functional families --------------------------------------------------------

LinearFunctional positivity_facet(int a, int b, int x, int y) {
    LinearFunctional f;
    f.coeff[Box::index(a, b, x, y)] = 1;
    f.label = "pos(" + std::to_string(a) + std::to_string(b) + "|" + std::to_string(x) +
              std::to_string(y) + ")";
    return f;
}

std::vector<LinearFunctional> positivity_facets() {
    std::vector<LinearFunctional> v;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) v.push_back(positivity_facet(a, b, x, y));
    return v;
}

LinearFunctional ch_functional() {
    LinearFunctional f;
    f.offset = 1;
    f.coeff[Box::index(1, 1, 0, 0)] = -1;
    f.coeff[Box::index(0, 0, 1, 0)] = -1;
    f.coeff[Box::index(0, 0, 0, 1)] = -1;
    f.coeff[Box::index(0, 0, 1, 1)] = 1;
    f.label = "CH";
    return f;
}

LinearFunctional chsh_bound_facet(int sym, const Rat& S) {
    if (sym < 0 || sym > 7) throw ParameterError("CHSH symmetry index outside 0..7");
    int mu = (sym >> 2) & 1, nu = (sym >> 1) & 1, sg = sym & 1;
    LinearFunctional f;
    f.offset = S;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int flip = (x & y) ^ (mu & x) ^ (nu & y) ^ sg;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    int s = (a ^ b) ^ flip;  // contribution sign of this cell to E
                    f.coeff[Box::index(a, b, x, y)] = s ? Rat(1) : Rat(-1);
                }
        }
    f.label = "chsh" + std::to_string(sym) + "<=" + rat_string(S);
    return f;
}

LinearFunctional tilted_ch(const Rat& q) {
    if (q < 0) throw ParameterError("tilt q must be >= 0");
    LinearFunctional f = ch_functional();
    f.coeff[Box::index(1, 1, 1, 1)] += q;
    f.label = "I(q=" + rat_string(q) + ")";
    return f;
}

Rat facet_q(const Rat& eps) {
    if (eps == 1) throw ParameterError("facet_q diverges at eps = 1");
    if (eps <= Rat(1, 2) || eps > 1)
        throw ParameterError("facet_q needs 1/2 < eps < 1, got " + rat_string(eps));
    return 2 * (2 * eps - 1) / (1 - eps);
}

std::vector<LinearFunctional> r_a_facets(const Rat& S) {
    check_cutoff(S);
    std::vector<LinearFunctional> v = positivity_facets();
    for (int sym = 0; sym < 8; ++sym) v.push_back(chsh_bound_facet(sym, S));
    return v;
}

std::vector<LinearFunctional> r_b_facets(const Rat& S) {
    check_cutoff(S);
    std::vector<LinearFunctional> v = positivity_facets();
    auto orbit = facet_orbit(tilted_ch(facet_q(S / 4)));
    if (orbit.size() != 64)
        throw Error("tilted-CH orbit has size " + std::to_string(orbit.size()) +
                    ", expected 64");
    for (auto& f : orbit) v.push_back(std::move(f));
    return v;
}

// --- Uffink set ---------------------------------------------------------------

Rat uffink_lhs(const Box& b) {
    Correlators c = correlators(b);
    Rat u = c.E[0][0] + c.E[1][0];
    Rat v = c.E[0][1] - c.E[1][1];
    return u * u + v * v;
}

bool in_uffink(const Box& b) { return validate(b).ok() && uffink_lhs(b) <= 4; }

// --- small exact linear algebra --------------------------------------------------

int affine_dimension(const std::vector<Box>& pts) {
    if (pts.empty()) return -1;
    std::vector<std::array<Rat, 9>> rows;
    auto base = coords_of(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        auto c = coords_of(pts[i]);
        std::array<Rat, 9> d{};
        for (int k = 0; k < 8; ++k) d[k] = c[k] - base[k];
        rows.push_back(d);
    }
    // Gaussian elimination over the first 8 coordinates.
    int rank = 0;
    for (int col = 0; col < 8 && rank < int(rows.size()); ++col) {
        int pr = -1;
        for (int r = rank; r < int(rows.size()); ++r)
            if (rows[r][col] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows[rank], rows[pr]);
        for (int r = 0; r < int(rows.size()); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Rat f = rows[r][col] / rows[rank][col];
            for (int k = col; k < 8; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace nsbox
