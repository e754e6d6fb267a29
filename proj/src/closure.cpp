#include "nsbox/closure.hpp"

#include <algorithm>
#include <thread>

namespace nsbox {

static Rat rat_pow(const Rat& base, int n) {
    Rat r(1);
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

EscapeCondition and_escape_condition(int n, const Rat& eps) {
    if (n < 2) throw ParameterError("escape condition needs n >= 2");
    if (eps <= Rat(1, 2) || eps >= 1)
        throw ParameterError("escape condition needs 1/2 < eps < 1");
    Rat q = facet_q(eps);
    Rat zp = (1 + eps) / 4;
    Rat zm = (1 - eps) / 4;
    EscapeCondition c{Rat(1) / rat_pow(Rat(2), n - 1) - 3 * rat_pow(zp, n) +
                          (1 + q) * rat_pow(zm, n),
                      false};
    c.violated = c.lhs < 0;
    return c;
}

EscapeCertificate and_escape_box(int n, const Rat& eps) {
    if (n < 2) throw ParameterError("and_escape_box needs n >= 2");
    if (eps <= Rat(1, 2) || eps >= 1)
        throw ParameterError("and_escape_box needs 1/2 < eps < 1");
    EscapeCertificate cert;
    cert.facet = tilted_ch(facet_q(eps));
    cert.box = and_closed_form(make_isotropic(eps), n);
    cert.value = cert.facet.eval(cert.box);
    cert.violated = cert.value < 0;
    cert.chsh_in = 4 * eps;
    cert.chsh_out = chsh_value(cert.box, 0);
    for (int s = 1; s < 8; ++s) cert.chsh_out = std::max(cert.chsh_out, chsh_value(cert.box, s));
    if (cert.chsh_out > cert.chsh_in)
        throw Error("AND-wired box exceeded the input CHSH value");
    EscapeCondition cond = and_escape_condition(n, eps);
    if (cond.violated != cert.violated)
        throw Error("closed-form escape condition disagrees with the exact facet value");
    return cert;
}

static std::vector<Box> box_orbit(const Box& b) {
    std::vector<Box> orbit;
    for (const Relabeling& g : all_relabelings()) {
        Box img = apply_relabeling(g, b);
        bool seen = false;
        for (const Box& o : orbit)
            if (o == img) {
                seen = true;
                break;
            }
        if (!seen) orbit.push_back(img);
    }
    return orbit;
}

HullIterationReport iterate_hull(const Rat& eps, int n_max) {
    if (eps <= 0 || eps >= 1) throw ParameterError("iterate_hull needs 0 < eps < 1");
    if (n_max < 2) throw ParameterError("iterate_hull needs n_max >= 2");
    HullIterationReport rep;
    rep.eps = eps;
    VPolytope hull = r_b_polytope(4 * eps);
    HullStage base;
    base.n = 1;
    base.vertex_count = hull.size();
    rep.stages.push_back(base);

    Box iso = make_isotropic(eps);
    for (int n = 2; n <= n_max; ++n) {
        Box gen = and_closed_form(iso, n);
        HullStage st;
        st.n = n;
        st.base_box = gen;
        MembershipCertificate c = in_hull(gen, hull);
        st.base_box_outside = !c.inside;
        if (!c.inside) st.base_separator = c.separator;
        if (!c.inside) {
            const VPolytope prev = hull;  // stage-entry snapshot
            for (const Box& o : box_orbit(gen)) {
                if (in_hull(o, prev).inside) continue;
                hull.push(o, "and" + std::to_string(n));
                ++st.added;
            }
            hull = reduce(hull);
        }
        st.vertex_count = hull.size();
        rep.stages.push_back(st);
    }
    rep.final_hull = hull;
    return rep;
}

EdgeTrajectory distill_edge_out(int mu, int nu, int sigma, int alpha, int beta,
                                int gamma, const Rat& eps, int k) {
    if (eps <= 0 || eps > 1) throw ParameterError("edge distillation needs 0 < eps <= 1");
    if (k < 0) throw ParameterError("negative iteration count");
    EdgeTrajectory t{mu, nu, sigma, alpha, beta, gamma, Relabeling::identity(), {}, 0, {}};

    // the form this edge saturates
    t.chsh_sym = mu * 4 + nu * 2 + sigma;

    // Probe step: find a relabeling g whose conjugated protocol keeps the edge
    // family and advances eps. One step at the probe value must reproduce the
    // edge box at 2e - e^2 exactly.
    Wiring base = distillation_wiring();
    Rat probe = eps < 1 ? eps : Rat(1, 2);
    Box probe_box = make_edge_box(mu, nu, sigma, alpha, beta, gamma, probe);
    Rat probe_next = 2 * probe - probe * probe;
    Box probe_expect = make_edge_box(mu, nu, sigma, alpha, beta, gamma, probe_next);
    bool found = false;
    for (const Relabeling& g : all_relabelings()) {
        Wiring w = conjugate_wiring(g, g, base);
        if (apply_wiring(w, {probe_box, probe_box}) == probe_expect) {
            t.conjugation = g;
            found = true;
            break;
        }
    }
    if (!found) throw Error("no protocol symmetry found for this edge");

    Wiring w = conjugate_wiring(t.conjugation, t.conjugation, base);
    Rat e = eps;
    Box cur = make_edge_box(mu, nu, sigma, alpha, beta, gamma, e);
    t.eps_steps.push_back(e);
    t.chsh_steps.push_back(chsh_value(cur, t.chsh_sym));
    for (int i = 0; i < k; ++i) {
        cur = apply_wiring(w, {cur, cur});
        e = 2 * e - e * e;
        Box expect = make_edge_box(mu, nu, sigma, alpha, beta, gamma, e);
        if (!(cur == expect)) throw Error("edge trajectory left its edge");
        t.eps_steps.push_back(e);
        t.chsh_steps.push_back(chsh_value(cur, t.chsh_sym));
    }
    return t;
}

bool uffink_quartic_escape(const Rat& e00, const Rat& e11) {
    Rat a = e00 * e00;
    Rat inner = a + (e00 - e11 - e11 * e11 - e00 * e11) / 2;
    return 4 * a * a + inner * inner > 4;
}

UffinkScan uffink_escape_scan(int grid, int iters, int workers) {
    if (grid < 2) throw ParameterError("grid must be >= 2");
    if (iters < 1) throw ParameterError("iters must be >= 1");
    if (workers < 1) workers = 1;
    UffinkScan scan;
    scan.grid = grid;
    scan.iters = iters;
    scan.cells.resize(std::size_t(grid + 1) * (grid + 1));

    Wiring w = distillation_wiring();
    auto run_cell = [&](int i, int j) {
        UffinkCell cell;
        cell.i = i;
        cell.j = j;
        cell.eps = Rat(i, grid);
        cell.gamma = Rat(j, grid);
        cell.inside_simplex = (i + j <= grid);
        if (!cell.inside_simplex) return cell;
        Box b = make_section_box(cell.eps, cell.gamma);
        cell.inside_uffink = uffink_lhs(b) <= 4;
        Correlators c0 = correlators(b);
        cell.quartic_predicts = uffink_quartic_escape(c0.E[0][0], c0.E[1][1]);
        if (!cell.inside_uffink) return cell;
        Box cur = b;
        for (int it = 1; it <= iters; ++it) {
            cur = apply_wiring(w, {cur, cur});
            if (uffink_lhs(cur) > 4) {
                cell.first_escape = it;
                break;
            }
        }
        return cell;
    };

    std::size_t total = scan.cells.size();
    std::vector<std::thread> pool;
    std::size_t chunk = (total + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        std::size_t lo = t * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t at = lo; at < hi; ++at)
                scan.cells[at] = run_cell(int(at / (grid + 1)), int(at % (grid + 1)));
        });
    }
    for (auto& th : pool) th.join();
    for (const UffinkCell& c : scan.cells)
        if (c.first_escape == 1) ++scan.one_step_escapes;
    return scan;
}

}  // namespace nsbox
