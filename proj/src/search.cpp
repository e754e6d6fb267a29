// Exhaustive deterministic two-box wiring search.
//
// A party's raw strategy space (2 usage orders x 4 first-input tables x 16
// second-input tables x 256 output tables = 32768) collapses, per own-input
// bit, to a "plan": the inputs issued to both boxes and the final output as
// functions of the canonical output pair. There are 192 distinct plans (64
// order-free, 64 pinned to each usage order) and 28672 canonical strategies
// (= order-consistent plan pairs). The final box factorizes cell-wise:
// cell (x,y) of the wired box depends only on (alice plan at x, bob plan at
// y) and the two input boxes, so one 192x192x4 tensor per vertex pair covers
// every wiring, and a facet check over all 28672^2 wirings reduces to mins
// over plan pairs with order-consistency side conditions.
//
// Facet arithmetic runs on scaled int64 numerators (exact; magnitude bounds
// are checked up front and the search refuses inputs that could overflow).

#include <algorithm>
#include <chrono>
#include <climits>
#include <thread>

#include "nsbox/closure.hpp"

namespace nsbox {

namespace {

struct Plan {
    // indexed by canonical output pair o = o0 | (o1 << 1)
    std::array<std::uint8_t, 4> in0{}, in1{}, out{};
    int cls = 0;  // 0 = order-free, 1 = box0 first, 2 = box1 first

    std::uint32_t signature() const {
        std::uint32_t s = 0;
        for (int o = 0; o < 4; ++o) s = s * 8 + (in0[o] * 4 + in1[o] * 2 + out[o]);
        return s;
    }
};

struct PlanTable {
    std::vector<Plan> plans;  // sorted: order-free, then pin-box0, then pin-box1
    int free_end = 0, pin1_end = 0;
};

const PlanTable& plan_table() {
    static const PlanTable table = [] {
        std::vector<Plan> raw;
        for (int first = 0; first < 2; ++first)
            for (int i_first = 0; i_first < 2; ++i_first)
                for (int i_second = 0; i_second < 4; ++i_second)
                    for (int h = 0; h < 16; ++h) {
                        Plan p;
                        for (int o = 0; o < 4; ++o) {
                            int o0 = o & 1, o1 = (o >> 1) & 1;
                            int of = first == 0 ? o0 : o1;
                            int second_in = (i_second >> of) & 1;
                            p.in0[o] = first == 0 ? i_first : second_in;
                            p.in1[o] = first == 0 ? second_in : i_first;
                            p.out[o] = (h >> o) & 1;
                        }
                        bool second_const = (i_second == 0 || i_second == 3);
                        p.cls = second_const ? 0 : (first == 0 ? 1 : 2);
                        raw.push_back(p);
                    }
        std::sort(raw.begin(), raw.end(), [](const Plan& a, const Plan& b) {
            if (a.cls != b.cls) return a.cls < b.cls;
            return a.signature() < b.signature();
        });
        PlanTable t;
        for (const Plan& p : raw)
            if (t.plans.empty() || t.plans.back().signature() != p.signature() ||
                t.plans.back().cls != p.cls)
                t.plans.push_back(p);
        for (const Plan& p : t.plans) {
            if (p.cls == 0) ++t.free_end;
            if (p.cls <= 1) ++t.pin1_end;
        }
        // structural constants: 64 order-free + 64 per pinned order
        if (t.plans.size() != 192 || t.free_end != 64 || t.pin1_end != 128)
            throw Error("plan table construction is inconsistent");
        return t;
    }();
    return table;
}

bool classes_compatible(int c0, int c1) { return c0 == 0 || c1 == 0 || c0 == c1; }

// Truth tables of the canonical strategy realizing an order-consistent plan pair.
PartyStrategy strategy_from_plans(const Plan& p0, const Plan& p1) {
    if (!classes_compatible(p0.cls, p1.cls))
        throw Error("strategy_from_plans: incompatible usage orders");
    int first = (p0.cls == 2 || p1.cls == 2) ? 1 : 0;
    int second = 1 - first;
    auto in_of = [](const Plan& p, int box, int pair) {
        return box == 0 ? p.in0[pair] : p.in1[pair];
    };
    PartyStrategy s;
    s.order = {first, second};
    TruthTable f0(1);
    for (int x = 0; x < 2; ++x)
        f0.set(x, in_of(x ? p1 : p0, first, 0));  // first input ignores outputs
    TruthTable f1(2);
    for (int x = 0; x < 2; ++x)
        for (int of = 0; of < 2; ++of) {
            int pair = first == 0 ? of : (of << 1);  // other box's output bit is dummy
            f1.set(x | (of << 1), in_of(x ? p1 : p0, second, pair));
        }
    TruthTable g(3);
    for (int x = 0; x < 2; ++x)
        for (int s0 = 0; s0 < 2; ++s0)
            for (int s1 = 0; s1 < 2; ++s1) {
                int o0 = first == 0 ? s0 : s1;
                int o1 = first == 0 ? s1 : s0;
                g.set(x | (s0 << 1) | (s1 << 2), (x ? p1 : p0).out[o0 | (o1 << 1)]);
            }
    s.input_fn = {f0, f1};
    s.output_fn = g;
    return s;
}

std::uint64_t canonical_strategy_count(const PlanTable& t) {
    std::uint64_t n = 0;
    for (const Plan& a : t.plans)
        for (const Plan& b : t.plans)
            if (classes_compatible(a.cls, b.cls)) ++n;
    return n;
}

// One facet scaled to integers: cell weights w[xy][ab] (times scale) and the
// violation threshold on sum w*C (facet < 0 <=> sum < threshold), where C
// carries denominator D^2.
struct ScaledFacet {
    std::array<std::array<long long, 4>, 4> w{};
    long long threshold = 0;
    Int scale{1};
};

struct ScaledData {
    Int D{1};  // common denominator of all vertex entries
    std::vector<std::array<long long, 16>> vertices;
    std::vector<ScaledFacet> facets;
    bool fits_int64 = true;
};

ScaledData scale_inputs(const VPolytope& poly, const std::vector<LinearFunctional>& facets) {
    ScaledData d;
    for (const Box& v : poly.vertices)
        for (const Rat& e : v.p) d.D = lcm(d.D, denominator(e));
    Int D2 = d.D * d.D;
    if (D2 > (Int(1) << 40)) {
        d.fits_int64 = false;
        return d;
    }
    for (const LinearFunctional& f : facets) {
        ScaledFacet sf;
        for (const Rat& c : f.coeff) sf.scale = lcm(sf.scale, denominator(c));
        sf.scale = lcm(sf.scale, denominator(f.offset));
        Int bound(0);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        Int wi = numerator(Rat(f.coeff[Box::index(a, b, x, y)] * sf.scale));
                        bound += abs(wi) * D2;
                        sf.w[x * 2 + y][a * 2 + b] = wi.convert_to<long long>();
                    }
        Int off = numerator(Rat(f.offset * sf.scale)) * D2;
        bound += abs(off);
        if (bound > (Int(1) << 61)) {
            d.fits_int64 = false;
            return d;
        }
        sf.threshold = Int(-off).convert_to<long long>();
        d.facets.push_back(sf);
    }
    for (const Box& v : poly.vertices) {
        std::array<long long, 16> sv{};
        for (int i = 0; i < 16; ++i)
            sv[i] = Int(numerator(Rat(v.p[i] * d.D))).convert_to<long long>();
        d.vertices.push_back(sv);
    }
    return d;
}

// Plan-pair output tensor for one ordered vertex pair: C[(pa*P+pb)*4 + ab]
// is D^2 times the (a,b) outcome weight obtainable in any cell where alice
// uses plan pa and bob uses plan pb.
std::vector<long long> pair_cells(const PlanTable& t,
                                  const std::array<long long, 16>& v0,
                                  const std::array<long long, 16>& v1) {
    const int P = int(t.plans.size());
    std::vector<long long> cell(std::size_t(P) * P * 4, 0);
    for (int pa = 0; pa < P; ++pa) {
        const Plan& A = t.plans[pa];
        for (int pb = 0; pb < P; ++pb) {
            const Plan& B = t.plans[pb];
            long long* c = &cell[(std::size_t(pa) * P + pb) * 4];
            for (int oa = 0; oa < 4; ++oa)
                for (int ob = 0; ob < 4; ++ob) {
                    long long f0 = v0[Box::index(oa & 1, ob & 1, A.in0[oa], B.in0[ob])];
                    if (f0 == 0) continue;
                    long long f1 =
                        v1[Box::index((oa >> 1) & 1, (ob >> 1) & 1, A.in1[oa], B.in1[ob])];
                    if (f1 == 0) continue;
                    c[A.out[oa] * 2 + B.out[ob]] += f0 * f1;
                }
        }
    }
    return cell;
}

struct WorkerResult {
    std::vector<SearchViolation> violations;
    std::vector<Rat> facet_min;
    std::vector<bool> min_set;
    std::uint64_t regions = 0;
    std::uint64_t full_passes = 0;
    std::uint64_t pruned = 0;
};

}  // namespace

SearchReport two_box_closure_search(const VPolytope& poly,
                                    const std::vector<LinearFunctional>& facets,
                                    const SearchBudget& budget) {
    auto t_start = std::chrono::steady_clock::now();
    const PlanTable& plans = plan_table();
    const int P = int(plans.plans.size());
    const int free_end = plans.free_end, pin1_end = plans.pin1_end;

    if (poly.size() == 0) throw ParameterError("empty polytope");
    for (const LinearFunctional& f : facets)
        for (const Box& v : poly.vertices)
            if (f.eval(v) < 0)
                throw ParameterError("facet '" + f.label + "' is violated by a vertex");

    SearchReport rep;
    rep.counters.raw_strategies_per_party = 32768;
    rep.counters.plans_per_input = P;
    rep.counters.canonical_strategies_per_party = canonical_strategy_count(plans);
    rep.counters.facets_checked = facets.size();
    for (const auto& f : facets) rep.facet_labels.push_back(f.label);

    ScaledData data = scale_inputs(poly, facets);
    if (!data.fits_int64)
        throw Error("search inputs exceed the exact int64 range (denominators too large)");
    rep.arithmetic = "int64";

    const std::uint64_t all_pairs = std::uint64_t(poly.size()) * poly.size();
    const std::uint64_t n_pairs = std::min(all_pairs, budget.max_vertex_pairs);
    rep.counters.vertex_pairs = n_pairs;
    rep.completed = n_pairs == all_pairs;

    // Named protocols first, evaluated through the generic engine: they are
    // points of the canonical space, and checking them up front guarantees
    // they appear among the recorded violations whenever they violate.
    {
        const std::vector<std::pair<std::string, Wiring>> named = {
            {"and", and_wiring(2)}, {"distill", distillation_wiring()}};
        for (std::uint64_t pair = 0; pair < n_pairs; ++pair) {
            std::size_t vi = pair / poly.size(), vj = pair % poly.size();
            for (const auto& [kind, w] : named) {
                Box out = apply_wiring(w, {poly.vertices[vi], poly.vertices[vj]});
                for (std::size_t fi = 0; fi < facets.size(); ++fi) {
                    Rat val = facets[fi].eval(out);
                    if (val < 0 && rep.violations.size() < budget.max_violations_recorded)
                        rep.violations.push_back(
                            {kind, w, int(vi), int(vj), out, fi, facets[fi], val});
                }
            }
        }
    }

    const int workers = std::max(1, budget.workers);
    std::vector<WorkerResult> results(workers);

    auto scan_range = [&](int wid, std::uint64_t lo, std::uint64_t hi) {
        WorkerResult& out = results[wid];
        out.facet_min.assign(facets.size(), Rat(0));
        out.min_set.assign(facets.size(), false);
        std::vector<long long> F00(std::size_t(P) * P), F01(std::size_t(P) * P),
            F10(std::size_t(P) * P), F11(std::size_t(P) * P);

        for (std::uint64_t pair = lo; pair < hi; ++pair) {
            std::size_t vi = pair / poly.size(), vj = pair % poly.size();
            std::vector<long long> cell = pair_cells(plans, data.vertices[vi], data.vertices[vj]);

            for (std::size_t fi = 0; fi < facets.size(); ++fi) {
                const ScaledFacet& sf = data.facets[fi];
                for (int xy = 0; xy < 4; ++xy) {
                    std::vector<long long>& F =
                        xy == 0 ? F00 : xy == 1 ? F01 : xy == 2 ? F10 : F11;
                    const auto& w = sf.w[xy];
                    for (std::size_t k = 0; k < std::size_t(P) * P; ++k) {
                        const long long* c = &cell[k * 4];
                        F[k] = w[0] * c[0] + w[1] * c[1] + w[2] * c[2] + w[3] * c[3];
                    }
                }

                long long best_seen;
                // relaxation: drop every consistency constraint; if even that
                // cannot cross the threshold, the combination is certified.
                long long relax = *std::min_element(F00.begin(), F00.end()) +
                                  *std::min_element(F01.begin(), F01.end()) +
                                  *std::min_element(F10.begin(), F10.end()) +
                                  *std::min_element(F11.begin(), F11.end());
                if (relax >= sf.threshold) {
                    best_seen = relax;  // lower bound, certifies no violation
                    ++out.pruned;
                } else {
                    ++out.full_passes;
                    best_seen = LLONG_MAX;
                    for (int a0 = 0; a0 < P; ++a0) {
                        int c0 = plans.plans[a0].cls;
                        const long long* r00 = &F00[std::size_t(a0) * P];
                        const long long* r01 = &F01[std::size_t(a0) * P];
                        for (int a1 = 0; a1 < P; ++a1) {
                            if (!classes_compatible(c0, plans.plans[a1].cls)) continue;
                            const long long* r10 = &F10[std::size_t(a1) * P];
                            const long long* r11 = &F11[std::size_t(a1) * P];
                            long long m0f = LLONG_MAX, m0p = LLONG_MAX, m0q = LLONG_MAX;
                            long long m1f = LLONG_MAX, m1p = LLONG_MAX, m1q = LLONG_MAX;
                            for (int b = 0; b < free_end; ++b) {
                                m0f = std::min(m0f, r00[b] + r10[b]);
                                m1f = std::min(m1f, r01[b] + r11[b]);
                            }
                            for (int b = free_end; b < pin1_end; ++b) {
                                m0p = std::min(m0p, r00[b] + r10[b]);
                                m1p = std::min(m1p, r01[b] + r11[b]);
                            }
                            for (int b = pin1_end; b < P; ++b) {
                                m0q = std::min(m0q, r00[b] + r10[b]);
                                m1q = std::min(m1q, r01[b] + r11[b]);
                            }
                            long long best =
                                std::min(std::min(m0f, m0p) + std::min(m1f, m1p),
                                         std::min(m0f, m0q) + std::min(m1f, m1q));
                            best_seen = std::min(best_seen, best);
                            if (best >= sf.threshold) continue;
                            ++out.regions;
                            if (out.violations.size() >= budget.max_violations_recorded)
                                continue;
                            // enumerate violating bob plan pairs, bounded
                            for (int ordc = 1; ordc <= 2; ++ordc)
                                for (int b0 = 0;
                                     b0 < P &&
                                     out.violations.size() < budget.max_violations_recorded;
                                     ++b0) {
                                    int cb0 = plans.plans[b0].cls;
                                    if (cb0 != 0 && cb0 != ordc) continue;
                                    long long s0 = r00[b0] + r10[b0];
                                    for (int b1 = 0; b1 < P; ++b1) {
                                        int cb1 = plans.plans[b1].cls;
                                        if (cb1 != 0 && cb1 != ordc) continue;
                                        if (cb0 == 0 && cb1 == 0 && ordc == 2)
                                            continue;  // counted under ordc == 1
                                        if (s0 + r01[b1] + r11[b1] >= sf.threshold) continue;
                                        if (out.violations.size() >=
                                            budget.max_violations_recorded)
                                            break;
                                        Wiring w;
                                        w.n = 2;
                                        w.alice = strategy_from_plans(plans.plans[a0],
                                                                      plans.plans[a1]);
                                        w.bob = strategy_from_plans(plans.plans[b0],
                                                                    plans.plans[b1]);
                                        Box prod = apply_wiring(
                                            w, {poly.vertices[vi], poly.vertices[vj]});
                                        Rat val = facets[fi].eval(prod);
                                        if (val >= 0)
                                            throw Error("scan violation failed exact recheck");
                                        out.violations.push_back({"scan", w, int(vi),
                                                                  int(vj), prod, fi,
                                                                  facets[fi], val});
                                    }
                                }
                        }
                    }
                }
                Rat lo_val =
                    Rat(best_seen) / (Rat(sf.scale) * Rat(data.D) * Rat(data.D)) +
                    facets[fi].offset;
                if (!out.min_set[fi] || lo_val < out.facet_min[fi]) {
                    out.facet_min[fi] = lo_val;
                    out.min_set[fi] = true;
                }
            }
        }
    };

    std::vector<std::thread> pool;
    std::uint64_t chunk = (n_pairs + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        std::uint64_t lo = t * chunk, hi = std::min<std::uint64_t>(n_pairs, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(scan_range, t, lo, hi);
    }
    for (auto& th : pool) th.join();

    rep.facet_min.assign(facets.size(), Rat(0));
    std::vector<bool> have(facets.size(), false);
    for (const WorkerResult& r : results) {
        rep.counters.violation_regions += r.regions;
        rep.counters.full_passes += r.full_passes;
        rep.counters.pruned_combinations += r.pruned;
        if (r.min_set.empty()) continue;
        for (std::size_t fi = 0; fi < facets.size(); ++fi)
            if (r.min_set[fi] && (!have[fi] || r.facet_min[fi] < rep.facet_min[fi])) {
                rep.facet_min[fi] = r.facet_min[fi];
                have[fi] = true;
            }
        for (const SearchViolation& v : r.violations)
            if (rep.violations.size() < budget.max_violations_recorded)
                rep.violations.push_back(v);
    }

    // Deterministic LP cross-checks of sampled wiring outputs against the
    // vertex representation: a box passing every facet but sitting outside
    // the hull would expose an incomplete facet list.
    if (budget.lp_spot_checks > 0) {
        std::uint64_t state = 0x9e3779b97f4a7c15ull;
        auto next = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return state;
        };
        for (std::uint64_t k = 0; k < budget.lp_spot_checks; ++k) {
            std::size_t vi = next() % poly.size(), vj = next() % poly.size();
            int a0 = int(next() % P), b0 = int(next() % P);
            int a1 = int(next() % P), b1 = int(next() % P);
            if (!classes_compatible(plans.plans[a0].cls, plans.plans[a1].cls) ||
                !classes_compatible(plans.plans[b0].cls, plans.plans[b1].cls))
                continue;
            Wiring w;
            w.n = 2;
            w.alice = strategy_from_plans(plans.plans[a0], plans.plans[a1]);
            w.bob = strategy_from_plans(plans.plans[b0], plans.plans[b1]);
            Box prod = apply_wiring(w, {poly.vertices[vi], poly.vertices[vj]});
            // the scaled tensor and the wiring engine must agree cell for cell
            std::vector<long long> cell =
                pair_cells(plans, data.vertices[vi], data.vertices[vj]);
            Rat D2 = Rat(data.D) * Rat(data.D);
            std::array<std::pair<int, int>, 4> sel = {
                std::make_pair(a0, b0), std::make_pair(a0, b1),
                std::make_pair(a1, b0), std::make_pair(a1, b1)};
            for (int xy = 0; xy < 4; ++xy) {
                const long long* c =
                    &cell[(std::size_t(sel[xy].first) * P + sel[xy].second) * 4];
                for (int ab = 0; ab < 4; ++ab)
                    if (Rat(c[ab]) / D2 !=
                        prod.p[Box::index(ab >> 1, ab & 1, xy >> 1, xy & 1)])
                        throw Error("plan tensor disagrees with the wiring engine");
            }
            ++rep.counters.lp_spot_checks_done;
            bool facet_ok = true;
            for (const auto& f : facets)
                if (f.eval(prod) < 0) {
                    facet_ok = false;
                    break;
                }
            if (facet_ok && !in_hull(prod, poly).inside) ++rep.counters.lp_anomalies;
        }
    }

    rep.counters.wirings_covered = rep.counters.canonical_strategies_per_party *
                                   rep.counters.canonical_strategies_per_party;
    rep.any_violation = rep.counters.violation_regions > 0 || !rep.violations.empty();
    rep.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

}  // namespace nsbox
