// nsbox: exact toolkit for two-party binary non-signaling boxes, wirings,
// and closure experiments. Every subcommand maps onto one library operation
// and writes JSON or CSV artifacts; rationals are passed as "num/den".
//
// Exit codes: 0 success, 1 internal failure, 2 usage error, 3 parameter
// outside its documented range, 4 malformed input (box/wiring/rational).

#include <CLI11.hpp>

#include <iostream>
#include <random>

#include "nsbox/dynamics.hpp"
#include "nsbox/serialize.hpp"

using namespace nsbox;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParameter = 3;
constexpr int kExitMalformed = 4;

Rat parse_rat_arg(const std::string& s) { return parse_rational(s); }

// "pr" | "mixed" | "local:MNST" | "nl:MNS" | "iso:EPS" | "corr:EPS" |
// "section:EPS,GAMMA" | "@file.json"
Box parse_box_spec(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@')
        return box_from_json(json::parse(read_file(spec.substr(1))));
    auto split = spec.find(':');
    std::string kind = spec.substr(0, split);
    std::string arg = split == std::string::npos ? "" : spec.substr(split + 1);
    auto bits = [&](std::size_t n) {
        if (arg.size() != n) throw ParseError("box spec '" + spec + "' needs " +
                                              std::to_string(n) + " bits");
        std::vector<int> v;
        for (char c : arg) {
            if (c != '0' && c != '1') throw ParseError("box spec bits must be 0/1");
            v.push_back(c - '0');
        }
        return v;
    };
    if (kind == "pr") return make_extremal_nl(0, 0, 0);
    if (kind == "mixed") return make_maximally_mixed();
    if (kind == "local") {
        auto b = bits(4);
        return make_local_deterministic(b[0], b[1], b[2], b[3]);
    }
    if (kind == "nl") {
        auto b = bits(3);
        return make_extremal_nl(b[0], b[1], b[2]);
    }
    if (kind == "iso") return make_isotropic(parse_rat_arg(arg));
    if (kind == "corr") return make_correlated_nl(parse_rat_arg(arg));
    if (kind == "section") {
        auto comma = arg.find(',');
        if (comma == std::string::npos)
            throw ParseError("section spec needs 'eps,gamma'");
        return make_section_box(parse_rat_arg(arg.substr(0, comma)),
                                parse_rat_arg(arg.substr(comma + 1)));
    }
    throw ParseError("unknown box spec '" + spec + "'");
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content << "\n";
    else
        write_file(out_path, content);
}

int run_selftest(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    VPolytope ns = ns_polytope();
    VPolytope L = local_polytope();
    auto random_box = [&]() {
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
        for (std::size_t j = 0; j < ns.size(); ++j)
            if (w[j] != 0)
                for (int i = 0; i < 16; ++i) out.p[i] += (w[j] / total) * ns.vertices[j].p[i];
        return out;
    };
    auto random_table = [&](int arity) {
        TruthTable t(arity);
        std::uniform_int_distribution<std::uint64_t> d;
        for (auto& w : t.words) w = d(rng);
        if (t.arity < 6) t.words[0] &= (std::uint64_t(1) << (1u << arity)) - 1;
        return t;
    };
    auto random_strategy = [&](int n) {
        PartyStrategy s;
        s.order.resize(n);
        for (int i = 0; i < n; ++i) s.order[i] = i;
        std::shuffle(s.order.begin(), s.order.end(), rng);
        for (int j = 0; j < n; ++j) s.input_fn.push_back(random_table(j + 1));
        s.output_fn = random_table(n + 1);
        return s;
    };

    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        bool ok = true;
        for (int i = 0; i < 200; ++i) {
            int n = 1 + int(i % 3);
            Wiring w{n, random_strategy(n), random_strategy(n)};
            std::vector<Box> boxes;
            for (int k = 0; k < n; ++k) boxes.push_back(random_box());
            ok = ok && validate(apply_wiring(w, boxes)).ok();
        }
        report("non-signaling preserved under 200 random wirings", ok);
    }
    {
        bool ok = true;
        for (int i = 0; i < 25; ++i) {
            Wiring w{2, random_strategy(2), random_strategy(2)};
            Box b1 = random_box(), b2 = random_box(), rest = random_box();
            Rat lam(2, 5);
            Box m = mix({{lam, b1}, {1 - lam, b2}});
            Box lhs = apply_wiring(w, {m, rest});
            Box rhs = mix({{lam, apply_wiring(w, {b1, rest})},
                           {1 - lam, apply_wiring(w, {b2, rest})}});
            ok = ok && lhs == rhs;
        }
        report("apply_wiring is affine in each slot", ok);
    }
    {
        const auto& G = all_relabelings();
        bool ok = G.size() == 128;
        Box b = random_box();
        std::uniform_int_distribution<int> d(0, 127);
        for (int i = 0; i < 50 && ok; ++i) {
            Relabeling g = G[d(rng)], h = G[d(rng)];
            ok = apply_relabeling(compose(g, h), b) ==
                     apply_relabeling(g, apply_relabeling(h, b)) &&
                 compose(g, inverse(g)).is_identity();
        }
        auto orbit_size = [&](const Box& seed) {
            std::vector<Box> orbit;
            for (const auto& g : G) {
                Box img = apply_relabeling(g, seed);
                bool seen = false;
                for (const Box& o : orbit)
                    if (o == img) seen = true;
                if (!seen) orbit.push_back(img);
            }
            return orbit.size();
        };
        ok = ok && orbit_size(make_extremal_nl(0, 0, 0)) == 8;
        ok = ok && orbit_size(make_local_deterministic(0, 0, 0, 0)) == 16;
        ok = ok && facet_orbit(tilted_ch(Rat(4, 3))).size() == 64;
        report("relabeling group axioms and orbit sizes 8/16/64", ok);
    }
    {
        bool ok = true;
        for (int i = 0; i < 20; ++i) {
            Box b = random_box();
            MembershipCertificate c = in_hull(b, L);
            ok = ok && c.verify(b, L);
        }
        Box pr = make_extremal_nl(0, 0, 0);
        MembershipCertificate c = in_hull(pr, L);
        ok = ok && !c.inside && c.verify(pr, L);
        report("membership certificates self-verify", ok);
    }
    std::cout << (failures ? "selftest FAILED\n" : "selftest ok\n");
    return failures ? kExitInternal : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "nsbox - exact non-signaling box calculus: wirings, polytopes, closure "
        "experiments"};
    app.set_config("--config", "", "read options from a key=value file");
    app.require_subcommand(1);
    app.footer(
        "Rationals are exact 'num/den' strings; decimals are rejected.\n"
        "Exit codes: 0 ok, 1 internal failure, 2 usage error, 3 parameter out of "
        "range, 4 malformed input.");

    std::string out_path;

    // box show
    auto* box_cmd = app.add_subcommand("box", "box constructors and inspection");
    auto* box_show = box_cmd->add_subcommand("show", "print a box exactly");
    std::string box_spec = "pr";
    bool box_csv = false;
    box_show->add_option("--family", box_spec,
                         "pr | mixed | local:MNST | nl:MNS | iso:E | corr:E | "
                         "section:E,G | @file.json");
    box_show->add_flag("--csv", box_csv, "emit the 16-entry CSV row instead of JSON");
    box_show->add_option("--out", out_path, "write to file instead of stdout");

    // wire apply
    auto* wire_cmd = app.add_subcommand("wire", "wiring application");
    auto* wire_apply = wire_cmd->add_subcommand("apply", "wire boxes into a new box");
    std::string protocol = "distill";
    std::vector<std::string> box_specs;
    std::string wiring_file;
    wire_apply->add_option("--protocol", protocol, "distill | and | identity");
    wire_apply->add_option("--wiring", wiring_file, "wiring JSON file (overrides --protocol)");
    wire_apply->add_option("--boxes", box_specs, "box specs (repeatable)")->required();
    wire_apply->add_option("--out", out_path, "output JSON path");

    // distill iterate
    auto* distill = app.add_subcommand("distill", "distillation protocol");
    auto* dit = distill->add_subcommand("iterate", "iterate the protocol on an edge box");
    std::string eps_str = "1/2";
    int iterations = 1;
    std::string edge_str = "000:010";
    dit->add_option("--eps", eps_str, "initial eps as num/den")->required();
    dit->add_option("--k", iterations, "iteration count")->required();
    dit->add_option("--edge", edge_str, "edge family 'MNS:ABG' (default canonical)");
    dit->add_option("--out", out_path, "trajectory JSON path");

    // escape and
    auto* escape = app.add_subcommand("escape", "facet-violating boxes");
    auto* esc_and = escape->add_subcommand("and", "AND-wire isotropic boxes against I(q)");
    int copies = 2;
    esc_and->add_option("--eps", eps_str, "isotropic eps as num/den")->required();
    esc_and->add_option("--n", copies, "copy count")->required();
    esc_and->add_option("--out", out_path, "certificate JSON path");

    // hull iterate
    auto* hull = app.add_subcommand("hull", "iterated convex hull growth");
    auto* hit = hull->add_subcommand("iterate", "grow the noisy polytope with AND boxes");
    int n_max = 10;
    hit->add_option("--eps", eps_str, "isotropic eps as num/den")->required();
    hit->add_option("--n-max", n_max, "largest AND copy count");
    hit->add_option("--out", out_path, "report JSON path");

    // search two-box
    auto* search = app.add_subcommand("search", "exhaustive wiring searches");
    auto* s2 = search->add_subcommand("two-box", "scan all canonical two-box wirings");
    std::string S_str = "5/2";
    std::string poly_kind = "rb";
    int workers = 1;
    std::uint64_t max_pairs = UINT64_MAX;
    std::size_t record_cap = 16;
    std::uint64_t spot_checks = 0;
    bool quotient = false;
    s2->add_option("--S", S_str, "CHSH cut-off as num/den (rb polytope)");
    s2->add_option("--polytope", poly_kind, "rb | ns");
    s2->add_option("--workers", workers, "worker threads (default 1)");
    s2->add_option("--max-pairs", max_pairs, "vertex-pair budget (partial scan)");
    s2->add_option("--record", record_cap, "max violations recorded");
    s2->add_option("--spot-checks", spot_checks, "sampled LP membership cross-checks");
    s2->add_flag("--quotient", quotient,
                 "check one representative per facet orbit (sound via symmetry)");
    s2->add_option("--out", out_path, "report JSON path");

    // uffink scan
    auto* uffink = app.add_subcommand("uffink", "quadratic-set experiments");
    auto* uscan = uffink->add_subcommand("scan", "escape region of the section grid");
    int grid = 200, iters = 3;
    bool json_out = false;
    uscan->add_option("--grid", grid, "grid resolution per axis");
    uscan->add_option("--iters", iters, "protocol iterations per node");
    uscan->add_option("--workers", workers, "worker threads");
    uscan->add_flag("--json", json_out, "emit JSON instead of CSV");
    uscan->add_option("--out", out_path, "output path");

    // field export
    auto* field = app.add_subcommand("field", "discrete-map vector fields");
    auto* fexp = field->add_subcommand("export", "CSV vector field of a protocol map");
    std::string section_name = "correlated";
    fexp->add_option("--protocol", protocol, "distill | and");
    fexp->add_option("--grid", grid, "grid resolution per axis");
    fexp->add_option("--section", section_name, "correlated | and-guess");
    fexp->add_option("--workers", workers, "worker threads");
    fexp->add_option("--out", out_path, "CSV path");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the invariant suites");
    std::uint64_t seed = 12345;
    selftest->add_option("--seed", seed, "RNG seed for the randomized suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (box_show->parsed()) {
            Box b = parse_box_spec(box_spec);
            if (box_csv) {
                emit(out_path, box_csv_row(b));
            } else {
                json j = box_to_json(b);
                Correlators c = correlators(b);
                j["correlators"] = {{"E00", rat_string(c.E[0][0])},
                                    {"E01", rat_string(c.E[0][1])},
                                    {"E10", rat_string(c.E[1][0])},
                                    {"E11", rat_string(c.E[1][1])}};
                json chsh = json::array();
                for (int s = 0; s < 8; ++s) chsh.push_back(rat_string(chsh_value(b, s)));
                j["chsh"] = chsh;
                j["ch"] = rat_string(ch_value(b));
                j["uffink_lhs"] = rat_string(uffink_lhs(b));
                ValidationReport v = validate(b);
                j["valid"] = v.ok();
                emit(out_path, j.dump(2));
            }
        } else if (wire_apply->parsed()) {
            std::vector<Box> boxes;
            for (const std::string& s : box_specs) boxes.push_back(parse_box_spec(s));
            Wiring w;
            if (!wiring_file.empty())
                w = wiring_from_json(json::parse(read_file(wiring_file)));
            else if (protocol == "distill")
                w = distillation_wiring();
            else if (protocol == "and")
                w = and_wiring(int(boxes.size()));
            else if (protocol == "identity")
                w = identity_wiring();
            else
                throw ParseError("unknown protocol '" + protocol + "'");
            Box out = apply_wiring(w, boxes);
            json j = box_to_json(out);
            j["chsh0"] = rat_string(chsh_value(out, 0));
            emit(out_path, j.dump(2));
        } else if (dit->parsed()) {
            auto colon = edge_str.find(':');
            if (colon == std::string::npos || edge_str.size() != 7)
                throw ParseError("edge must look like MNS:ABG");
            auto bit = [&](std::size_t i) {
                char c = edge_str[i];
                if (c != '0' && c != '1') throw ParseError("edge bits must be 0/1");
                return c - '0';
            };
            EdgeTrajectory t =
                distill_edge_out(bit(0), bit(1), bit(2), bit(4), bit(5), bit(6),
                                 parse_rat_arg(eps_str), iterations);
            std::cout << "eps trajectory:";
            for (const Rat& e : t.eps_steps) std::cout << " " << rat_string(e);
            std::cout << "\n";
            if (!out_path.empty())
                write_file(out_path, edge_trajectory_to_json(t).dump(2));
        } else if (esc_and->parsed()) {
            EscapeCertificate c = and_escape_box(copies, parse_rat_arg(eps_str));
            std::cout << (c.violated ? "violated" : "not violated") << ": I(q) = "
                      << rat_string(c.value) << "\n";
            emit(out_path, escape_to_json(c).dump(2));
        } else if (hit->parsed()) {
            HullIterationReport r = iterate_hull(parse_rat_arg(eps_str), n_max);
            for (const HullStage& s : r.stages)
                std::cout << "stage n=" << s.n << ": " << s.vertex_count << " vertices, +"
                          << s.added << (s.base_box_outside ? " (escaped)" : "") << "\n";
            if (!out_path.empty()) write_file(out_path, hull_report_to_json(r).dump(2));
        } else if (s2->parsed()) {
            VPolytope poly;
            std::vector<LinearFunctional> facets;
            if (poly_kind == "ns") {
                poly = ns_polytope();
                facets = positivity_facets();
            } else if (poly_kind == "rb") {
                Rat S = parse_rat_arg(S_str);
                poly = r_b_polytope(S);
                facets = r_b_facets(S);
            } else {
                throw ParseError("unknown polytope '" + poly_kind + "'");
            }
            if (quotient) {
                // one representative per relabeling orbit: sound because the
                // wiring space, the vertex set and the facet family are all
                // group-invariant
                std::vector<LinearFunctional> reps;
                for (const auto& f : facets) {
                    bool covered = false;
                    for (const auto& r : reps)
                        for (const auto& g : facet_orbit(r))
                            if (same_functional(f, g)) covered = true;
                    if (!covered) reps.push_back(f);
                }
                facets = reps;
            }
            SearchBudget b;
            b.workers = workers;
            b.max_vertex_pairs = max_pairs;
            b.max_violations_recorded = record_cap;
            b.lp_spot_checks = spot_checks;
            SearchReport r = two_box_closure_search(poly, facets, b);
            std::cout << (r.any_violation ? "violations found" : "no violations") << " ("
                      << r.counters.vertex_pairs << " vertex pairs, "
                      << r.counters.facets_checked << " facets, "
                      << r.counters.wirings_covered << " wirings covered, "
                      << (r.completed ? "complete" : "BUDGET EXHAUSTED") << ", "
                      << r.seconds << "s)\n";
            emit(out_path, search_report_to_json(r).dump(2));
        } else if (uscan->parsed()) {
            UffinkScan s = uffink_escape_scan(grid, iters, workers);
            std::cout << s.one_step_escapes << " one-step escapes on the " << grid << "x"
                      << grid << " grid\n";
            if (json_out)
                emit(out_path, uffink_scan_to_json(s).dump(2));
            else
                emit(out_path, uffink_scan_csv(s));
        } else if (fexp->parsed()) {
            Section2D section =
                section_name == "and-guess" ? section_and_guess() : section_correlated();
            MapStep step = protocol == "and" ? and_step(2) : distillation_step();
            auto nodes = vector_field(step, section, grid, workers);
            emit(out_path, vector_field_csv(nodes));
        } else if (selftest->parsed()) {
            return run_selftest(seed);
        }
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const InvalidMixtureError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const ArityError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitParameter;
    } catch (const ParseError& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const OutsidePolytopeError& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const json::exception& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
