#include "nsbox/serialize.hpp"


#include <cstdio>
#include <fstream>
#include <sstream>

namespace nsbox {

static std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json box_to_json(const Box& b) {
    json entries = json::array();
    for (const Rat& v : b.p) entries.push_back(rat_string(v));
    return json{{"p", entries}};
}

Box box_from_json(const json& j) {
    if (!j.contains("p") || !j["p"].is_array() || j["p"].size() != 16)
        throw ParseError("box JSON needs a 16-entry \"p\" array");
    Box b;
    for (int i = 0; i < 16; ++i) b.p[i] = parse_rational(j["p"][i].get<std::string>());
    return b;
}

std::string box_csv_row(const Box& b) {
    std::string row;
    for (int i = 0; i < 16; ++i) {
        if (i) row += ',';
        row += rat_string(b.p[i]);
    }
    return row;
}

static json table_to_json(const TruthTable& t) {
    json words = json::array();
    for (std::uint64_t w : t.words) words.push_back(w);
    return json{{"arity", t.arity}, {"words", words}};
}

static TruthTable table_from_json(const json& j) {
    if (!j.contains("arity") || !j.contains("words"))
        throw ParseError("truth table JSON needs arity and words");
    TruthTable t(j["arity"].get<int>());
    auto words = j["words"];
    if (words.size() != t.words.size()) throw ParseError("truth table word count mismatch");
    for (std::size_t i = 0; i < t.words.size(); ++i)
        t.words[i] = words[i].get<std::uint64_t>();
    return t;
}

static json strategy_to_json(const PartyStrategy& s) {
    json fns = json::array();
    for (const TruthTable& t : s.input_fn) fns.push_back(table_to_json(t));
    return json{
        {"order", s.order}, {"input_fns", fns}, {"output_fn", table_to_json(s.output_fn)}};
}

static PartyStrategy strategy_from_json(const json& j) {
    PartyStrategy s;
    s.order = j.at("order").get<std::vector<int>>();
    for (const json& t : j.at("input_fns")) s.input_fn.push_back(table_from_json(t));
    s.output_fn = table_from_json(j.at("output_fn"));
    return s;
}

json wiring_to_json(const Wiring& w) {
    return json{{"n", w.n},
                {"alice", strategy_to_json(w.alice)},
                {"bob", strategy_to_json(w.bob)}};
}

Wiring wiring_from_json(const json& j) {
    Wiring w;
    w.n = j.at("n").get<int>();
    w.alice = strategy_from_json(j.at("alice"));
    w.bob = strategy_from_json(j.at("bob"));
    return w;
}

json functional_to_json(const LinearFunctional& f) {
    json coeff = json::array();
    for (const Rat& c : f.coeff) coeff.push_back(rat_string(c));
    return json{{"coeff", coeff}, {"offset", rat_string(f.offset)}, {"label", f.label}};
}

LinearFunctional functional_from_json(const json& j) {
    LinearFunctional f;
    auto coeff = j.at("coeff");
    if (coeff.size() != 16) throw ParseError("functional JSON needs 16 coefficients");
    for (int i = 0; i < 16; ++i) f.coeff[i] = parse_rational(coeff[i].get<std::string>());
    f.offset = parse_rational(j.at("offset").get<std::string>());
    f.label = j.value("label", "");
    return f;
}

json certificate_to_json(const MembershipCertificate& c) {
    json j{{"inside", c.inside}};
    if (c.inside) {
        json w = json::array();
        for (const Rat& v : c.weights) w.push_back(rat_string(v));
        j["weights"] = w;
    } else {
        j["separator"] = functional_to_json(c.separator);
    }
    return j;
}

MembershipCertificate certificate_from_json(const json& j) {
    MembershipCertificate c;
    c.inside = j.at("inside").get<bool>();
    if (c.inside)
        for (const json& w : j.at("weights")) c.weights.push_back(parse_rational(w.get<std::string>()));
    else
        c.separator = functional_from_json(j.at("separator"));
    return c;
}

json polytope_to_json(const VPolytope& p) {
    json verts = json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        json v = box_to_json(p.vertices[i]);
        if (i < p.labels.size() && !p.labels[i].empty()) v["label"] = p.labels[i];
        verts.push_back(v);
    }
    return json{{"vertices", verts}};
}

VPolytope polytope_from_json(const json& j) {
    VPolytope p;
    for (const json& v : j.at("vertices"))
        p.push(box_from_json(v), v.value("label", ""));
    return p;
}

json escape_to_json(const EscapeCertificate& c) {
    return json{{"violated", c.violated},
                {"box", box_to_json(c.box)},
                {"facet", functional_to_json(c.facet)},
                {"value", rat_string(c.value)},
                {"chsh_in", rat_string(c.chsh_in)},
                {"chsh_out", rat_string(c.chsh_out)}};
}

json hull_report_to_json(const HullIterationReport& r) {
    json stages = json::array();
    for (const HullStage& s : r.stages) {
        json st{{"n", s.n},
                {"vertex_count", s.vertex_count},
                {"added", s.added},
                {"base_box_outside", s.base_box_outside}};
        if (s.base_box_outside) st["base_separator"] = functional_to_json(s.base_separator);
        stages.push_back(st);
    }
    return json{{"eps", rat_string(r.eps)},
                {"stages", stages},
                {"final_vertex_count", r.final_hull.size()}};
}

json search_report_to_json(const SearchReport& r) {
    json viols = json::array();
    for (const SearchViolation& v : r.violations)
        viols.push_back(json{{"kind", v.kind},
                             {"wiring", wiring_to_json(v.wiring)},
                             {"vertex1", v.vertex1},
                             {"vertex2", v.vertex2},
                             {"produced", box_to_json(v.produced)},
                             {"facet_index", v.facet_index},
                             {"facet", functional_to_json(v.facet)},
                             {"value", rat_string(v.value)}});
    json mins = json::array();
    for (const Rat& m : r.facet_min) mins.push_back(rat_string(m));
    return json{
        {"counters",
         {{"raw_strategies_per_party", r.counters.raw_strategies_per_party},
          {"plans_per_input", r.counters.plans_per_input},
          {"canonical_strategies_per_party", r.counters.canonical_strategies_per_party},
          {"wirings_covered", r.counters.wirings_covered},
          {"vertex_pairs", r.counters.vertex_pairs},
          {"facets_checked", r.counters.facets_checked},
          {"violation_regions", r.counters.violation_regions},
          {"full_passes", r.counters.full_passes},
          {"pruned_combinations", r.counters.pruned_combinations},
          {"lp_spot_checks_done", r.counters.lp_spot_checks_done},
          {"lp_anomalies", r.counters.lp_anomalies}}},
        {"completed", r.completed},
        {"any_violation", r.any_violation},
        {"violations", viols},
        {"facet_min", mins},
        {"facet_labels", r.facet_labels},
        {"seconds", r.seconds},
        {"arithmetic", r.arithmetic}};
}

json edge_trajectory_to_json(const EdgeTrajectory& t) {
    json eps = json::array(), chsh = json::array();
    for (const Rat& e : t.eps_steps) eps.push_back(rat_string(e));
    for (const Rat& c : t.chsh_steps) chsh.push_back(rat_string(c));
    return json{{"edge",
                 {{"mu", t.mu},
                  {"nu", t.nu},
                  {"sigma", t.sigma},
                  {"alpha", t.alpha},
                  {"beta", t.beta},
                  {"gamma", t.gamma}}},
                {"chsh_sym", t.chsh_sym},
                {"eps_steps", eps},
                {"chsh_steps", chsh}};
}

json uffink_scan_to_json(const UffinkScan& s) {
    json cells = json::array();
    for (const UffinkCell& c : s.cells) {
        if (!c.inside_simplex) continue;
        cells.push_back(json{{"eps", rat_string(c.eps)},
                             {"gamma", rat_string(c.gamma)},
                             {"inside_uffink", c.inside_uffink},
                             {"first_escape", c.first_escape},
                             {"quartic_predicts", c.quartic_predicts}});
    }
    return json{{"grid", s.grid},
                {"iters", s.iters},
                {"one_step_escapes", s.one_step_escapes},
                {"cells", cells}};
}

std::string uffink_scan_csv(const UffinkScan& s) {
    std::string out = "eps,gamma,first_escape_iteration\n";
    for (const UffinkCell& c : s.cells) {
        if (!c.inside_simplex) continue;
        out += fmt17(to_double(c.eps)) + "," + fmt17(to_double(c.gamma)) + "," +
               std::to_string(c.first_escape) + "\n";
    }
    return out;
}

std::string vector_field_csv(const std::vector<FieldNode>& nodes) {
    std::string out = "u,v,du,dv,residual\n";
    for (const FieldNode& n : nodes)
        out += fmt17(n.u) + "," + fmt17(n.v) + "," + fmt17(n.du) + "," + fmt17(n.dv) + "," +
               fmt17(n.residual) + "\n";
    return out;
}

std::string trajectory_csv(const Trajectory& t) {
    std::string out = "step,u,v,residual\n";
    for (std::size_t i = 0; i < t.points.size(); ++i)
        out += std::to_string(i) + "," + fmt17(t.points[i].u) + "," + fmt17(t.points[i].v) +
               "," + fmt17(t.points[i].residual) + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << content;
    if (!f) throw Error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace nsbox
