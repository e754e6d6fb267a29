#include "nsbox/wiring.hpp"

#include <algorithm>

namespace nsbox {

static void check_strategy(const PartyStrategy& s, int n, const char* who) {
    std::string w(who);
    if (int(s.order.size()) != n) throw ArityError(w + ": order size != n");
    std::vector<int> seen(n, 0);
    for (int k : s.order) {
        if (k < 0 || k >= n || seen[k]++) throw ArityError(w + ": order is not a permutation");
    }
    if (int(s.input_fn.size()) != n) throw ArityError(w + ": need one input function per step");
    for (int j = 0; j < n; ++j)
        if (s.input_fn[j].arity != j + 1)
            throw ArityError(w + ": input function " + std::to_string(j) + " has wrong arity");
    if (s.output_fn.arity != n + 1) throw ArityError(w + ": output function has wrong arity");
}

PartyResponse party_response(const PartyStrategy& s) {
    int n = s.box_count();
    check_strategy(s, n, "party");
    PartyResponse r;
    r.n = n;
    std::size_t total = std::size_t(2) << n;
    r.inputs.resize(total);
    r.final_out.resize(total);
    for (int x = 0; x < 2; ++x)
        for (std::uint32_t tuple = 0; tuple < (1u << n); ++tuple) {
            std::uint32_t obs = 0;  // outputs seen so far, packed in step order
            std::uint16_t issued = 0;
            for (int j = 0; j < n; ++j) {
                int k = s.order[j];
                int u = s.input_fn[j].eval(std::uint32_t(x) | (obs << 1));
                issued |= std::uint16_t(u) << k;
                obs |= ((tuple >> k) & 1u) << j;
            }
            std::size_t at = (std::size_t(x) << n) | tuple;
            r.inputs[at] = issued;
            r.final_out[at] = s.output_fn.eval(std::uint32_t(x) | (obs << 1));
        }
    return r;
}

template <typename T>
std::array<T, 16> apply_wiring_tables(const Wiring& w,
                                      const std::vector<std::array<T, 16>>& boxes) {
    int n = w.n;
    if (int(boxes.size()) != n) throw ArityError("wiring over " + std::to_string(n) +
                                                 " boxes applied to " +
                                                 std::to_string(boxes.size()));
    check_strategy(w.alice, n, "alice");
    check_strategy(w.bob, n, "bob");
    PartyResponse ra = party_response(w.alice);
    PartyResponse rb = party_response(w.bob);

    std::array<T, 16> out{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (std::uint32_t ta = 0; ta < (1u << n); ++ta) {
                std::size_t ia = (std::size_t(x) << n) | ta;
                for (std::uint32_t tb = 0; tb < (1u << n); ++tb) {
                    std::size_t ib = (std::size_t(y) << n) | tb;
                    T prob(1);
                    bool zero = false;
                    for (int k = 0; k < n; ++k) {
                        const T& f = boxes[k][Box::index((ta >> k) & 1, (tb >> k) & 1,
                                                         (ra.inputs[ia] >> k) & 1,
                                                         (rb.inputs[ib] >> k) & 1)];
                        if (f == 0) {
                            zero = true;
                            break;
                        }
                        prob *= f;
                    }
                    if (zero) continue;
                    out[Box::index(ra.final_out[ia], rb.final_out[ib], x, y)] += prob;
                }
            }
    return out;
}

template std::array<Rat, 16> apply_wiring_tables<Rat>(const Wiring&,
                                                      const std::vector<std::array<Rat, 16>>&);
template std::array<double, 16> apply_wiring_tables<double>(
    const Wiring&, const std::vector<std::array<double, 16>>&);

Box apply_wiring(const Wiring& w, const std::vector<Box>& boxes) {
    std::vector<std::array<Rat, 16>> tables;
    tables.reserve(boxes.size());
    for (const Box& b : boxes) tables.push_back(b.p);
    Box out;
    out.p = apply_wiring_tables<Rat>(w, tables);
    return out;
}

static TruthTable table_from(int arity, const std::vector<int>& bits) {
    TruthTable t(arity);
    for (std::uint32_t i = 0; i < t.size(); ++i) t.set(i, bits[i]);
    return t;
}

Wiring identity_wiring() {
    Wiring w;
    w.n = 1;
    PartyStrategy s;
    s.order = {0};
    s.input_fn = {table_from(1, {0, 1})};          // x1 = x
    s.output_fn = table_from(2, {0, 0, 1, 1});     // a = a1
    w.alice = s;
    w.bob = s;
    return w;
}

Wiring distillation_wiring() {
    Wiring w;
    w.n = 2;
    w.alice.order = {0, 1};
    w.alice.input_fn = {table_from(1, {0, 1}),            // x1 = x
                        table_from(2, {1, 0, 0, 1})};     // x2 = x ^ a1 ^ 1
    w.alice.output_fn = table_from(3, {1, 1, 0, 0, 0, 0, 1, 1});  // a = a1 ^ a2 ^ 1
    w.bob.order = {0, 1};
    w.bob.input_fn = {table_from(1, {0, 1}),              // y1 = y
                      table_from(2, {0, 0, 0, 1})};       // y2 = y & b1
    w.bob.output_fn = table_from(3, {1, 1, 0, 0, 0, 0, 1, 1});    // b = b1 ^ b2 ^ 1
    return w;
}

Wiring and_wiring(int n) {
    if (n < 1) throw ArityError("AND wiring needs n >= 1");
    Wiring w;
    w.n = n;
    PartyStrategy s;
    s.order.resize(n);
    for (int j = 0; j < n; ++j) s.order[j] = j;
    for (int j = 0; j < n; ++j) {
        TruthTable t(j + 1);
        for (std::uint32_t i = 0; i < t.size(); ++i) t.set(i, i & 1);  // x_j = x
        s.input_fn.push_back(t);
    }
    TruthTable g(n + 1);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        std::uint32_t outs = i >> 1;
        g.set(i, outs == (1u << n) - 1);  // a = AND of all outputs
    }
    s.output_fn = g;
    w.alice = s;
    w.bob = s;
    return w;
}

static Rat rat_pow(const Rat& base, int n) {
    Rat r(1);
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

Box and_closed_form(const Box& b, int n) {
    if (n < 1) throw ParameterError("and_closed_form needs n >= 1");
    Box out;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Rat p11 = rat_pow(b.at(1, 1, x, y), n);
            Rat p01 = rat_pow(b.at(0, 1, x, y) + b.at(1, 1, x, y), n) - p11;
            Rat p10 = rat_pow(b.at(1, 0, x, y) + b.at(1, 1, x, y), n) - p11;
            out.at(1, 1, x, y) = p11;
            out.at(0, 1, x, y) = p01;
            out.at(1, 0, x, y) = p10;
            out.at(0, 0, x, y) = 1 - p01 - p10 - p11;
        }
    return out;
}

// Rebuild one party's truth tables for the conjugated circuit. The base
// strategy is simulated in its own frame: virtual inputs u and virtual
// observations o relate to the raw wires by u_raw = u ^ f_in and
// o = o_raw ^ h_in[u]; the outer interface adds x_base = x ^ f_out and
// a = a_base ^ h_out[x].
static PartyStrategy conjugate_strategy(const PartyStrategy& base, int f_out,
                                        const std::array<int, 2>& h_out, int f_in,
                                        const std::array<int, 2>& h_in) {
    int n = base.box_count();
    PartyStrategy s;
    s.order = base.order;
    auto virtual_obs = [&](int x_base, std::uint32_t raw_obs, int upto,
                           std::uint32_t* last_u) -> std::uint32_t {
        std::uint32_t virt = 0;
        std::uint32_t u = 0;
        for (int i = 0; i < upto; ++i) {
            u = base.input_fn[i].eval(std::uint32_t(x_base) | (virt << 1));
            int o = int((raw_obs >> i) & 1) ^ h_in[u];
            virt |= std::uint32_t(o) << i;
        }
        if (last_u) *last_u = u;
        return virt;
    };
    for (int j = 0; j < n; ++j) {
        TruthTable t(j + 1);
        for (std::uint32_t arg = 0; arg < t.size(); ++arg) {
            int x = arg & 1;
            std::uint32_t raw_obs = arg >> 1;
            int x_base = x ^ f_out;
            std::uint32_t virt = virtual_obs(x_base, raw_obs, j, nullptr);
            int u = base.input_fn[j].eval(std::uint32_t(x_base) | (virt << 1));
            t.set(arg, u ^ f_in);
        }
        s.input_fn.push_back(t);
    }
    TruthTable g(n + 1);
    for (std::uint32_t arg = 0; arg < g.size(); ++arg) {
        int x = arg & 1;
        std::uint32_t raw_obs = arg >> 1;
        int x_base = x ^ f_out;
        std::uint32_t virt = virtual_obs(x_base, raw_obs, n, nullptr);
        int a = base.output_fn.eval(std::uint32_t(x_base) | (virt << 1));
        g.set(arg, a ^ h_out[x]);
    }
    s.output_fn = g;
    return s;
}

Wiring conjugate_wiring(const Relabeling& g_in, const Relabeling& g_out, const Wiring& w) {
    if (g_in.swap_parties != g_out.swap_parties)
        throw ParameterError("conjugation needs matching party-swap bits");
    bool sw = g_in.swap_parties;
    Relabeling gi = inverse(g_in);
    Wiring out;
    out.n = w.n;
    // With a swap, outer Alice runs the base Bob strategy against the raw
    // boxes' Alice ports, whose transforms are gi's Bob-side parameters.
    const PartyStrategy& base_a = sw ? w.bob : w.alice;
    const PartyStrategy& base_b = sw ? w.alice : w.bob;
    const PartyRelabel& in_a = sw ? gi.b : gi.a;
    const PartyRelabel& in_b = sw ? gi.a : gi.b;
    out.alice = conjugate_strategy(base_a, g_out.a.in_flip, g_out.a.out_flip,
                                   in_a.in_flip, in_a.out_flip);
    out.bob = conjugate_strategy(base_b, g_out.b.in_flip, g_out.b.out_flip,
                                 in_b.in_flip, in_b.out_flip);
    return out;
}

}  // namespace nsbox
