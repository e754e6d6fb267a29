#pragma once

#include <cstdint>
#include <vector>

#include "nsbox/box.hpp"
#include "nsbox/relabel.hpp"

namespace nsbox {

// Deterministic boolean function of `arity` bits, stored as a bitmask:
// bit i of `words` holds the value at packed argument i. Throughout the
// wiring code the packing convention is: argument bit 0 is the party's own
// input bit, argument bit 1+j is the box output observed at usage step j.
struct TruthTable {
    int arity = 0;
    std::vector<std::uint64_t> words;

    TruthTable() = default;
    explicit TruthTable(int arity_)
        : arity(arity_), words((std::size_t(1) << arity_) <= 64
                                   ? 1
                                   : (std::size_t(1) << arity_) / 64) {}

    bool eval(std::uint32_t args) const {
        return (words[args >> 6] >> (args & 63)) & 1;
    }
    void set(std::uint32_t args, bool v) {
        if (v)
            words[args >> 6] |= std::uint64_t(1) << (args & 63);
        else
            words[args >> 6] &= ~(std::uint64_t(1) << (args & 63));
    }
    std::uint32_t size() const { return std::uint32_t(1) << arity; }

    bool operator==(const TruthTable&) const = default;
};

// One party's adaptive circuit over n boxes: the usage order, the input
// function for each step (arity 1+step), and the final output function
// (arity 1+n, outputs indexed by usage step).
struct PartyStrategy {
    std::vector<int> order;
    std::vector<TruthTable> input_fn;
    TruthTable output_fn;

    int box_count() const { return int(order.size()); }
    bool operator==(const PartyStrategy&) const = default;
};

struct Wiring {
    int n = 0;
    PartyStrategy alice;
    PartyStrategy bob;

    bool operator==(const Wiring&) const = default;
};

// Everything the final box depends on, per party: for each own-input bit x
// and each tuple of box outputs (bit k = output of box k, canonical index),
// the inputs issued to the boxes (bit k = input of box k) and the final
// output bit. Entry index: x * 2^n + tuple. Strategies inducing the same
// response are behaviorally identical on every list of boxes.
struct PartyResponse {
    int n = 0;
    std::vector<std::uint16_t> inputs;
    std::vector<std::uint8_t> final_out;

    bool operator==(const PartyResponse&) const = default;
};

PartyResponse party_response(const PartyStrategy& s);

// Exact resulting box of wiring n boxes together; throws ArityError on a
// count mismatch. Wirings preserve non-signaling, so the output passes
// validate whenever the inputs do.
Box apply_wiring(const Wiring& w, const std::vector<Box>& boxes);

// Generic-scalar core used by apply_wiring and by the float dynamics path.
template <typename T>
std::array<T, 16> apply_wiring_tables(const Wiring& w,
                                      const std::vector<std::array<T, 16>>& boxes);

// n = 1, x1 = x, a = a1 (same for Bob).
Wiring identity_wiring();

// The two-box distillation protocol:
//   Alice: x1 = x, x2 = x ^ a1 ^ 1, a = a1 ^ a2 ^ 1
//   Bob:   y1 = y, y2 = y & b1,     b = b1 ^ b2 ^ 1
// On two copies of make_correlated_nl(eps) it yields
// make_correlated_nl(2*eps - eps^2).
Wiring distillation_wiring();

// x_j = x for every box, a = AND of all outputs (same for Bob).
Wiring and_wiring(int n);

// Closed form for the AND wiring on n copies of one box:
//   P'(11) = P(11)^n
//   P'(01) = (P(01)+P(11))^n - P(11)^n   (P'(10) symmetric)
//   P'(00) = the normalization remainder.
Box and_closed_form(const Box& b, int n);

// The wiring w'' with apply(w'', boxes) == g_out(apply(w, [g_in^-1(B_k)])).
// g_in is applied around every constituent box interface and g_out around
// the final interface; the two must agree on the party swap bit (a mismatch
// would cross the parties mid-circuit and is not a wiring).
Wiring conjugate_wiring(const Relabeling& g_in, const Relabeling& g_out, const Wiring& w);

}  // namespace nsbox
