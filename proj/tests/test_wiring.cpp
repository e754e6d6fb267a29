#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace nsbox;

TEST_CASE("identity wiring reproduces its input") {
    Wiring id = identity_wiring();
    CHECK(apply_wiring(id, {make_extremal_nl(0, 0, 0)}) == make_extremal_nl(0, 0, 0));
    testing::Rng rng(23);
    for (int i = 0; i < 25; ++i) {
        Box b = testing::random_box(rng);
        CHECK(apply_wiring(id, {b}) == b);
    }
}

TEST_CASE("arity errors") {
    Wiring id = identity_wiring();
    CHECK_THROWS_AS(apply_wiring(id, {}), ArityError);
    CHECK_THROWS_AS(
        apply_wiring(id, {make_maximally_mixed(), make_maximally_mixed()}), ArityError);
    CHECK_THROWS_AS(and_wiring(0), ArityError);
}

TEST_CASE("distillation protocol: PR fixed, eps -> 2eps - eps^2 on the correlated line") {
    Wiring d = distillation_wiring();
    Box pr = make_extremal_nl(0, 0, 0);
    CHECK(apply_wiring(d, {pr, pr}) == pr);

    Box half = make_correlated_nl(Rat(1, 2));
    CHECK(apply_wiring(d, {half, half}) == make_correlated_nl(Rat(3, 4)));

    for (int k = 1; k < 12; ++k) {
        Rat e(k, 12);
        Box in = make_correlated_nl(e);
        CHECK(apply_wiring(d, {in, in}) == make_correlated_nl(2 * e - e * e));
    }
}

TEST_CASE("distillation on the section: four-term decomposition and final correlators") {
    Wiring d = distillation_wiring();
    Box pr = make_extremal_nl(0, 0, 0);
    Box nl011 = make_extremal_nl(0, 1, 1);
    Box ones = make_local_deterministic(0, 1, 0, 1);
    Box mixed = make_maximally_mixed();
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; i + j <= 5; ++j) {
            Rat e(i, 5), g(j, 5);
            Box in = make_section_box(e, g);
            Box out = apply_wiring(d, {in, in});

            Rat w_pr = e * (3 * e + 7 * g + 1) / 4;
            Rat w_nl = e * (1 - e - g) / 4;
            Rat w_loc = g * g;
            Rat w_mix = (1 - e - g) * (1 + e / 2 + g);
            CHECK(w_pr + w_nl + w_loc + w_mix == 1);
            CHECK(out == mix({{w_pr, pr}, {w_nl, nl011}, {w_loc, ones}, {w_mix, mixed}}));

            Correlators c = correlators(out);
            Rat s = e + g;
            CHECK(c.E[0][0] == s * s);
            CHECK(c.E[1][0] == s * s);
            CHECK(c.E[0][1] == (s * s + e * g + g * g + e) / 2);
            CHECK(c.E[1][1] == -(s * s + e * g - 3 * g * g + e) / 2);
        }
}

TEST_CASE("AND wiring equals its closed form") {
    testing::Rng rng(29);
    for (int n = 2; n <= 3; ++n) {
        Wiring w = and_wiring(n);
        for (int i = 0; i < 60; ++i) {
            Box b = testing::random_box(rng);
            CHECK(apply_wiring(w, std::vector<Box>(n, b)) == and_closed_form(b, n));
        }
    }
    Box b = testing::random_box(rng);
    CHECK(and_closed_form(b, 1) == b);
}

TEST_CASE("single-box AND behaves like the identity wiring") {
    testing::Rng rng(97);
    Wiring one = and_wiring(1);
    for (int i = 0; i < 20; ++i) {
        Box b = testing::random_box(rng);
        CHECK(apply_wiring(one, {b}) == b);
    }
}

TEST_CASE("AND of local deterministic boxes is local deterministic") {
    testing::Rng rng(31);
    Wiring w = and_wiring(2);
    for (int i = 0; i < 20; ++i) {
        Box out = apply_wiring(
            w, {testing::random_local_vertex(rng), testing::random_local_vertex(rng)});
        for (const Rat& v : out.p) CHECK((v == 0 || v == 1));
        CHECK(validate(out).ok());
    }
}

TEST_CASE("AND wiring on isotropic 4/5 boxes violates the tilted inequality at q=6") {
    Box iso = make_isotropic(Rat(4, 5));
    Box out = apply_wiring(and_wiring(2), {iso, iso});
    CHECK(facet_q(Rat(4, 5)) == 6);
    CHECK(tilted_ch(Rat(6)).eval(out) < 0);
}

TEST_CASE("non-signaling preservation on random wirings") {
    testing::Rng rng(37);
    int checked = 0;
    for (int n = 1; n <= 3; ++n)
        for (int i = 0; i < (n == 3 ? 40 : 80); ++i) {
            Wiring w = testing::random_wiring(n, rng);
            std::vector<Box> boxes;
            for (int k = 0; k < n; ++k) boxes.push_back(testing::random_box(rng));
            Box out = apply_wiring(w, boxes);
            CHECK(validate(out).ok());
            ++checked;
        }
    CHECK(checked == 200);
}

TEST_CASE("apply_wiring is affine in each slot") {
    testing::Rng rng(41);
    for (int i = 0; i < 20; ++i) {
        Wiring w = testing::random_wiring(2, rng);
        Box b1 = testing::random_box(rng), b2 = testing::random_box(rng);
        Box rest = testing::random_box(rng);
        Rat lam(3, 7);
        Box mixed = mix({{lam, b1}, {1 - lam, b2}});
        for (int slot = 0; slot < 2; ++slot) {
            auto fill = [&](const Box& b) {
                return slot == 0 ? std::vector<Box>{b, rest} : std::vector<Box>{rest, b};
            };
            Box lhs = apply_wiring(w, fill(mixed));
            Box a = apply_wiring(w, fill(b1));
            Box b = apply_wiring(w, fill(b2));
            CHECK(lhs == mix({{lam, a}, {1 - lam, b}}));
        }
    }
}

TEST_CASE("order independence when inputs ignore observed outputs") {
    testing::Rng rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        // one assignment: fixed per-box input bits (given x), output table over
        // canonical box outputs; realized under both usage orders
        std::uniform_int_distribution<int> bit(0, 1);
        int in0[2], in1[2];
        for (int x = 0; x < 2; ++x) {
            in0[x] = bit(rng);
            in1[x] = bit(rng);
        }
        TruthTable g(3);
        for (std::uint32_t i = 0; i < 8; ++i) g.set(i, bit(rng));

        auto build = [&](bool reversed) {
            PartyStrategy s;
            s.order = reversed ? std::vector<int>{1, 0} : std::vector<int>{0, 1};
            TruthTable f0(1), f1(2);
            for (int x = 0; x < 2; ++x) {
                f0.set(x, reversed ? in1[x] : in0[x]);
                for (int o = 0; o < 2; ++o)
                    f1.set(x | (o << 1), reversed ? in0[x] : in1[x]);
            }
            TruthTable go(3);
            for (int x = 0; x < 2; ++x)
                for (int s0 = 0; s0 < 2; ++s0)
                    for (int s1 = 0; s1 < 2; ++s1) {
                        int o0 = reversed ? s1 : s0, o1 = reversed ? s0 : s1;
                        go.set(x | (s0 << 1) | (s1 << 2), g.eval(x | (o0 << 1) | (o1 << 2)));
                    }
            s.input_fn = {f0, f1};
            s.output_fn = go;
            return s;
        };

        Wiring w1{2, build(false), build(false)};
        Wiring w2{2, build(true), build(true)};
        // both realizations induce the same response, hence the same box
        CHECK(party_response(w1.alice) == party_response(w2.alice));
        Box b1 = testing::random_box(rng), b2 = testing::random_box(rng);
        CHECK(apply_wiring(w1, {b1, b2}) == apply_wiring(w2, {b1, b2}));
    }
}

TEST_CASE("conjugation: identity relabelings leave behavior unchanged") {
    testing::Rng rng(47);
    Wiring d = distillation_wiring();
    Wiring c = conjugate_wiring(Relabeling::identity(), Relabeling::identity(), d);
    for (int i = 0; i < 10; ++i) {
        Box b1 = testing::random_box(rng), b2 = testing::random_box(rng);
        CHECK(apply_wiring(c, {b1, b2}) == apply_wiring(d, {b1, b2}));
    }
    CHECK(c.n == d.n);
}

TEST_CASE("conjugation satisfies its defining equation") {
    testing::Rng rng(53);
    for (int trial = 0; trial < 30; ++trial) {
        Wiring w = testing::random_wiring(2, rng);
        Relabeling gi = testing::random_relabeling(rng);
        Relabeling go = testing::random_relabeling(rng);
        if (gi.swap_parties != go.swap_parties) {
            CHECK_THROWS_AS(conjugate_wiring(gi, go, w), ParameterError);
            go.swap_parties = gi.swap_parties;
        }
        Wiring c = conjugate_wiring(gi, go, w);
        Box b1 = testing::random_box(rng), b2 = testing::random_box(rng);
        Box lhs = apply_wiring(c, {b1, b2});
        Box rhs = apply_relabeling(
            go, apply_wiring(w, {apply_relabeling(inverse(gi), b1),
                                 apply_relabeling(inverse(gi), b2)}));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("conjugation of a two-box wiring is again a two-box wiring, round-trippable") {
    testing::Rng rng(59);
    Wiring d = distillation_wiring();
    for (int i = 0; i < 20; ++i) {
        Relabeling g = testing::random_relabeling(rng);
        Wiring c = conjugate_wiring(g, g, d);
        CHECK(c.n == 2);
        Wiring back = conjugate_wiring(inverse(g), inverse(g), c);
        Box b1 = testing::random_box(rng), b2 = testing::random_box(rng);
        CHECK(apply_wiring(back, {b1, b2}) == apply_wiring(d, {b1, b2}));
    }
}
