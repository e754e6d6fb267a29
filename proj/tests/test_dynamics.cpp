#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsbox/dynamics.hpp"
#include "nsbox/serialize.hpp"
#include "support.hpp"

using namespace nsbox;

TEST_CASE("iterating the distillation map on the correlated line follows 2e - e^2") {
    MapStep step = distillation_step();
    Section2D s = section_correlated();
    // start on the correlated edge gamma = 1 - eps
    double e0 = 0.35;
    Trajectory t = iterate_map(step, s, e0, 1 - e0, 6);
    REQUIRE(t.points.size() == 7);
    double e = e0;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        CHECK(t.points[i].u == doctest::Approx(e).epsilon(1e-10));
        CHECK(t.points[i].v == doctest::Approx(1 - e).epsilon(1e-10));
        CHECK(t.points[i].residual < 1e-12);
        e = 2 * e - e * e;
    }
}

TEST_CASE("float iterate agrees with the exact closed-form iterate to 1e-12 per step") {
    MapStep step = distillation_step();
    Section2D s = section_correlated();
    Rat e_exact(1, 10);
    Trajectory t = iterate_map(step, s, 0.1, 0.9, 7);
    for (std::size_t i = 1; i < t.points.size(); ++i) {
        e_exact = 2 * e_exact - e_exact * e_exact;
        CHECK(std::abs(t.points[i].u - to_double(e_exact)) < 1e-12 * double(i));
    }
    // after 7 steps the gap has squared itself down to 0.9^128
    double gap = 1.0 - t.points.back().u;
    CHECK(gap == doctest::Approx(std::pow(0.9, 128)).epsilon(1e-6));
    CHECK(gap < 2e-6);
}

TEST_CASE("PR corner is a fixed point of the distillation map") {
    Trajectory t = iterate_map(distillation_step(), section_correlated(), 1.0, 0.0, 3);
    for (const TrajectoryPoint& p : t.points) {
        CHECK(p.u == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(p.v) < 1e-12);
    }
}

TEST_CASE("fixed points of 2e - e^2: repelling 0, superattracting 1") {
    auto fps = fixed_points_1d([](double e) { return 2 * e - e * e; });
    REQUIRE(fps.size() == 2);
    CHECK(fps[0].x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fps[0].classification == "repelling");
    CHECK(std::abs(fps[0].derivative - 2.0) < 1e-6);
    CHECK(fps[1].x == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fps[1].classification == "attracting");
    CHECK(std::abs(fps[1].derivative) < 1e-6);
    // derivative oracle: 2 - 2e at the roots
    for (const auto& fp : fps) CHECK(std::abs(fp.derivative - (2 - 2 * fp.x)) < 1e-6);
}

TEST_CASE("identity map: every sampled point is a marginal fixed point") {
    auto fps = fixed_points_1d([](double e) { return e; }, 100);
    CHECK(fps.size() == 101);
    for (const auto& fp : fps) {
        CHECK(fp.classification == "marginal");
        CHECK(std::abs(fp.derivative - 1.0) < 1e-9);
    }
}

TEST_CASE("logistic-style interior fixed point is found") {
    // f(e) = 3.2 e (1 - e): fixed points 0 and 1 - 1/3.2 = 0.6875, both known
    auto fps = fixed_points_1d([](double e) { return 3.2 * e * (1 - e); });
    REQUIRE(fps.size() == 2);
    CHECK(fps[1].x == doctest::Approx(0.6875).epsilon(1e-9));
    CHECK(fps[1].classification == "repelling");  // |f'| = |3.2 - 6.4*0.6875| = 1.2
}

TEST_CASE("vector field: local edge has no outward drift, PR is stationary") {
    auto field = vector_field(distillation_step(), section_correlated(), 10);
    for (const FieldNode& n : field) {
        if (n.u == 0.0) {
            // local boxes stay local: no displacement toward the PR direction
            CHECK(std::abs(n.du) < 1e-12);
            CHECK(n.residual < 1e-12);
        }
        if (n.u == 1.0 && n.v == 0.0) {
            CHECK(std::abs(n.du) < 1e-12);
            CHECK(std::abs(n.dv) < 1e-12);
        }
    }
}

TEST_CASE("vector field on the correlated edge points toward larger eps") {
    auto field = vector_field(distillation_step(), section_correlated(), 10);
    for (const FieldNode& n : field)
        if (std::abs(n.u + n.v - 1.0) < 1e-12 && n.u > 0 && n.u < 1) {
            CHECK(n.du > 0);  // distillation moves correlated boxes up the edge
            CHECK(n.residual < 1e-12);
        }
}

TEST_CASE("AND step lifts isotropic nodes above their chord in the guessed section") {
    auto field = vector_field(and_step(2), section_and_guess(), 10);
    bool some_isotropic = false;
    for (const FieldNode& n : field)
        if (n.v == 0.0 && n.u > 0.2 && n.u < 1.0) {
            some_isotropic = true;
            CHECK(n.dv > 0);  // projected image sits above the isotropic line
        }
    CHECK(some_isotropic);
    // the AND image genuinely leaves this section: residuals are visible
    bool residual_seen = false;
    for (const FieldNode& n : field)
        if (n.residual > 1e-3) residual_seen = true;
    CHECK(residual_seen);
}

TEST_CASE("vector field emission is deterministic") {
    auto f1 = vector_field(distillation_step(), section_correlated(), 14, 1);
    auto f2 = vector_field(distillation_step(), section_correlated(), 14, 2);
    CHECK(vector_field_csv(f1) == vector_field_csv(f2));
}

TEST_CASE("trajectory is truncated with an exit flag when the projection leaves") {
    // near the correlated edge the off-section image projects past u+v = 1
    Trajectory t = iterate_map(distillation_step(), section_correlated(), 0.2, 0.75, 10);
    CHECK(t.exited);
    CHECK(t.points.size() < 11);
    double ul = t.points.back().u, vl = t.points.back().v;
    CHECK((ul < -1e-9 || vl < -1e-9 || ul + vl > 1 + 1e-9));

    // the correlated edge itself is invariant: no exit
    Trajectory stay = iterate_map(distillation_step(), section_correlated(), 0.2, 0.8, 10);
    CHECK(!stay.exited);

    CHECK_THROWS_AS(iterate_map(distillation_step(), section_correlated(), 0.9, 0.9, 1),
                    ParameterError);
}

TEST_CASE("frame validation rejects affinely dependent bases") {
    Section2D bad{make_maximally_mixed(), make_maximally_mixed(),
                  make_extremal_nl(0, 0, 0), "degenerate"};
    CHECK_THROWS_AS(vector_field(distillation_step(), bad, 4), ParameterError);
}
