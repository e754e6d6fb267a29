#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsbox/wiring.hpp"

namespace nsbox {

// The dynamics module is the only floating-point code in the library: wiring
// protocols become discrete maps on 2D sections of the polytope, and fixed
// points / derivatives / vector fields are computed numerically. Anything
// that feeds a closure claim must be re-checked by the exact modules.

// Affine frame (u,v) -> (1-u-v) B0 + u B1 + v B2. The frame boxes must be
// affinely independent.
struct Section2D {
    Box b0, b1, b2;
    std::string name;
};

// Frame (maximally mixed, PR, all-ones local box): coordinates coincide with
// the (eps, gamma) section parameters. The distillation protocol acts on it.
Section2D section_correlated();

// Same frame with the all-zeros local box as the third direction; a guess of
// a projection in which the AND wiring visibly lifts isotropic points off
// their chord. Not authoritative.
Section2D section_and_guess();

struct MapStep {
    Wiring protocol;
    int copies = 2;  // identical copies fed to the protocol per step
};

MapStep distillation_step();
MapStep and_step(int n = 2);

struct TrajectoryPoint {
    double u = 0, v = 0;
    double residual = 0;  // out-of-section distance in correlator coordinates
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    bool exited = false;  // left the valid region before finishing k steps
};

// k images of (u0,v0) under the step map, least-squares projected back onto
// the section in correlator coordinates; residuals are reported, never
// silently dropped.
Trajectory iterate_map(const MapStep& step, const Section2D& s, double u0, double v0,
                       int k);

struct FixedPoint1D {
    double x = 0;
    double derivative = 0;
    std::string classification;  // "attracting", "repelling", "marginal"
};

// Roots of f(x) = x on [0,1] by dense scan + bisection; derivatives by
// central differences (h = 1e-5). Plateaus of fixed points (e.g. the
// identity map) report every sampled node.
std::vector<FixedPoint1D> fixed_points_1d(const std::function<double(double)>& f,
                                          int scan_points = 1000);

struct FieldNode {
    double u = 0, v = 0;
    double du = 0, dv = 0;
    double residual = 0;
};

// One application of the step map on every grid node of the section's valid
// region (u,v >= 0, u+v <= 1). Deterministic node order for any worker count.
std::vector<FieldNode> vector_field(const MapStep& step, const Section2D& s, int grid,
                                    int workers = 1);

}  // namespace nsbox
