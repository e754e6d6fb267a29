#include "nsbox/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "nsbox/polytope.hpp"

namespace nsbox {

Section2D section_correlated() {
    return {make_maximally_mixed(), make_extremal_nl(0, 0, 0),
            make_local_deterministic(0, 1, 0, 1), "correlated"};
}

Section2D section_and_guess() {
    return {make_maximally_mixed(), make_extremal_nl(0, 0, 0),
            make_local_deterministic(0, 0, 0, 0), "and-guess"};
}

MapStep distillation_step() { return {distillation_wiring(), 2}; }

MapStep and_step(int n) { return {and_wiring(n), n}; }

namespace {

using DTable = std::array<double, 16>;

DTable to_doubles(const Box& b) {
    DTable t;
    for (int i = 0; i < 16; ++i) t[i] = to_double(b.p[i]);
    return t;
}

// 8 correlator coordinates of a table.
std::array<double, 8> coords(const DTable& t) {
    std::array<double, 8> c{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double v = t[Box::index(a, b, x, y)];
                    c[x * 2 + y] += (a ^ b) ? -v : v;
                    c[4 + x] += (a ? -v : v) / 2;
                    c[6 + y] += (b ? -v : v) / 2;
                }
    return c;
}

struct Frame {
    DTable b0, b1, b2;
    std::array<double, 8> c0, d1, d2;  // origin and direction coordinates
    double g11, g12, g22;              // Gram matrix of the directions

    explicit Frame(const Section2D& s)
        : b0(to_doubles(s.b0)), b1(to_doubles(s.b1)), b2(to_doubles(s.b2)) {
        c0 = coords(b0);
        auto c1 = coords(b1), c2 = coords(b2);
        for (int k = 0; k < 8; ++k) {
            d1[k] = c1[k] - c0[k];
            d2[k] = c2[k] - c0[k];
        }
        g11 = g12 = g22 = 0;
        for (int k = 0; k < 8; ++k) {
            g11 += d1[k] * d1[k];
            g12 += d1[k] * d2[k];
            g22 += d2[k] * d2[k];
        }
        double det = g11 * g22 - g12 * g12;
        if (std::abs(det) < 1e-12)
            throw ParameterError("section frame is affinely dependent");
    }

    DTable point(double u, double v) const {
        DTable t;
        for (int i = 0; i < 16; ++i)
            t[i] = (1 - u - v) * b0[i] + u * b1[i] + v * b2[i];
        return t;
    }

    // Least-squares projection of a table onto the section, in correlator
    // coordinates; returns (u, v, residual norm).
    void project(const DTable& t, double& u, double& v, double& residual) const {
        auto c = coords(t);
        double r1 = 0, r2 = 0;
        for (int k = 0; k < 8; ++k) {
            r1 += d1[k] * (c[k] - c0[k]);
            r2 += d2[k] * (c[k] - c0[k]);
        }
        double det = g11 * g22 - g12 * g12;
        u = (g22 * r1 - g12 * r2) / det;
        v = (g11 * r2 - g12 * r1) / det;
        double res2 = 0;
        for (int k = 0; k < 8; ++k) {
            double diff = c[k] - c0[k] - u * d1[k] - v * d2[k];
            res2 += diff * diff;
        }
        residual = std::sqrt(std::max(0.0, res2));
    }
};

DTable apply_step(const MapStep& step, const DTable& t) {
    std::vector<DTable> copies(step.copies, t);
    return apply_wiring_tables<double>(step.protocol, copies);
}

bool in_valid_region(double u, double v) {
    const double tol = 1e-9;
    return u >= -tol && v >= -tol && u + v <= 1 + tol;
}

}  // namespace

Trajectory iterate_map(const MapStep& step, const Section2D& s, double u0, double v0,
                       int k) {
    if (!in_valid_region(u0, v0)) throw ParameterError("start point outside the section");
    Frame f(s);
    Trajectory out;
    out.points.push_back({u0, v0, 0.0});
    double u = u0, v = v0;
    for (int i = 0; i < k; ++i) {
        DTable img = apply_step(step, f.point(u, v));
        double residual;
        f.project(img, u, v, residual);
        out.points.push_back({u, v, residual});
        if (!in_valid_region(u, v)) {
            out.exited = true;
            break;
        }
    }
    return out;
}

std::vector<FixedPoint1D> fixed_points_1d(const std::function<double(double)>& f,
                                          int scan_points) {
    if (scan_points < 2) throw ParameterError("need at least 2 scan points");
    const double root_tol = 1e-12;
    const double h = 1e-5;
    std::vector<double> roots;
    auto g = [&](double x) { return f(x) - x; };

    double prev = g(0.0);
    if (std::abs(prev) <= root_tol) roots.push_back(0.0);
    for (int i = 1; i <= scan_points; ++i) {
        double x = double(i) / scan_points;
        double cur = g(x);
        if (std::abs(cur) <= root_tol) {
            roots.push_back(x);
        } else if (prev < -root_tol ? cur > root_tol : (prev > root_tol && cur < -root_tol)) {
            double lo = double(i - 1) / scan_points, hi = x;
            double glo = g(lo);
            for (int it = 0; it < 100; ++it) {
                double mid = (lo + hi) / 2, gm = g(mid);
                if ((glo < 0) == (gm < 0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back((lo + hi) / 2);
        }
        prev = cur;
    }
    // merge near-duplicates from bisection landing next to a sampled root
    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (double r : roots)
        if (merged.empty() || r - merged.back() > 1e-7) merged.push_back(r);

    std::vector<FixedPoint1D> out;
    for (double r : merged) {
        FixedPoint1D fp;
        fp.x = r;
        fp.derivative = (f(r + h) - f(r - h)) / (2 * h);
        double mag = std::abs(fp.derivative);
        fp.classification = mag < 1 - 1e-6 ? "attracting"
                            : mag > 1 + 1e-6 ? "repelling"
                                             : "marginal";
        out.push_back(fp);
    }
    return out;
}

std::vector<FieldNode> vector_field(const MapStep& step, const Section2D& s, int grid,
                                    int workers) {
    if (grid < 1) throw ParameterError("grid must be >= 1");
    if (workers < 1) workers = 1;
    Frame f(s);
    std::vector<std::pair<int, int>> nodes;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j + i <= grid; ++j) nodes.emplace_back(i, j);
    std::vector<FieldNode> out(nodes.size());

    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            double u = double(nodes[k].first) / grid;
            double v = double(nodes[k].second) / grid;
            DTable img = apply_step(step, f.point(u, v));
            double nu, nv, residual;
            f.project(img, nu, nv, residual);
            out[k] = {u, v, nu - u, nv - v, residual};
        }
    };
    if (workers == 1) {
        run(0, nodes.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (nodes.size() + workers - 1) / workers;
        for (int t = 0; t < workers; ++t) {
            std::size_t lo = t * chunk, hi = std::min(nodes.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace nsbox
