#include "nsbox/box.hpp"

#include <sstream>

namespace nsbox {

Rat parse_rational(const std::string& s) {
    auto bad = [&]() { throw ParseError("not a rational 'num/den': '" + s + "'"); };
    if (s.empty()) bad();
    std::size_t slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto digits = [&](const std::string& t, bool sign_ok) {
        if (t.empty()) bad();
        std::size_t i = 0;
        if (sign_ok && (t[0] == '+' || t[0] == '-')) i = 1;
        if (i == t.size()) bad();
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') bad();
    };
    digits(num, true);
    digits(den, false);
    Int d(den);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rat(Int(num)) / Rat(d);
}

std::string rat_string(const Rat& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

bool box_less(const Box& lhs, const Box& rhs) {
    for (int i = 0; i < 16; ++i) {
        if (lhs.p[i] < rhs.p[i]) return true;
        if (rhs.p[i] < lhs.p[i]) return false;
    }
    return false;
}

bool Correlators::operator==(const Correlators& o) const {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            if (E[x][y] != o.E[x][y]) return false;
    return ma[0] == o.ma[0] && ma[1] == o.ma[1] && mb[0] == o.mb[0] && mb[1] == o.mb[1];
}

static void check_bit(int v, const char* name) {
    if (v != 0 && v != 1) throw ParameterError(std::string(name) + " must be 0 or 1");
}

Box make_local_deterministic(int mu, int nu, int sigma, int tau) {
    check_bit(mu, "mu");
    check_bit(nu, "nu");
    check_bit(sigma, "sigma");
    check_bit(tau, "tau");
    Box b;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            b.at((mu & x) ^ nu, (sigma & y) ^ tau, x, y) = 1;
    return b;
}

Box make_extremal_nl(int mu, int nu, int sigma) {
    check_bit(mu, "mu");
    check_bit(nu, "nu");
    check_bit(sigma, "sigma");
    Box b;
    Rat half(1, 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int rhs = (x & y) ^ (mu & x) ^ (nu & y) ^ sigma;
            for (int a = 0; a < 2; ++a) b.at(a, a ^ rhs, x, y) = half;
        }
    return b;
}

Box make_maximally_mixed() {
    Box b;
    b.p.fill(Rat(1, 4));
    return b;
}

Box mix(const std::vector<std::pair<Rat, Box>>& terms) {
    Rat total(0);
    for (const auto& [w, box] : terms) {
        if (w < 0) throw InvalidMixtureError("negative mixture weight " + rat_string(w));
        total += w;
    }
    if (total != 1) throw InvalidMixtureError("mixture weights sum to " + rat_string(total));
    Box out;
    for (const auto& [w, box] : terms)
        for (int i = 0; i < 16; ++i) out.p[i] += w * box.p[i];
    return out;
}

Box make_correlated_nl(const Rat& eps) {
    if (eps < 0 || eps > 1) throw InvalidMixtureError("eps outside [0,1]");
    return mix({{eps, make_extremal_nl(0, 0, 0)},
                {1 - eps, make_local_deterministic(0, 1, 0, 1)}});
}

Box make_isotropic(const Rat& eps) {
    if (eps < 0 || eps > 1) throw InvalidMixtureError("eps outside [0,1]");
    return mix({{eps, make_extremal_nl(0, 0, 0)}, {1 - eps, make_maximally_mixed()}});
}

Box make_section_box(const Rat& eps, const Rat& gamma) {
    if (eps < 0 || gamma < 0 || eps + gamma > 1)
        throw InvalidMixtureError("(eps,gamma) outside the section simplex");
    return mix({{eps, make_extremal_nl(0, 0, 0)},
                {gamma, make_local_deterministic(0, 1, 0, 1)},
                {1 - eps - gamma, make_maximally_mixed()}});
}

Box make_edge_box(int mu, int nu, int sigma, int alpha, int beta, int gamma,
                  const Rat& eps) {
    check_bit(alpha, "alpha");
    check_bit(beta, "beta");
    check_bit(gamma, "gamma");
    if (eps < 0 || eps > 1) throw ParameterError("eps outside [0,1]");
    int delta = ((alpha ^ mu) & (gamma ^ nu)) ^ beta ^ sigma;
    return mix({{eps, make_extremal_nl(mu, nu, sigma)},
                {1 - eps, make_local_deterministic(alpha, beta, gamma, delta)}});
}

Correlators correlators(const Box& b) {
    Correlators c;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Rat e(0);
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) {
                    const Rat& v = b.at(a, bb, x, y);
                    e += ((a ^ bb) ? -v : v);
                }
            c.E[x][y] = e;
        }
    // Marginals averaged over the other party's input so the map stays affine
    // on arbitrary tables; on non-signaling boxes both slices agree.
    for (int x = 0; x < 2; ++x) {
        Rat m(0);
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) {
                    const Rat& v = b.at(a, bb, x, y);
                    m += (a ? -v : v);
                }
        c.ma[x] = m / 2;
    }
    for (int y = 0; y < 2; ++y) {
        Rat m(0);
        for (int x = 0; x < 2; ++x)
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) {
                    const Rat& v = b.at(a, bb, x, y);
                    m += (bb ? -v : v);
                }
        c.mb[y] = m / 2;
    }
    return c;
}

Box box_from_correlators(const Correlators& c) {
    Box b;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb) {
                    Rat v = 1 + (a ? -c.ma[x] : c.ma[x]) + (bb ? -c.mb[y] : c.mb[y]) +
                            ((a ^ bb) ? -c.E[x][y] : c.E[x][y]);
                    v /= 4;
                    if (v < 0)
                        throw OutsidePolytopeError(
                            "correlators give negative entry p(" + std::to_string(a) +
                            std::to_string(bb) + "|" + std::to_string(x) + std::to_string(y) +
                            ") = " + rat_string(v));
                    b.at(a, bb, x, y) = v;
                }
    return b;
}

Rat chsh_value(const Box& b, int sym) {
    if (sym < 0 || sym > 7) throw ParameterError("CHSH symmetry index outside 0..7");
    int mu = (sym >> 2) & 1, nu = (sym >> 1) & 1, sigma = sym & 1;
    Correlators c = correlators(b);
    Rat s(0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int sign = (x & y) ^ (mu & x) ^ (nu & y) ^ sigma;
            s += sign ? -c.E[x][y] : c.E[x][y];
        }
    return s;
}

Rat ch_value(const Box& b) {
    return 1 - b.at(1, 1, 0, 0) - b.at(0, 0, 1, 0) - b.at(0, 0, 0, 1) + b.at(0, 0, 1, 1);
}

ValidationReport validate(const Box& b) {
    ValidationReport r;
    r.normalized = true;
    r.nonnegative = true;
    r.nonsignaling = true;
    for (int x = 0; x < 2 && r.normalized; ++x)
        for (int y = 0; y < 2 && r.normalized; ++y) {
            Rat s = b.at(0, 0, x, y) + b.at(0, 1, x, y) + b.at(1, 0, x, y) + b.at(1, 1, x, y);
            if (s != 1) {
                r.normalized = false;
                r.detail = "cells (x=" + std::to_string(x) + ",y=" + std::to_string(y) +
                           ") sum to " + rat_string(s);
            }
        }
    for (int i = 0; i < 16 && r.nonnegative; ++i)
        if (b.p[i] < 0) {
            r.nonnegative = false;
            if (r.detail.empty()) r.detail = "entry " + std::to_string(i) + " is negative";
        }
    for (int a = 0; a < 2 && r.nonsignaling; ++a)
        for (int x = 0; x < 2 && r.nonsignaling; ++x) {
            Rat m0 = b.at(a, 0, x, 0) + b.at(a, 1, x, 0);
            Rat m1 = b.at(a, 0, x, 1) + b.at(a, 1, x, 1);
            if (m0 != m1) {
                r.nonsignaling = false;
                if (r.detail.empty())
                    r.detail = "Alice marginal (a=" + std::to_string(a) +
                               ",x=" + std::to_string(x) + ") depends on y";
            }
        }
    for (int bb = 0; bb < 2 && r.nonsignaling; ++bb)
        for (int y = 0; y < 2 && r.nonsignaling; ++y) {
            Rat m0 = b.at(0, bb, 0, y) + b.at(1, bb, 0, y);
            Rat m1 = b.at(0, bb, 1, y) + b.at(1, bb, 1, y);
            if (m0 != m1) {
                r.nonsignaling = false;
                if (r.detail.empty())
                    r.detail = "Bob marginal (b=" + std::to_string(bb) +
                               ",y=" + std::to_string(y) + ") depends on x";
            }
        }
    return r;
}

}  // namespace nsbox
