#include "nsbox/lp.hpp"

namespace nsbox {

LpFeasibility solve_equality_feasibility(const std::vector<std::vector<Rat>>& cols,
                                         const std::vector<Rat>& rhs) {
    const int m = int(rhs.size());
    const int n = int(cols.size());
    for (const auto& c : cols)
        if (int(c.size()) != m) throw Error("lp: column length mismatch");

    // Rows flipped so the right-hand side is nonnegative; artificial basis.
    std::vector<int> sign(m, 1);
    // tableau[i]: n structural columns, m artificial columns, rhs.
    std::vector<std::vector<Rat>> t(m, std::vector<Rat>(n + m + 1));
    for (int i = 0; i < m; ++i) {
        sign[i] = rhs[i] < 0 ? -1 : 1;
        for (int j = 0; j < n; ++j) t[i][j] = sign[i] * cols[j][i];
        t[i][n + i] = 1;
        t[i][n + m] = sign[i] * rhs[i];
    }
    // Negated reduced costs of the phase-1 objective (minimize the artificial
    // sum): positive entry = improving column. For the initial all-artificial
    // basis that is the plain row sum on structural columns, zero on
    // artificials, and the current objective value on the rhs.
    std::vector<Rat> obj(n + m + 1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n + m; ++j) obj[j] += t[i][j];
    for (int i = 0; i < m; ++i) obj[n + i] = 0;

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    auto pivot = [&](int pr, int pc) {
        Rat pv = t[pr][pc];
        for (int j = 0; j <= n + m; ++j) t[pr][j] /= pv;
        for (int i = 0; i < m; ++i) {
            if (i == pr || t[i][pc] == 0) continue;
            Rat f = t[i][pc];
            for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[pr][j];
        }
        if (obj[pc] != 0) {
            Rat f = obj[pc];
            for (int j = 0; j <= n + m; ++j) obj[j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    };

    for (;;) {
        // Bland: lowest-index improving structural column; artificials never
        // re-enter. Leaving row breaks ratio ties by lowest basis index.
        int pc = -1;
        for (int j = 0; j < n; ++j)
            if (obj[j] > 0) {
                pc = j;
                break;
            }
        if (pc < 0) break;
        int pr = -1;
        for (int i = 0; i < m; ++i) {
            if (t[i][pc] <= 0) continue;
            if (pr < 0) {
                pr = i;
                continue;
            }
            Rat cur = t[i][n + m] / t[i][pc];
            Rat best = t[pr][n + m] / t[pr][pc];
            if (cur < best || (cur == best && basis[i] < basis[pr])) pr = i;
        }
        if (pr < 0) throw Error("lp: phase-1 objective unbounded");
        pivot(pr, pc);
    }

    LpFeasibility res;
    if (obj[n + m] == 0) {
        res.feasible = true;
        res.weights.assign(n, Rat(0));
        for (int i = 0; i < m; ++i)
            if (basis[i] < n) res.weights[basis[i]] = t[i][n + m];
        for (int i = 0; i < m; ++i) {
            Rat acc(0);
            for (int j = 0; j < n; ++j)
                if (res.weights[j] != 0) acc += res.weights[j] * cols[j][i];
            if (acc != rhs[i]) throw Error("lp: feasible point fails verification");
        }
        for (const Rat& wv : res.weights)
            if (wv < 0) throw Error("lp: negative weight in feasible point");
    } else {
        // Dual vector of the flipped system: y'_i = 1 + obj[artificial i]
        // (obj holds negated reduced costs, r_art = 1 - y'). Unflip the row
        // signs to certify against the original data.
        res.farkas.resize(m);
        for (int i = 0; i < m; ++i) res.farkas[i] = sign[i] * (1 + obj[n + i]);
        Rat yc(0);
        for (int i = 0; i < m; ++i) yc += res.farkas[i] * rhs[i];
        if (yc <= 0) throw Error("lp: Farkas certificate fails y.rhs > 0");
        for (int j = 0; j < n; ++j) {
            Rat ya(0);
            for (int i = 0; i < m; ++i) ya += res.farkas[i] * cols[j][i];
            if (ya > 0) throw Error("lp: Farkas certificate fails y.col <= 0");
        }
    }
    return res;
}

}  // namespace nsbox
