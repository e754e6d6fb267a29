#pragma once

#include <vector>

#include "nsbox/rational.hpp"

namespace nsbox {

// Decides { lambda >= 0 : sum_j lambda_j col_j = rhs } by phase-1 simplex
// over exact rationals with Bland's rule (always terminates, no tolerances).
// Infeasibility comes with a Farkas vector y: y.col_j <= 0 for every column
// and y.rhs > 0, verified before returning.
struct LpFeasibility {
    bool feasible = false;
    std::vector<Rat> weights;  // per column, when feasible
    std::vector<Rat> farkas;   // per row, when infeasible
};

LpFeasibility solve_equality_feasibility(const std::vector<std::vector<Rat>>& cols,
                                         const std::vector<Rat>& rhs);

}  // namespace nsbox
