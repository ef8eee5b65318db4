#pragma once

#include <vector>

namespace pqmp {

enum class LpRelation { LessEq, GreaterEq, Equal };

struct LpConstraint {
    std::vector<double> coeff;
    LpRelation rel = LpRelation::LessEq;
    double rhs = 0.0;
};

struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// Maximizes objective . x subject to the constraints and x >= 0, via a dense
/// two-phase simplex with Bland's rule. Intended for small problems (the
/// per-intersection phase-allocation programs have ~15 variables).
LpResult maximize_lp(const std::vector<double>& objective,
                     const std::vector<LpConstraint>& constraints);

}  // namespace pqmp
