#include "pqmp/lp.hpp"

#include <cmath>
#include <stdexcept>

namespace pqmp {
namespace {

constexpr double kEps = 1e-9;

struct Tableau {
    int rows = 0;
    int cols = 0;  // excluding rhs
    std::vector<std::vector<double>> a;  // rows x (cols + 1)
    std::vector<int> basis;
    std::vector<bool> enterable;

    void pivot(int pr, int pc) {
        const double p = a[pr][pc];
        for (double& v : a[pr]) v /= p;
        for (int i = 0; i < rows; ++i) {
            if (i == pr || std::abs(a[i][pc]) < kEps) continue;
            const double f = a[i][pc];
            for (int j = 0; j <= cols; ++j) a[i][j] -= f * a[pr][j];
        }
        basis[pr] = pc;
    }

    // Minimizes cost . x from the current basic feasible solution.
    // Bland's rule throughout, so termination is guaranteed.
    LpResult::Status run(const std::vector<double>& cost) {
        while (true) {
            // Reduced costs via the basic cost multipliers.
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (!enterable[j]) continue;
                double r = cost[j];
                for (int i = 0; i < rows; ++i) r -= cost[basis[i]] * a[i][j];
                if (r < -kEps) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpResult::Status::Optimal;
            int leave = -1;
            double best = 0.0;
            for (int i = 0; i < rows; ++i) {
                if (a[i][enter] <= kEps) continue;
                const double ratio = a[i][cols] / a[i][enter];
                if (leave < 0 || ratio < best - kEps ||
                    (ratio < best + kEps && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return LpResult::Status::Unbounded;
            pivot(leave, enter);
        }
    }

    double objective(const std::vector<double>& cost) const {
        double v = 0.0;
        for (int i = 0; i < rows; ++i) v += cost[basis[i]] * a[i][cols];
        return v;
    }
};

}  // namespace

LpResult maximize_lp(const std::vector<double>& objective,
                     const std::vector<LpConstraint>& constraints) {
    const int n = static_cast<int>(objective.size());
    const int m = static_cast<int>(constraints.size());

    // Normalized rows with nonnegative right-hand sides.
    std::vector<std::vector<double>> coeff(m);
    std::vector<LpRelation> rel(m);
    std::vector<double> rhs(m);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(constraints[i].coeff.size()) != n) {
            throw std::invalid_argument("lp: constraint width mismatch");
        }
        coeff[i] = constraints[i].coeff;
        rel[i] = constraints[i].rel;
        rhs[i] = constraints[i].rhs;
        if (rhs[i] < 0.0) {
            for (double& c : coeff[i]) c = -c;
            rhs[i] = -rhs[i];
            if (rel[i] == LpRelation::LessEq) {
                rel[i] = LpRelation::GreaterEq;
            } else if (rel[i] == LpRelation::GreaterEq) {
                rel[i] = LpRelation::LessEq;
            }
        }
    }

    int n_extra = 0, n_art = 0;
    for (int i = 0; i < m; ++i) {
        if (rel[i] != LpRelation::Equal) ++n_extra;
        if (rel[i] != LpRelation::LessEq) ++n_art;
    }
    Tableau t;
    t.rows = m;
    t.cols = n + n_extra + n_art;
    t.a.assign(m, std::vector<double>(t.cols + 1, 0.0));
    t.basis.assign(m, -1);
    t.enterable.assign(t.cols, true);

    int next_extra = n;
    int next_art = n + n_extra;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t.a[i][j] = coeff[i][j];
        t.a[i][t.cols] = rhs[i];
        if (rel[i] == LpRelation::LessEq) {
            t.a[i][next_extra] = 1.0;
            t.basis[i] = next_extra++;
        } else {
            if (rel[i] == LpRelation::GreaterEq) t.a[i][next_extra++] = -1.0;
            t.a[i][next_art] = 1.0;
            t.basis[i] = next_art++;
        }
    }

    LpResult res;
    if (n_art > 0) {
        std::vector<double> phase1(t.cols, 0.0);
        for (int j = n + n_extra; j < t.cols; ++j) phase1[j] = 1.0;
        if (t.run(phase1) != LpResult::Status::Optimal || t.objective(phase1) > 1e-7) {
            res.status = LpResult::Status::Infeasible;
            return res;
        }
        // Drive any zero-level artificial out of the basis, then freeze all
        // artificial columns.
        for (int i = 0; i < t.rows; ++i) {
            if (t.basis[i] < n + n_extra) continue;
            int col = -1;
            for (int j = 0; j < n + n_extra; ++j) {
                if (std::abs(t.a[i][j]) > kEps) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) t.pivot(i, col);
        }
        for (int j = n + n_extra; j < t.cols; ++j) t.enterable[j] = false;
    }

    std::vector<double> phase2(t.cols, 0.0);
    for (int j = 0; j < n; ++j) phase2[j] = -objective[j];
    const auto status = t.run(phase2);
    if (status == LpResult::Status::Unbounded) {
        res.status = LpResult::Status::Unbounded;
        return res;
    }

    res.status = LpResult::Status::Optimal;
    res.x.assign(n, 0.0);
    for (int i = 0; i < t.rows; ++i) {
        if (t.basis[i] < n) res.x[t.basis[i]] = t.a[i][t.cols];
    }
    res.objective = 0.0;
    for (int j = 0; j < n; ++j) res.objective += objective[j] * res.x[j];
    return res;
}

}  // namespace pqmp
