// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace graphlens {

namespace {

constexpr double kPivotTol = 1e-9;

// Dense tableau: rows[i] has one entry per variable plus the RHS in the last
// slot. Bland's rule throughout: smallest eligible entering index, leaving
// ties broken by smallest basic variable index.
struct Tableau {
    std::vector<std::vector<double>> rows;
    std::vector<double> cost;  // reduced costs z_j, plus objective in last slot
    std::vector<int> basis;
    std::size_t vars = 0;

    void pivot(std::size_t r, std::size_t j) {
        auto& prow = rows[r];
        const double inv = 1.0 / prow[j];
        for (double& v : prow) v *= inv;
        prow[j] = 1.0;
        auto eliminate = [&](std::vector<double>& row) {
            const double f = row[j];
            if (f == 0.0) return;
            for (std::size_t k = 0; k <= vars; ++k) {
                row[k] -= f * prow[k];
                if (std::abs(row[k]) < 1e-12) row[k] = 0.0;
            }
            row[j] = 0.0;
        };
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r) eliminate(rows[i]);
        eliminate(cost);
        basis[r] = static_cast<int>(j);
    }

    enum class Step { Optimal, Unbounded };

    /// Run simplex to optimality. `allowed(j)` gates entering columns.
    template <class Allowed>
    Step run(Allowed allowed) {
        for (;;) {
            std::size_t enter = vars;
            for (std::size_t j = 0; j < vars; ++j)
                if (allowed(j) && cost[j] < -kPivotTol) {
                    enter = j;
                    break;  // Bland: smallest index
                }
            if (enter == vars) return Step::Optimal;

            std::size_t leave = rows.size();
            double bestRatio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][enter] <= kPivotTol) continue;
                const double ratio = rows[i][vars] / rows[i][enter];
                if (ratio < bestRatio - kPivotTol ||
                    (ratio < bestRatio + kPivotTol &&
                     (leave == rows.size() || basis[i] < basis[leave]))) {
                    bestRatio = ratio;
                    leave = i;
                }
            }
            if (leave == rows.size()) return Step::Unbounded;
            pivot(leave, enter);
        }
    }

    void setCosts(const std::vector<double>& objective) {
        cost.assign(vars + 1, 0.0);
        for (std::size_t j = 0; j < vars; ++j) cost[j] = -objective[j];
        // add c_B * row_i so that reduced costs of basic columns are zero
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double cb = objective[static_cast<std::size_t>(basis[i])];
            if (cb == 0.0) continue;
            for (std::size_t k = 0; k <= vars; ++k) cost[k] += cb * rows[i][k];
        }
    }
};

}  // namespace

LpSolution solveLp(const LpProblem& lp) {
    const std::size_t m = lp.a.rows();
    const std::size_t n = lp.a.cols();
    if (lp.b.size() != m || lp.c.size() != n)
        throw std::invalid_argument("solveLp: inconsistent problem dimensions");

    // x free -> x = u - w with u, w >= 0
    const std::size_t structural = 2 * n;
    const std::size_t slackBase = structural;
    std::size_t artBase = slackBase + m;

    std::vector<int> artificialOfRow(m, -1);
    std::size_t artCount = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (lp.b[i] < 0.0) artificialOfRow[i] = static_cast<int>(artCount++);

    Tableau t;
    t.vars = structural + m + artCount;
    t.rows.assign(m, std::vector<double>(t.vars + 1, 0.0));
    t.basis.assign(m, 0);

    for (std::size_t i = 0; i < m; ++i) {
        const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = sign * lp.a(i, j);
            t.rows[i][j] = a;
            t.rows[i][n + j] = -a;
        }
        t.rows[i][slackBase + i] = sign;
        t.rows[i][t.vars] = sign * lp.b[i];
        if (artificialOfRow[i] >= 0) {
            const std::size_t aj = artBase + static_cast<std::size_t>(artificialOfRow[i]);
            t.rows[i][aj] = 1.0;
            t.basis[i] = static_cast<int>(aj);
        } else {
            t.basis[i] = static_cast<int>(slackBase + i);
        }
    }

    LpSolution sol;

    if (artCount > 0) {
        std::vector<double> phase1(t.vars, 0.0);
        for (std::size_t k = 0; k < artCount; ++k) phase1[artBase + k] = -1.0;
        t.setCosts(phase1);
        t.run([](std::size_t) { return true; });  // bounded above by 0
        if (t.cost[t.vars] < -kPivotTol) {
            sol.status = LpSolution::Status::Infeasible;
            return sol;
        }
        // pivot artificials out of the basis where possible
        for (std::size_t i = 0; i < m; ++i) {
            if (static_cast<std::size_t>(t.basis[i]) < artBase) continue;
            for (std::size_t j = 0; j < artBase; ++j)
                if (std::abs(t.rows[i][j]) > kPivotTol) {
                    t.pivot(i, j);
                    break;
                }
            // an all-zero row leaves its artificial basic at zero; such a row
            // is redundant and never changes again
        }
    }

    std::vector<double> phase2(t.vars, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        phase2[j] = lp.c[j];
        phase2[n + j] = -lp.c[j];
    }
    t.setCosts(phase2);
    const auto step = t.run([&](std::size_t j) { return j < artBase; });
    if (step == Tableau::Step::Unbounded) {
        sol.status = LpSolution::Status::Unbounded;
        return sol;
    }

    std::vector<double> full(t.vars, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        full[static_cast<std::size_t>(t.basis[i])] = t.rows[i][t.vars];

    sol.status = LpSolution::Status::Optimal;
    sol.x.resize(n);
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = full[j] - full[n + j];
        sol.value += lp.c[j] * sol.x[j];
    }
    return sol;
}

}  // namespace graphlens
