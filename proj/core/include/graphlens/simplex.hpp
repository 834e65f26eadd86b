// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "graphlens/matrix.hpp"

namespace graphlens {

/// maximize c.x subject to A x <= b, x free.
struct LpProblem {
    Matrix a;
    std::vector<double> b;
    std::vector<double> c;
};

struct LpSolution {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Optimal;
    std::vector<double> x;
    double value = 0.0;
};

/// Two-phase primal simplex with Bland's rule (pivot tolerance 1e-9). Free
/// variables are split into differences of non-negatives internally. Sized
/// for the small polytopes this library produces, not for production LP work.
LpSolution solveLp(const LpProblem& lp);

}  // namespace graphlens
