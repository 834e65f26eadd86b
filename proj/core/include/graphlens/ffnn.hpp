// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphlens/gnn.hpp"
#include "graphlens/matrix.hpp"

namespace graphlens {

struct FfnnLayer {
    Matrix weights;
    std::vector<double> bias;
    Activation activation = Activation::None;
};

/// Plain feed-forward network: affine layers with optional ReLU.
struct Ffnn {
    std::vector<FfnnLayer> layers;

    int inputWidth() const;
    int outputWidth() const;
    void validate() const;
};

std::vector<double> ffnnEval(const Ffnn& f, std::span<const double> x);

/// Sign of every ReLU unit's pre-activation for a given input. Units on the
/// boundary (pre-activation exactly 0) count as active. Layers without ReLU
/// contribute an empty sign vector so indices line up with Ffnn::layers.
struct ActivationPattern {
    std::vector<std::vector<bool>> active;

    bool operator==(const ActivationPattern& o) const = default;
};

ActivationPattern activationPattern(const Ffnn& f, std::span<const double> x);

enum class Rel { Ge, Lt };  // a.x + b >= 0  /  a.x + b < 0

struct LinearConstraint {
    std::vector<double> coeffs;
    double offset = 0.0;
    Rel rel = Rel::Ge;

    bool satisfied(std::span<const double> x) const;
    double evaluate(std::span<const double> x) const;  // a.x + b
};

/// Convex input region on which the network's activation pattern (and hence
/// its affine form and argmax class) is constant.
struct LinearRegion {
    std::vector<LinearConstraint> constraints;
    int classIndex = 0;

    bool contains(std::span<const double> x) const;
    /// Distance of the closest constraint boundary, min over |a.x + b|.
    double boundaryMargin(std::span<const double> x) const;
};

/// y = matrix * x + offset
struct AffineMap {
    Matrix matrix;
    std::vector<double> offset;

    std::vector<double> apply(std::span<const double> x) const;
};

/// Input region reproducing the activation pattern of `seed`, as one linear
/// constraint per ReLU unit plus the argmax-dominance constraints of the
/// class predicted at the seed (non-strict against higher class indices,
/// strict against lower ones, matching lowest-index tie-breaking).
/// Pre: activationPattern(f, seed) == pat.
LinearRegion regionOf(const Ffnn& f, const ActivationPattern& pat,
                      std::span<const double> seed);

/// Exact affine form of the network restricted to the pattern's region.
AffineMap symbolicOutput(const Ffnn& f, const ActivationPattern& pat);

struct VerifyResult {
    enum class Kind { Verified, Falsified, Unbounded, InfeasibleRegion };
    Kind kind = Kind::Verified;
    /// Region point violating the failed claim (Falsified only).
    std::vector<double> witness;
    /// Index into the claim list of the first claim that failed
    /// (Falsified / Unbounded).
    std::size_t failedClaim = 0;
    /// Max violation per claim, in claim order, for claims that were solved.
    std::vector<double> claimOptima;
};

/// Check each claim (a linear constraint over the logits) against every point
/// of the region by maximizing its violation with a two-phase primal simplex.
/// Strict constraints are relaxed to closed form for solving; strictness is
/// re-checked on the optimum.
VerifyResult verifyRegion(const LinearRegion& region, const AffineMap& output,
                          const std::vector<LinearConstraint>& claims);

std::string serializeRegion(const LinearRegion& r);
LinearRegion parseRegion(const std::string& jsonText);

std::string serializeFfnn(const Ffnn& f);
Ffnn parseFfnn(const std::string& jsonText);

}  // namespace graphlens
