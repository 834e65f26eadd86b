// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "graphlens/gnn.hpp"
#include "graphlens/graph.hpp"
#include "graphlens/matcher.hpp"

namespace graphlens {

/// Per-embedding features predicting whether substructure-only and full-graph
/// classification of the target agree. connectivity[i] is the fraction of the
/// image node's host neighbors lying outside the embedding image;
/// meanContribution[i][j] is the mean of input feature j over those outside
/// neighbors (zero when there are none).
struct EquivSample {
    std::vector<double> connectivity;                  // n entries in [0, 1]
    std::vector<std::vector<double>> meanContribution;  // n x d
    bool equivalent = false;
};

/// Flat feature order: [c_0 .. c_{n-1}, xbar_{0,0} .. xbar_{n-1,d-1}].
std::vector<double> flattenEquivFeatures(const EquivSample& s);

EquivSample extractEquivFeatures(const GnnModel& m, const Graph& g, const Pattern& p,
                                 const Embedding& emb);

struct TreeNode {
    bool leaf = true;
    int feature = -1;
    double threshold = 0.0;
    double equivalentFraction = 0.0;
    std::size_t sampleCount = 0;
    std::unique_ptr<TreeNode> left;   // feature <= threshold
    std::unique_ptr<TreeNode> right;  // feature > threshold
};

struct DecisionTree {
    std::unique_ptr<TreeNode> root;
    std::size_t featureCount = 0;

    /// Fraction of equivalent samples at the leaf this point reaches.
    double predict(std::span<const double> x) const;
};

/// CART with Gini impurity: greedy binary splits at midpoints between
/// consecutive distinct sorted values, stopping at maxDepth, minLeaf, or
/// purity. Ties between splits go to the lowest feature index, then the
/// lowest threshold.
DecisionTree fitTree(const std::vector<EquivSample>& samples, int maxDepth, int minLeaf);

struct ThresholdComparison {
    int feature = 0;
    bool greater = false;  // false: feature <= threshold, true: feature > threshold
    double threshold = 0.0;

    bool satisfied(std::span<const double> x) const {
        return greater ? x[static_cast<std::size_t>(feature)] > threshold
                       : x[static_cast<std::size_t>(feature)] <= threshold;
    }
};

using PathPredicate = std::vector<ThresholdComparison>;

bool predicateSatisfied(const PathPredicate& pred, std::span<const double> x);

/// One conjunction per root-to-leaf path whose leaf's equivalent fraction is
/// at least purityThreshold (0.5 < purityThreshold <= 1). A root-only tree
/// yields a single empty conjunction.
std::vector<PathPredicate> extractPathPredicates(const DecisionTree& t,
                                                 double purityThreshold);

/// Render a conjunction like "c_1 <= 0.125 && xbar_{0,1} > 0.3". Feature
/// indices below nodeCount are connectivity ratios.
std::string renderPredicate(const PathPredicate& pred, int nodeCount, int featureWidth);

std::string serializeTree(const DecisionTree& t);
DecisionTree parseTree(const std::string& jsonText);

std::string serializePredicates(const std::vector<PathPredicate>& preds);
std::vector<PathPredicate> parsePredicates(const std::string& jsonText);

}  // namespace graphlens
