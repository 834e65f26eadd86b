// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <utility>
#include <vector>

#include "graphlens/gnn.hpp"
#include "graphlens/graph.hpp"
#include "graphlens/matcher.hpp"

namespace graphlens {

/// Occlusion score per edge: drop in the target's logit margin when the edge
/// is removed. The margin is measured against the class the full graph
/// predicts, so edges outside the model's message-passing horizon score
/// exactly zero.
std::map<std::pair<int, int>, double> edgeImportance(const GnnModel& m, const Graph& g);

/// Greedy influential substructure around the target: repeatedly keep the
/// highest-scoring edge that keeps the kept subgraph connected and containing
/// the target, up to maxEdges. A target with no incident edges yields a
/// single-node pattern. The pattern's importance is the total score of the
/// kept edges.
Pattern extractSubstructure(const GnnModel& m, const Graph& g, int maxEdges);

/// One pattern per dataset graph, grouped by rooted isomorphism. Emits one
/// representative per group with supportCount = group size and importance =
/// mean of member importances, keeps groups with supportCount >= minSupport,
/// sorted by (supportCount desc, importance desc).
std::vector<Pattern> mineSubstructures(const GnnModel& m, const Dataset& ds, int maxEdges,
                                       int minSupport);

}  // namespace graphlens
