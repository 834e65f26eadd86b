// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphlens/equiv.hpp"
#include "graphlens/ffnn.hpp"
#include "graphlens/gnn.hpp"
#include "graphlens/matcher.hpp"

namespace graphlens {

/// Checkable claim about a GNN: whenever an input graph embeds the pattern at
/// its target (structure), the embedded features lie in the region (inputs),
/// and the embedding's neighborhood features satisfy the equivalence
/// predicate, then the target's logits satisfy the output claim.
struct Property {
    Pattern pattern;
    LinearRegion region;                    // over the pattern's flattened inputs
    PathPredicate equivPredicate;           // over [c_i..., xbar_{i,j}...]
    std::vector<LinearConstraint> claim;    // over the target's logits
};

/// Validates component shapes. When `claim` is empty the default claim is the
/// argmax-dominance of the region's class among `classCount` logits.
Property composeProperty(const Pattern& p, const LinearRegion& region,
                         const PathPredicate& equivPredicate,
                         const std::vector<LinearConstraint>& claim, int classCount);

/// Dominance claim for a class: o_cls > o_k for k below cls (strict because
/// ties break low), o_cls >= o_k for k above.
std::vector<LinearConstraint> dominanceClaim(int cls, int classCount);

struct CheckReport {
    bool applies = false;
    std::optional<bool> holds;       // empty when the property does not apply
    std::optional<Embedding> witness;
};

/// Existential over anchored embeddings, searched in the matcher's
/// deterministic order: the first embedding satisfying structure, region, and
/// equivalence predicate is the witness. `holds` evaluates the claim on the
/// full graph's target logits.
CheckReport checkProperty(const Property& prop, const GnnModel& m, const Graph& g);

std::string serializeProperty(const Property& p);
Property parseProperty(const std::string& jsonText);
std::string serializePropertyList(const std::vector<Property>& ps);
std::vector<Property> parsePropertyList(const std::string& jsonText);

std::string renderCheckReport(const CheckReport& r);

}  // namespace graphlens
