// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "graphlens/ffnn.hpp"
#include "graphlens/gnn.hpp"
#include "graphlens/matcher.hpp"

namespace graphlens {

/// Map from (pattern node, feature index) to flat FFNN input index:
/// flat = node * featureWidth + feature, nodes in ascending pattern id order.
struct InputLayout {
    std::vector<std::pair<int, int>> slots;
    int featureWidth = 0;

    int flatIndex(int node, int feature) const { return node * featureWidth + feature; }
    int width() const { return static_cast<int>(slots.size()); }
};

struct UnrollResult {
    Ffnn ffnn;
    InputLayout layout;
};

/// Lower the GNN restricted to the pattern's topology into a feed-forward
/// network. Layer l of the result is the block matrix with block (v, u) =
/// W_l / (deg(v) + 1) for u in N(v) + {v} and zero otherwise; after the last
/// layer only the root's block row is kept, so the output width is the class
/// count. For every feature assignment X the FFNN on flatten(X) equals
/// forward() at the root of the pattern carrying X.
UnrollResult unroll(const GnnModel& m, const Pattern& p);

/// Flatten a host graph's features along an embedding into the FFNN input
/// order (pattern node i, feature j) -> x[i*d + j] = host features of the
/// image of i.
std::vector<double> flattenEmbeddingFeatures(const Graph& host, const Embedding& emb,
                                             const InputLayout& layout);

std::string serializeUnrolled(const UnrollResult& u);
UnrollResult parseUnrolled(const std::string& jsonText);

}  // namespace graphlens
