// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "graphlens/graph.hpp"
#include "graphlens/matcher.hpp"
#include "graphlens/matrix.hpp"

namespace graphlens {

enum class Activation { Relu, None };

struct GnnLayer {
    Matrix weights;  // [outDim x inDim]
    Activation activation = Activation::Relu;
};

/// Message-passing GNN for node classification. Each layer aggregates the
/// mean over the closed neighborhood N(v) + {v}, applies the weight matrix,
/// then the activation. All hidden layers are ReLU; the last layer emits raw
/// logits.
struct GnnModel {
    std::vector<GnnLayer> layers;

    int featureWidth() const;
    int classCount() const;
    void validate() const;
};

struct ForwardResult {
    Matrix logits;             // [nodeCount x classCount]
    std::vector<int> classes;  // argmax per node, ties toward the lowest index
};

/// Index of the largest entry, ties broken toward the lowest index.
int argmaxLowest(std::span<const double> values);

ForwardResult forward(const GnnModel& m, const Graph& g);

int predictTarget(const GnnModel& m, const Graph& g);

/// Classification of the embedded root when the model only sees the image of
/// the pattern (its nodes, its edges, the host's features).
int predictOnEmbedding(const GnnModel& m, const Graph& g, const Pattern& p,
                       const Embedding& emb);

GnnModel parseModel(const std::string& jsonText);
std::string serializeModel(const GnnModel& m);
GnnModel loadModel(const std::filesystem::path& path);
void saveModel(const GnnModel& m, const std::filesystem::path& path);

}  // namespace graphlens
