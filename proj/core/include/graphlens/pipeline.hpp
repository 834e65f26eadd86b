// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graphlens/property.hpp"

namespace graphlens {

struct PipelineConfig {
    int maxEdges = 4;
    int minSupport = 2;
    int maxDepth = 4;
    int minLeaf = 5;
    double purityThreshold = 0.9;
    std::uint64_t seed = 0;
    /// Cap on anchored embeddings enumerated per (pattern, graph) pair.
    int maxEmbeddingsPerGraph = 64;
};

struct PropertyStats {
    std::size_t patternIndex = 0;
    int trainApplies = 0;
    int trainHolds = 0;
    std::vector<int> mispredictedGraphs;  // training graphs with applies && !holds
};

struct PipelineResult {
    std::vector<Pattern> minedPatterns;
    std::vector<Property> properties;
    std::vector<PropertyStats> stats;  // parallel to properties
    std::string report;
};

/// Full analysis: mine patterns, unroll each onto an FFNN, seed input regions
/// from supporting embeddings (deduplicated by activation pattern), keep only
/// regions whose class claim verifies, learn the equivalence predicate, and
/// compose one property per (pattern, verified region, path predicate).
/// Errors are tagged with the stage that raised them.
PipelineResult runPipeline(const GnnModel& m, const Dataset& ds, const PipelineConfig& cfg,
                           const std::string& modelName = "(in-memory)",
                           const std::string& dataName = "(in-memory)");

PipelineResult runPipeline(const std::filesystem::path& modelPath,
                           const std::filesystem::path& datasetPath,
                           const PipelineConfig& cfg);

}  // namespace graphlens
