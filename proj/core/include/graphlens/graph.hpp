// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace graphlens {

/// Undirected simple graph with labeled nodes carrying fixed-width feature
/// vectors. Node ids are contiguous from 0. Immutable after construction;
/// safe to share read-only across threads.
class Graph {
public:
    Graph() = default;

    /// Validates all invariants: consistent feature width, finite features,
    /// no self-loops or duplicate edges, endpoints and target in range.
    Graph(std::vector<int> labels,
          std::vector<std::vector<double>> features,
          std::vector<std::pair<int, int>> edges,
          std::optional<int> target = std::nullopt);

    int nodeCount() const { return static_cast<int>(labels_.size()); }
    int edgeCount() const { return static_cast<int>(edges_.size()); }
    int featureWidth() const { return featureWidth_; }

    int label(int v) const;
    const std::vector<double>& features(int v) const;

    /// Adjacent node ids, sorted ascending; never contains v itself.
    const std::vector<int>& neighbors(int v) const;

    bool hasEdge(int u, int v) const;

    /// Normalized edge list: each pair (u, v) with u < v, sorted.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    std::optional<int> target() const { return target_; }

    /// Copy with a different (validated) target node.
    Graph withTarget(int v) const;

private:
    void checkNode(int v, const char* who) const;

    std::vector<int> labels_;
    std::vector<std::vector<double>> features_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
    std::optional<int> target_;
    int featureWidth_ = 0;
};

/// Set of graphs sharing a feature width, each with a target node, plus the
/// class count of the classifier they feed.
struct Dataset {
    std::vector<Graph> graphs;
    int featureWidth = 0;
    int classCount = 0;

    void validate() const;
};

/// Subgraph restricted to nodeIds and edgeSubset, with ids renumbered
/// contiguously in ascending order of the original ids. Features and labels
/// are copied; the target is remapped if retained.
Graph edgeSubgraph(const Graph& g,
                   const std::vector<int>& nodeIds,
                   const std::vector<std::pair<int, int>>& edgeSubset);

Graph parseGraph(const std::string& jsonText);
std::string serializeGraph(const Graph& g);

Dataset parseDataset(const std::string& jsonText);
std::string serializeDataset(const Dataset& ds);

Dataset loadDataset(const std::filesystem::path& path);
void saveDataset(const Dataset& ds, const std::filesystem::path& path);

Graph loadGraph(const std::filesystem::path& path);
void saveGraph(const Graph& g, const std::filesystem::path& path);

std::string readTextFile(const std::filesystem::path& path);
void writeTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace graphlens
