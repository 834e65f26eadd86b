// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphlens {

using ordered_json = nlohmann::ordered_json;

Graph::Graph(std::vector<int> labels,
             std::vector<std::vector<double>> features,
             std::vector<std::pair<int, int>> edges,
             std::optional<int> target)
    : labels_(std::move(labels)), features_(std::move(features)), target_(target) {
    const int n = static_cast<int>(labels_.size());
    if (features_.size() != labels_.size())
        throw std::runtime_error("graph: node label/feature count mismatch");

    featureWidth_ = n > 0 ? static_cast<int>(features_[0].size()) : 0;
    if (n > 0 && featureWidth_ < 1)
        throw std::runtime_error("graph: feature width must be >= 1");
    for (int v = 0; v < n; ++v) {
        if (static_cast<int>(features_[v].size()) != featureWidth_)
            throw std::runtime_error("graph: node " + std::to_string(v) +
                                     ": feature width " + std::to_string(features_[v].size()) +
                                     " != " + std::to_string(featureWidth_));
        for (double x : features_[v])
            if (!std::isfinite(x))
                throw std::runtime_error("graph: node " + std::to_string(v) +
                                         ": non-finite feature value");
    }

    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::runtime_error("graph: edge [" + std::to_string(u) + "," +
                                     std::to_string(v) + "]: endpoint out of range");
        if (u == v)
            throw std::runtime_error("graph: edge [" + std::to_string(u) + "," +
                                     std::to_string(v) + "]: self-loop");
        auto e = std::minmax(u, v);
        if (!seen.insert(e).second)
            throw std::runtime_error("graph: edge [" + std::to_string(e.first) + "," +
                                     std::to_string(e.second) + "]: duplicate");
    }
    edges_.assign(seen.begin(), seen.end());

    if (target_ && (*target_ < 0 || *target_ >= n))
        throw std::runtime_error("graph: target " + std::to_string(*target_) +
                                 " out of range");

    adjacency_.assign(n, {});
    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

void Graph::checkNode(int v, const char* who) const {
    if (v < 0 || v >= nodeCount())
        throw std::runtime_error(std::string(who) + ": unknown node id " + std::to_string(v));
}

int Graph::label(int v) const {
    checkNode(v, "label");
    return labels_[v];
}

const std::vector<double>& Graph::features(int v) const {
    checkNode(v, "features");
    return features_[v];
}

const std::vector<int>& Graph::neighbors(int v) const {
    checkNode(v, "neighbors");
    return adjacency_[v];
}

bool Graph::hasEdge(int u, int v) const {
    checkNode(u, "hasEdge");
    checkNode(v, "hasEdge");
    const auto& nbrs = adjacency_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

Graph Graph::withTarget(int v) const {
    checkNode(v, "withTarget");
    Graph g = *this;
    g.target_ = v;
    return g;
}

void Dataset::validate() const {
    if (featureWidth < 1) throw std::runtime_error("dataset: featureWidth must be >= 1");
    if (classCount < 1) throw std::runtime_error("dataset: classCount must be >= 1");
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const Graph& g = graphs[i];
        if (g.featureWidth() != featureWidth)
            throw std::runtime_error("dataset: graph " + std::to_string(i) +
                                     ": feature width " + std::to_string(g.featureWidth()) +
                                     " != " + std::to_string(featureWidth));
        if (!g.target())
            throw std::runtime_error("dataset: graph " + std::to_string(i) + ": missing target");
    }
}

Graph edgeSubgraph(const Graph& g,
                   const std::vector<int>& nodeIds,
                   const std::vector<std::pair<int, int>>& edgeSubset) {
    std::vector<int> keep(nodeIds);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    std::vector<int> remap(g.nodeCount(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= g.nodeCount())
            throw std::runtime_error("edgeSubgraph: node id " + std::to_string(keep[i]) +
                                     " out of range");
        remap[keep[i]] = static_cast<int>(i);
    }

    std::vector<int> labels;
    std::vector<std::vector<double>> features;
    labels.reserve(keep.size());
    for (int v : keep) {
        labels.push_back(g.label(v));
        features.push_back(g.features(v));
    }

    std::vector<std::pair<int, int>> edges;
    edges.reserve(edgeSubset.size());
    for (auto [u, v] : edgeSubset) {
        if (u < 0 || u >= g.nodeCount() || v < 0 || v >= g.nodeCount() ||
            remap[u] < 0 || remap[v] < 0)
            throw std::runtime_error("edgeSubgraph: edge [" + std::to_string(u) + "," +
                                     std::to_string(v) + "]: endpoint outside nodeIds");
        if (!g.hasEdge(u, v))
            throw std::runtime_error("edgeSubgraph: edge [" + std::to_string(u) + "," +
                                     std::to_string(v) + "]: not an edge of the host");
        edges.emplace_back(remap[u], remap[v]);
    }

    std::optional<int> target;
    if (g.target() && remap[*g.target()] >= 0) target = remap[*g.target()];

    return Graph(std::move(labels), std::move(features), std::move(edges), target);
}

namespace {

Graph graphFromJson(const ordered_json& j) {
    if (!j.is_object()) throw std::runtime_error("graph: expected a JSON object");
    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw std::runtime_error("graph: missing \"nodes\" array");
    if (!j.contains("edges") || !j["edges"].is_array())
        throw std::runtime_error("graph: missing \"edges\" array");

    const auto& jn = j["nodes"];
    const int n = static_cast<int>(jn.size());
    std::vector<int> labels(n, 0);
    std::vector<std::vector<double>> features(n);
    std::vector<bool> present(n, false);
    for (const auto& node : jn) {
        if (!node.is_object() || !node.contains("id") || !node.contains("label") ||
            !node.contains("features"))
            throw std::runtime_error("graph: node entries need \"id\", \"label\", \"features\"");
        const int id = node["id"].get<int>();
        if (id < 0 || id >= n)
            throw std::runtime_error("graph: node id " + std::to_string(id) +
                                     " not contiguous from 0");
        if (present[id])
            throw std::runtime_error("graph: duplicate node id " + std::to_string(id));
        present[id] = true;
        labels[id] = node["label"].get<int>();
        features[id] = node["features"].get<std::vector<double>>();
    }

    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2)
            throw std::runtime_error("graph: edges must be [u,v] pairs");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }

    std::optional<int> target;
    if (j.contains("target") && !j["target"].is_null()) target = j["target"].get<int>();

    return Graph(std::move(labels), std::move(features), std::move(edges), target);
}

ordered_json graphToJson(const Graph& g) {
    ordered_json j;
    j["nodes"] = ordered_json::array();
    for (int v = 0; v < g.nodeCount(); ++v) {
        ordered_json node;
        node["id"] = v;
        node["label"] = g.label(v);
        node["features"] = g.features(v);
        j["nodes"].push_back(std::move(node));
    }
    j["edges"] = ordered_json::array();
    for (auto [u, v] : g.edges()) j["edges"].push_back(ordered_json::array({u, v}));
    if (g.target()) j["target"] = *g.target();
    return j;
}

ordered_json parseJsonText(const std::string& text, const char* what) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw std::runtime_error(std::string(what) + ": JSON parse error");
    return j;
}

}  // namespace

Graph parseGraph(const std::string& jsonText) {
    return graphFromJson(parseJsonText(jsonText, "graph"));
}

std::string serializeGraph(const Graph& g) { return graphToJson(g).dump(2); }

Dataset parseDataset(const std::string& jsonText) {
    ordered_json j = parseJsonText(jsonText, "dataset");
    if (!j.is_object() || !j.contains("featureWidth") || !j.contains("classCount") ||
        !j.contains("graphs") || !j["graphs"].is_array())
        throw std::runtime_error("dataset: need \"featureWidth\", \"classCount\", \"graphs\"");

    Dataset ds;
    ds.featureWidth = j["featureWidth"].get<int>();
    ds.classCount = j["classCount"].get<int>();
    const auto& jg = j["graphs"];
    ds.graphs.reserve(jg.size());
    for (std::size_t i = 0; i < jg.size(); ++i) {
        try {
            ds.graphs.push_back(graphFromJson(jg[i]));
        } catch (const std::exception& e) {
            throw std::runtime_error("dataset: graph " + std::to_string(i) + ": " + e.what());
        }
    }
    ds.validate();
    return ds;
}

std::string serializeDataset(const Dataset& ds) {
    ordered_json j;
    j["featureWidth"] = ds.featureWidth;
    j["classCount"] = ds.classCount;
    j["graphs"] = ordered_json::array();
    for (const Graph& g : ds.graphs) j["graphs"].push_back(graphToJson(g));
    return j.dump(2);
}

std::string readTextFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeTextFile(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << text;
}

Dataset loadDataset(const std::filesystem::path& path) {
    try {
        return parseDataset(readTextFile(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void saveDataset(const Dataset& ds, const std::filesystem::path& path) {
    writeTextFile(path, serializeDataset(ds) + "\n");
}

Graph loadGraph(const std::filesystem::path& path) {
    try {
        return parseGraph(readTextFile(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void saveGraph(const Graph& g, const std::filesystem::path& path) {
    writeTextFile(path, serializeGraph(g) + "\n");
}

}  // namespace graphlens
