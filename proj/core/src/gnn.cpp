// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/gnn.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace graphlens {

using ordered_json = nlohmann::ordered_json;

int GnnModel::featureWidth() const {
    if (layers.empty()) throw std::runtime_error("model: no layers");
    return static_cast<int>(layers.front().weights.cols());
}

int GnnModel::classCount() const {
    if (layers.empty()) throw std::runtime_error("model: no layers");
    return static_cast<int>(layers.back().weights.rows());
}

void GnnModel::validate() const {
    if (layers.empty()) throw std::runtime_error("model: no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const GnnLayer& layer = layers[l];
        if (layer.weights.rows() == 0 || layer.weights.cols() == 0)
            throw std::runtime_error("model: layer " + std::to_string(l) + ": empty weights");
        if (!layer.weights.allFinite())
            throw std::runtime_error("model: layer " + std::to_string(l) +
                                     ": non-finite weight");
        if (l + 1 < layers.size() &&
            layers[l + 1].weights.cols() != layer.weights.rows())
            throw std::runtime_error("model: layer " + std::to_string(l + 1) +
                                     ": input width does not chain");
        const bool last = l + 1 == layers.size();
        if (!last && layer.activation != Activation::Relu)
            throw std::runtime_error("model: layer " + std::to_string(l) +
                                     ": hidden layers must be relu");
        if (last && layer.activation != Activation::None)
            throw std::runtime_error("model: last layer must have activation none");
    }
}

int argmaxLowest(std::span<const double> values) {
    int best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] > values[best]) best = static_cast<int>(k);
    return best;
}

ForwardResult forward(const GnnModel& m, const Graph& g) {
    m.validate();
    if (g.featureWidth() != m.featureWidth())
        throw std::runtime_error("forward: graph feature width " +
                                 std::to_string(g.featureWidth()) + " != model input width " +
                                 std::to_string(m.featureWidth()));
    const int n = g.nodeCount();

    std::vector<std::vector<double>> h(n);
    for (int v = 0; v < n; ++v) h[v] = g.features(v);

    for (const GnnLayer& layer : m.layers) {
        std::vector<std::vector<double>> next(n);
        for (int v = 0; v < n; ++v) {
            // mean over the closed neighborhood
            std::vector<double> mean = h[v];
            for (int u : g.neighbors(v))
                for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += h[u][i];
            const double inv = 1.0 / static_cast<double>(g.neighbors(v).size() + 1);
            for (double& x : mean) x *= inv;

            next[v] = layer.weights.apply(mean);
            if (layer.activation == Activation::Relu)
                for (double& x : next[v])
                    if (x < 0.0) x = 0.0;
        }
        h = std::move(next);
    }

    ForwardResult res;
    const int c = m.classCount();
    res.logits = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(c));
    res.classes.resize(n);
    for (int v = 0; v < n; ++v) {
        for (int k = 0; k < c; ++k) res.logits(v, k) = h[v][k];
        res.classes[v] = argmaxLowest(res.logits.row(v));
    }
    return res;
}

int predictTarget(const GnnModel& m, const Graph& g) {
    if (!g.target()) throw std::runtime_error("predictTarget: graph has no target");
    return forward(m, g).classes[*g.target()];
}

int predictOnEmbedding(const GnnModel& m, const Graph& g, const Pattern& p,
                       const Embedding& emb) {
    validateEmbedding(p, g, emb, /*anchorRootToTarget=*/false);

    std::vector<int> imageNodes = emb.map;
    std::vector<std::pair<int, int>> imageEdges;
    imageEdges.reserve(p.graph.edges().size());
    for (auto [a, b] : p.graph.edges()) imageEdges.emplace_back(emb.map[a], emb.map[b]);

    Graph sub = edgeSubgraph(g, imageNodes, imageEdges);

    // edgeSubgraph renumbers in ascending original-id order
    std::vector<int> sorted = imageNodes;
    std::sort(sorted.begin(), sorted.end());
    const int rootImage = emb.map[p.root];
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), rootImage);
    const int newTarget = static_cast<int>(it - sorted.begin());

    return predictTarget(m, sub.withTarget(newTarget));
}

namespace {

Activation activationFromString(const std::string& s) {
    if (s == "relu") return Activation::Relu;
    if (s == "none") return Activation::None;
    throw std::runtime_error("model: unknown activation \"" + s + "\"");
}

std::string activationToString(Activation a) {
    return a == Activation::Relu ? "relu" : "none";
}

}  // namespace

GnnModel parseModel(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("model: JSON parse error");
    if (!j.is_object() || !j.contains("layers") || !j["layers"].is_array())
        throw std::runtime_error("model: missing \"layers\" array");

    GnnModel m;
    for (const auto& jl : j["layers"]) {
        if (!jl.contains("weights") || !jl["weights"].is_array())
            throw std::runtime_error("model: layer missing \"weights\"");
        const auto& rows = jl["weights"];
        if (rows.empty()) throw std::runtime_error("model: empty weight matrix");
        Matrix w(rows.size(), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != w.cols())
                throw std::runtime_error("model: ragged weight matrix");
            for (std::size_t c = 0; c < w.cols(); ++c) w(r, c) = rows[r][c].get<double>();
        }
        GnnLayer layer;
        layer.weights = std::move(w);
        layer.activation = activationFromString(jl.value("activation", "relu"));
        m.layers.push_back(std::move(layer));
    }
    m.validate();
    return m;
}

std::string serializeModel(const GnnModel& m) {
    ordered_json j;
    j["layers"] = ordered_json::array();
    for (const GnnLayer& layer : m.layers) {
        ordered_json jl;
        jl["weights"] = ordered_json::array();
        for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (std::size_t c = 0; c < layer.weights.cols(); ++c)
                row.push_back(layer.weights(r, c));
            jl["weights"].push_back(std::move(row));
        }
        jl["activation"] = activationToString(layer.activation);
        j["layers"].push_back(std::move(jl));
    }
    return j.dump(2);
}

GnnModel loadModel(const std::filesystem::path& path) {
    try {
        return parseModel(readTextFile(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void saveModel(const GnnModel& m, const std::filesystem::path& path) {
    writeTextFile(path, serializeModel(m) + "\n");
}

}  // namespace graphlens
