// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/unroller.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace graphlens {

using ordered_json = nlohmann::ordered_json;

UnrollResult unroll(const GnnModel& m, const Pattern& p) {
    m.validate();
    p.validate();
    const int n = p.graph.nodeCount();
    const int d = m.featureWidth();
    if (p.graph.featureWidth() != 0 && p.graph.featureWidth() != d)
        throw std::runtime_error("unroll: pattern feature width " +
                                 std::to_string(p.graph.featureWidth()) +
                                 " != model input width " + std::to_string(d));

    UnrollResult res;
    res.layout.featureWidth = d;
    for (int v = 0; v < n; ++v)
        for (int j = 0; j < d; ++j) res.layout.slots.emplace_back(v, j);

    const std::size_t layerCount = m.layers.size();
    for (std::size_t l = 0; l < layerCount; ++l) {
        const Matrix& w = m.layers[l].weights;
        const std::size_t outDim = w.rows();
        const std::size_t inDim = w.cols();
        const bool last = l + 1 == layerCount;

        // all block rows, or only the root's block row on the last layer
        const std::size_t rows = last ? outDim : static_cast<std::size_t>(n) * outDim;
        FfnnLayer layer;
        layer.weights = Matrix(rows, static_cast<std::size_t>(n) * inDim);
        layer.bias.assign(rows, 0.0);
        layer.activation = m.layers[l].activation;

        for (int v = 0; v < n; ++v) {
            if (last && v != p.root) continue;
            const std::size_t rowBase = last ? 0 : static_cast<std::size_t>(v) * outDim;
            const double scale = 1.0 / static_cast<double>(p.graph.neighbors(v).size() + 1);

            auto placeBlock = [&](int u) {
                const std::size_t colBase = static_cast<std::size_t>(u) * inDim;
                for (std::size_t r = 0; r < outDim; ++r)
                    for (std::size_t c = 0; c < inDim; ++c)
                        layer.weights(rowBase + r, colBase + c) += scale * w(r, c);
            };
            placeBlock(v);
            for (int u : p.graph.neighbors(v)) placeBlock(u);
        }
        res.ffnn.layers.push_back(std::move(layer));
    }
    res.ffnn.validate();
    return res;
}

std::vector<double> flattenEmbeddingFeatures(const Graph& host, const Embedding& emb,
                                             const InputLayout& layout) {
    std::vector<double> x(layout.slots.size());
    for (std::size_t i = 0; i < layout.slots.size(); ++i) {
        const auto [node, feat] = layout.slots[i];
        if (node < 0 || node >= static_cast<int>(emb.map.size()))
            throw std::runtime_error("flattenEmbeddingFeatures: layout node out of range");
        const auto& feats = host.features(emb.map[node]);
        if (feat < 0 || feat >= static_cast<int>(feats.size()))
            throw std::runtime_error("flattenEmbeddingFeatures: feature index out of range");
        x[i] = feats[feat];
    }
    return x;
}

std::string serializeUnrolled(const UnrollResult& u) {
    ordered_json j = ordered_json::parse(serializeFfnn(u.ffnn));
    j["inputLayout"] = ordered_json::array();
    for (auto [node, feat] : u.layout.slots)
        j["inputLayout"].push_back(ordered_json::array({node, feat}));
    return j.dump(2);
}

UnrollResult parseUnrolled(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("unrolled ffnn: JSON parse error");

    UnrollResult u;
    u.ffnn = parseFfnn(jsonText);
    if (!j.contains("inputLayout") || !j["inputLayout"].is_array())
        throw std::runtime_error("unrolled ffnn: missing \"inputLayout\"");
    int maxNode = -1;
    for (const auto& slot : j["inputLayout"]) {
        if (!slot.is_array() || slot.size() != 2)
            throw std::runtime_error("unrolled ffnn: layout entries must be [node, feature]");
        u.layout.slots.emplace_back(slot[0].get<int>(), slot[1].get<int>());
        maxNode = std::max(maxNode, slot[0].get<int>());
    }
    if (!u.layout.slots.empty())
        u.layout.featureWidth = static_cast<int>(u.layout.slots.size()) / (maxNode + 1);
    if (u.layout.width() != u.ffnn.inputWidth())
        throw std::runtime_error("unrolled ffnn: layout width != input width");
    return u;
}

}  // namespace graphlens
