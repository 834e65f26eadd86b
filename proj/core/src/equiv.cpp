// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/equiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphlens {

using ordered_json = nlohmann::ordered_json;

std::vector<double> flattenEquivFeatures(const EquivSample& s) {
    std::vector<double> x = s.connectivity;
    for (const auto& row : s.meanContribution) x.insert(x.end(), row.begin(), row.end());
    return x;
}

EquivSample extractEquivFeatures(const GnnModel& m, const Graph& g, const Pattern& p,
                                 const Embedding& emb) {
    validateEmbedding(p, g, emb, /*anchorRootToTarget=*/false);
    const int n = p.graph.nodeCount();
    const int d = g.featureWidth();

    std::set<int> image(emb.map.begin(), emb.map.end());

    EquivSample s;
    s.connectivity.resize(n, 0.0);
    s.meanContribution.assign(n, std::vector<double>(d, 0.0));
    for (int i = 0; i < n; ++i) {
        const int v = emb.map[i];
        const auto& nbrs = g.neighbors(v);
        if (nbrs.empty()) continue;
        int outside = 0;
        for (int u : nbrs) {
            if (image.count(u)) continue;
            ++outside;
            for (int j = 0; j < d; ++j) s.meanContribution[i][j] += g.features(u)[j];
        }
        s.connectivity[i] = static_cast<double>(outside) / static_cast<double>(nbrs.size());
        if (outside > 0)
            for (int j = 0; j < d; ++j) s.meanContribution[i][j] /= outside;
    }

    s.equivalent = predictOnEmbedding(m, g, p, emb) == predictTarget(m, g);
    return s;
}

namespace {

double giniOf(std::size_t pos, std::size_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);
}

struct TreeBuilder {
    const std::vector<std::vector<double>>& features;
    const std::vector<bool>& labels;
    int maxDepth;
    int minLeaf;
    std::size_t featureCount;

    std::unique_ptr<TreeNode> build(std::vector<std::size_t> idx, int depth) {
        auto node = std::make_unique<TreeNode>();
        const std::size_t n = idx.size();
        std::size_t pos = 0;
        for (std::size_t i : idx) pos += labels[i] ? 1 : 0;
        node->sampleCount = n;
        node->equivalentFraction = static_cast<double>(pos) / static_cast<double>(n);

        const bool pure = pos == 0 || pos == n;
        if (pure || depth >= maxDepth || n < 2 * static_cast<std::size_t>(minLeaf))
            return node;

        int bestFeature = -1;
        double bestThreshold = 0.0;
        double bestGini = std::numeric_limits<double>::infinity();

        std::vector<std::pair<double, bool>> column(n);
        for (std::size_t f = 0; f < featureCount; ++f) {
            for (std::size_t k = 0; k < n; ++k)
                column[k] = {features[idx[k]][f], labels[idx[k]]};
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            // sweep left-to-right, splitting between consecutive distinct values
            std::size_t leftPos = 0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                leftPos += column[k].second ? 1 : 0;
                if (column[k].first == column[k + 1].first) continue;
                const std::size_t leftN = k + 1;
                const std::size_t rightN = n - leftN;
                if (leftN < static_cast<std::size_t>(minLeaf) ||
                    rightN < static_cast<std::size_t>(minLeaf))
                    continue;
                const double w = (static_cast<double>(leftN) * giniOf(leftPos, leftN) +
                                  static_cast<double>(rightN) * giniOf(pos - leftPos, rightN)) /
                                 static_cast<double>(n);
                if (w < bestGini) {
                    bestGini = w;
                    bestFeature = static_cast<int>(f);
                    bestThreshold = column[k].first + 0.5 * (column[k + 1].first - column[k].first);
                }
                // ties keep the earlier candidate: lowest feature, lowest threshold
            }
        }

        if (bestFeature < 0) return node;  // no admissible split

        std::vector<std::size_t> leftIdx, rightIdx;
        for (std::size_t i : idx) {
            if (features[i][static_cast<std::size_t>(bestFeature)] <= bestThreshold)
                leftIdx.push_back(i);
            else
                rightIdx.push_back(i);
        }

        node->leaf = false;
        node->feature = bestFeature;
        node->threshold = bestThreshold;
        node->left = build(std::move(leftIdx), depth + 1);
        node->right = build(std::move(rightIdx), depth + 1);
        return node;
    }
};

}  // namespace

DecisionTree fitTree(const std::vector<EquivSample>& samples, int maxDepth, int minLeaf) {
    if (samples.empty()) throw std::runtime_error("fitTree: empty sample set");
    if (maxDepth < 0) throw std::runtime_error("fitTree: maxDepth must be >= 0");
    if (minLeaf < 1) throw std::runtime_error("fitTree: minLeaf must be >= 1");

    std::vector<std::vector<double>> features;
    std::vector<bool> labels;
    features.reserve(samples.size());
    for (const EquivSample& s : samples) {
        features.push_back(flattenEquivFeatures(s));
        labels.push_back(s.equivalent);
        if (features.back().size() != features.front().size())
            throw std::runtime_error("fitTree: inconsistent sample feature widths");
    }

    DecisionTree t;
    t.featureCount = features.front().size();
    std::vector<std::size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    TreeBuilder builder{features, labels, maxDepth, minLeaf, t.featureCount};
    t.root = builder.build(std::move(idx), 0);
    return t;
}

double DecisionTree::predict(std::span<const double> x) const {
    if (!root) throw std::runtime_error("tree: empty");
    const TreeNode* node = root.get();
    while (!node->leaf)
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
                   ? node->left.get()
                   : node->right.get();
    return node->equivalentFraction;
}

bool predicateSatisfied(const PathPredicate& pred, std::span<const double> x) {
    return std::all_of(pred.begin(), pred.end(),
                       [&](const ThresholdComparison& c) { return c.satisfied(x); });
}

namespace {

void collectPaths(const TreeNode* node, double purityThreshold, PathPredicate& path,
                  std::vector<PathPredicate>& out) {
    if (node->leaf) {
        if (node->equivalentFraction >= purityThreshold) out.push_back(path);
        return;
    }
    path.push_back({node->feature, false, node->threshold});
    collectPaths(node->left.get(), purityThreshold, path, out);
    path.back().greater = true;
    collectPaths(node->right.get(), purityThreshold, path, out);
    path.pop_back();
}

}  // namespace

std::vector<PathPredicate> extractPathPredicates(const DecisionTree& t,
                                                 double purityThreshold) {
    if (!(purityThreshold > 0.5 && purityThreshold <= 1.0))
        throw std::runtime_error("extractPathPredicates: purityThreshold must be in (0.5, 1]");
    if (!t.root) throw std::runtime_error("extractPathPredicates: empty tree");
    std::vector<PathPredicate> out;
    PathPredicate path;
    collectPaths(t.root.get(), purityThreshold, path, out);
    return out;
}

std::string renderPredicate(const PathPredicate& pred, int nodeCount, int featureWidth) {
    if (pred.empty()) return "true";
    std::ostringstream os;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (i > 0) os << " && ";
        const ThresholdComparison& c = pred[i];
        if (c.feature < nodeCount) {
            os << "c_" << c.feature;
        } else {
            const int flat = c.feature - nodeCount;
            os << "xbar_{" << flat / featureWidth << "," << flat % featureWidth << "}";
        }
        os << (c.greater ? " > " : " <= ") << c.threshold;
    }
    return os.str();
}

namespace {

ordered_json nodeToJson(const TreeNode* node) {
    ordered_json j;
    j["leaf"] = node->leaf;
    if (node->leaf) {
        j["equivalentFraction"] = node->equivalentFraction;
        j["sampleCount"] = node->sampleCount;
    } else {
        j["feature"] = node->feature;
        j["threshold"] = node->threshold;
        j["equivalentFraction"] = node->equivalentFraction;
        j["sampleCount"] = node->sampleCount;
        j["left"] = nodeToJson(node->left.get());
        j["right"] = nodeToJson(node->right.get());
    }
    return j;
}

std::unique_ptr<TreeNode> nodeFromJson(const ordered_json& j) {
    auto node = std::make_unique<TreeNode>();
    node->leaf = j.at("leaf").get<bool>();
    node->equivalentFraction = j.at("equivalentFraction").get<double>();
    node->sampleCount = j.at("sampleCount").get<std::size_t>();
    if (!node->leaf) {
        node->feature = j.at("feature").get<int>();
        node->threshold = j.at("threshold").get<double>();
        node->left = nodeFromJson(j.at("left"));
        node->right = nodeFromJson(j.at("right"));
    }
    return node;
}

ordered_json predicateToJson(const PathPredicate& pred) {
    ordered_json arr = ordered_json::array();
    for (const ThresholdComparison& c : pred) {
        ordered_json jc;
        jc["feature"] = c.feature;
        jc["op"] = c.greater ? ">" : "<=";
        jc["threshold"] = c.threshold;
        arr.push_back(std::move(jc));
    }
    return arr;
}

PathPredicate predicateFromJson(const ordered_json& arr) {
    PathPredicate pred;
    for (const auto& jc : arr) {
        ThresholdComparison c;
        c.feature = jc.at("feature").get<int>();
        const std::string op = jc.at("op").get<std::string>();
        if (op == ">")
            c.greater = true;
        else if (op == "<=")
            c.greater = false;
        else
            throw std::runtime_error("predicate: unknown op \"" + op + "\"");
        c.threshold = jc.at("threshold").get<double>();
        pred.push_back(c);
    }
    return pred;
}

}  // namespace

std::string serializeTree(const DecisionTree& t) {
    if (!t.root) throw std::runtime_error("serializeTree: empty tree");
    ordered_json j;
    j["featureCount"] = t.featureCount;
    j["root"] = nodeToJson(t.root.get());
    return j.dump(2);
}

DecisionTree parseTree(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("tree: JSON parse error");
    DecisionTree t;
    t.featureCount = j.at("featureCount").get<std::size_t>();
    t.root = nodeFromJson(j.at("root"));
    return t;
}

std::string serializePredicates(const std::vector<PathPredicate>& preds) {
    ordered_json j;
    j["predicates"] = ordered_json::array();
    for (const PathPredicate& p : preds) j["predicates"].push_back(predicateToJson(p));
    return j.dump(2);
}

std::vector<PathPredicate> parsePredicates(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("predicates: JSON parse error");
    std::vector<PathPredicate> out;
    for (const auto& pj : j.at("predicates")) out.push_back(predicateFromJson(pj));
    return out;
}

}  // namespace graphlens
