// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/miner.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace graphlens {

namespace {

double marginFor(const Matrix& logits, int node, int cls) {
    const auto row = logits.row(static_cast<std::size_t>(node));
    if (row.size() == 1) return row[0];
    double bestOther = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < row.size(); ++k)
        if (static_cast<int>(k) != cls) bestOther = std::max(bestOther, row[k]);
    return row[cls] - bestOther;
}

Graph withoutEdge(const Graph& g, std::pair<int, int> drop) {
    std::vector<int> labels(g.nodeCount());
    std::vector<std::vector<double>> features(g.nodeCount());
    for (int v = 0; v < g.nodeCount(); ++v) {
        labels[v] = g.label(v);
        features[v] = g.features(v);
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(g.edges().size());
    for (auto e : g.edges())
        if (e != drop) edges.push_back(e);
    return Graph(std::move(labels), std::move(features), std::move(edges), g.target());
}

}  // namespace

std::map<std::pair<int, int>, double> edgeImportance(const GnnModel& m, const Graph& g) {
    if (!g.target()) throw std::runtime_error("edgeImportance: graph has no target");
    const int target = *g.target();

    const ForwardResult full = forward(m, g);
    const int cls = full.classes[target];
    const double fullMargin = marginFor(full.logits, target, cls);

    std::map<std::pair<int, int>, double> scores;
    for (auto e : g.edges()) {
        const ForwardResult occluded = forward(m, withoutEdge(g, e));
        scores[e] = fullMargin - marginFor(occluded.logits, target, cls);
    }
    return scores;
}

Pattern extractSubstructure(const GnnModel& m, const Graph& g, int maxEdges) {
    if (maxEdges < 1) throw std::runtime_error("extractSubstructure: maxEdges must be >= 1");
    if (!g.target()) throw std::runtime_error("extractSubstructure: graph has no target");
    const int target = *g.target();

    const auto scores = edgeImportance(m, g);

    std::set<int> component{target};
    std::vector<std::pair<int, int>> kept;
    std::set<std::pair<int, int>> available(g.edges().begin(), g.edges().end());
    double totalScore = 0.0;

    while (static_cast<int>(kept.size()) < maxEdges) {
        bool found = false;
        std::pair<int, int> best{};
        double bestScore = 0.0;
        for (const auto& e : available) {  // ascending (u,v): ties go to the smallest edge
            if (!component.count(e.first) && !component.count(e.second)) continue;
            const double s = scores.at(e);
            if (!found || s > bestScore) {
                found = true;
                best = e;
                bestScore = s;
            }
        }
        if (!found) break;
        kept.push_back(best);
        available.erase(best);
        component.insert(best.first);
        component.insert(best.second);
        totalScore += bestScore;
    }

    std::vector<int> nodeIds(component.begin(), component.end());
    Graph sub = edgeSubgraph(g, nodeIds, kept);

    const auto it = std::lower_bound(nodeIds.begin(), nodeIds.end(), target);
    Pattern p;
    p.graph = std::move(sub);
    p.root = static_cast<int>(it - nodeIds.begin());
    p.supportCount = 1;
    p.importance = totalScore;
    p.validate();
    return p;
}

std::vector<Pattern> mineSubstructures(const GnnModel& m, const Dataset& ds, int maxEdges,
                                       int minSupport) {
    if (ds.graphs.empty()) throw std::runtime_error("mineSubstructures: empty dataset");
    if (minSupport < 1) throw std::runtime_error("mineSubstructures: minSupport must be >= 1");

    struct Group {
        Pattern representative;
        int count = 0;
        double importanceSum = 0.0;
    };
    std::vector<Group> groups;

    for (const Graph& g : ds.graphs) {
        Pattern p = extractSubstructure(m, g, maxEdges);
        bool merged = false;
        for (Group& grp : groups) {
            if (patternsIsomorphic(grp.representative, p)) {
                grp.count += 1;
                grp.importanceSum += p.importance;
                merged = true;
                break;
            }
        }
        if (!merged) {
            const double imp = p.importance;
            groups.push_back(Group{std::move(p), 1, imp});
        }
    }

    std::vector<Pattern> out;
    for (Group& grp : groups) {
        if (grp.count < minSupport) continue;
        Pattern p = std::move(grp.representative);
        p.supportCount = grp.count;
        p.importance = grp.importanceSum / grp.count;
        out.push_back(std::move(p));
    }
    std::stable_sort(out.begin(), out.end(), [](const Pattern& a, const Pattern& b) {
        if (a.supportCount != b.supportCount) return a.supportCount > b.supportCount;
        return a.importance > b.importance;
    });
    return out;
}

}  // namespace graphlens
