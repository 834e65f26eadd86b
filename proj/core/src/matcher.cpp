// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/matcher.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace graphlens {

using ordered_json = nlohmann::ordered_json;

void Pattern::validate() const {
    if (graph.nodeCount() < 1) throw std::runtime_error("pattern: must have at least one node");
    if (root < 0 || root >= graph.nodeCount())
        throw std::runtime_error("pattern: root " + std::to_string(root) + " out of range");

    // connectivity via BFS from the root
    std::vector<bool> seen(graph.nodeCount(), false);
    std::vector<int> queue{root};
    seen[root] = true;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int u : graph.neighbors(v))
            if (!seen[u]) {
                seen[u] = true;
                queue.push_back(u);
            }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw std::runtime_error("pattern: not connected");
}

void validateEmbedding(const Pattern& p, const Graph& host, const Embedding& emb,
                       bool anchorRootToTarget) {
    const int n = p.graph.nodeCount();
    if (static_cast<int>(emb.map.size()) != n)
        throw std::runtime_error("embedding: size " + std::to_string(emb.map.size()) +
                                 " != pattern node count " + std::to_string(n));
    std::vector<bool> used(host.nodeCount(), false);
    for (int q = 0; q < n; ++q) {
        int v = emb.map[q];
        if (v < 0 || v >= host.nodeCount())
            throw std::runtime_error("embedding: image " + std::to_string(v) + " out of range");
        if (used[v]) throw std::runtime_error("embedding: not injective at host node " +
                                              std::to_string(v));
        used[v] = true;
        if (host.label(v) != p.graph.label(q))
            throw std::runtime_error("embedding: label mismatch at pattern node " +
                                     std::to_string(q));
    }
    for (auto [a, b] : p.graph.edges())
        if (!host.hasEdge(emb.map[a], emb.map[b]))
            throw std::runtime_error("embedding: pattern edge [" + std::to_string(a) + "," +
                                     std::to_string(b) + "] has no host edge");
    if (anchorRootToTarget) {
        if (!host.target()) throw std::runtime_error("embedding: host has no target");
        if (emb.map[p.root] != *host.target())
            throw std::runtime_error("embedding: root not mapped to host target");
    }
}

namespace {

/// Pattern node assignment order: degree descending, ties by ascending id.
std::vector<int> assignmentOrder(const Graph& pg) {
    std::vector<int> order(pg.nodeCount());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pg.neighbors(a).size() > pg.neighbors(b).size();
    });
    return order;
}

struct SearchState {
    const Pattern& p;
    const Graph& host;
    bool anchored;
    std::size_t limit;
    std::vector<int> order;          // pattern nodes in assignment order
    std::vector<int> image;          // pattern node -> host node or -1
    std::vector<bool> hostUsed;
    std::vector<Embedding>& out;

    bool feasible(int pnode, int v) const {
        if (hostUsed[v]) return false;
        if (host.label(v) != p.graph.label(pnode)) return false;
        if (anchored && pnode == p.root && v != *host.target()) return false;
        for (int q : p.graph.neighbors(pnode)) {
            int w = image[q];
            if (w >= 0 && !host.hasEdge(v, w)) return false;
        }
        return true;
    }

    bool search(std::size_t depth) {
        if (depth == order.size()) {
            out.push_back(Embedding{image});
            return out.size() >= limit;
        }
        const int pnode = order[depth];
        for (int v = 0; v < host.nodeCount(); ++v) {
            if (!feasible(pnode, v)) continue;
            image[pnode] = v;
            hostUsed[v] = true;
            const bool done = search(depth + 1);
            hostUsed[v] = false;
            image[pnode] = -1;
            if (done) return true;
        }
        return false;
    }
};

}  // namespace

std::vector<Embedding> findEmbeddings(const Pattern& p, const Graph& host,
                                      bool anchorRootToTarget, std::size_t limit) {
    p.validate();
    if (limit < 1) throw std::runtime_error("findEmbeddings: limit must be >= 1");
    if (anchorRootToTarget && !host.target())
        throw std::runtime_error("findEmbeddings: anchored search needs a host target");

    std::vector<Embedding> out;
    if (p.graph.nodeCount() > host.nodeCount()) return out;

    SearchState st{p, host, anchorRootToTarget, limit, assignmentOrder(p.graph),
                   std::vector<int>(p.graph.nodeCount(), -1),
                   std::vector<bool>(host.nodeCount(), false), out};
    st.search(0);
    return out;
}

bool checkStructurePredicate(const Pattern& p, const Graph& host) {
    if (!host.target()) throw std::runtime_error("checkStructurePredicate: host has no target");
    return !findEmbeddings(p, host, true, 1).empty();
}

CnfInstance encodeCnf(const Pattern& p, const Graph& host, bool anchorRootToTarget) {
    p.validate();
    if (anchorRootToTarget && !host.target())
        throw std::runtime_error("encodeCnf: anchored instance needs a host target");

    const int pn = p.graph.nodeCount();
    const int hn = host.nodeCount();

    // var ids, 1-based; 0 = no variable for this pair
    std::vector<std::vector<int>> var(pn, std::vector<int>(hn, 0));
    CnfInstance inst;
    int next = 1;
    for (int q = 0; q < pn; ++q)
        for (int v = 0; v < hn; ++v) {
            if (p.graph.label(q) != host.label(v)) continue;
            if (anchorRootToTarget && q == p.root && v != *host.target()) continue;
            var[q][v] = next++;
            inst.variables.emplace_back(q, v);
        }

    std::vector<std::vector<int>> clauses;

    // exactly one image per pattern node
    for (int q = 0; q < pn; ++q) {
        std::vector<int> atLeast;
        for (int v = 0; v < hn; ++v)
            if (var[q][v]) atLeast.push_back(var[q][v]);
        clauses.push_back(atLeast);  // may be empty: unsatisfiable instance
        for (std::size_t i = 0; i < atLeast.size(); ++i)
            for (std::size_t j = i + 1; j < atLeast.size(); ++j)
                clauses.push_back({-atLeast[i], -atLeast[j]});
    }

    // injectivity across pattern nodes
    for (int v = 0; v < hn; ++v)
        for (int q = 0; q < pn; ++q) {
            if (!var[q][v]) continue;
            for (int r = q + 1; r < pn; ++r)
                if (var[r][v]) clauses.push_back({-var[q][v], -var[r][v]});
        }

    // edge preservation: b[q][v] -> OR of b[r][u] over host neighbors u of v
    for (auto [a, b] : p.graph.edges())
        for (auto [q, r] : {std::pair{a, b}, std::pair{b, a}})
            for (int v = 0; v < hn; ++v) {
                if (!var[q][v]) continue;
                std::vector<int> clause{-var[q][v]};
                for (int u : host.neighbors(v))
                    if (var[r][u]) clause.push_back(var[r][u]);
                clauses.push_back(std::move(clause));
            }

    std::ostringstream os;
    os << "p cnf " << inst.variables.size() << ' ' << clauses.size() << '\n';
    for (const auto& clause : clauses) {
        for (int lit : clause) os << lit << ' ';
        os << "0\n";
    }
    inst.dimacs = os.str();
    return inst;
}

std::string CnfInstance::sidecarJson() const {
    ordered_json j;
    j["variables"] = ordered_json::array();
    for (std::size_t i = 0; i < variables.size(); ++i) {
        ordered_json entry;
        entry["var"] = i + 1;
        entry["patternNode"] = variables[i].first;
        entry["hostNode"] = variables[i].second;
        j["variables"].push_back(std::move(entry));
    }
    return j.dump(2);
}

namespace {

ordered_json patternToJson(const Pattern& p) {
    ordered_json j = ordered_json::parse(serializeGraph(p.graph));
    j["root"] = p.root;
    j["supportCount"] = p.supportCount;
    j["importance"] = p.importance;
    return j;
}

Pattern patternFromJson(const ordered_json& j) {
    Pattern p;
    p.graph = parseGraph(j.dump());
    if (!j.contains("root")) throw std::runtime_error("pattern: missing \"root\"");
    p.root = j["root"].get<int>();
    p.supportCount = j.value("supportCount", 1);
    p.importance = j.value("importance", 0.0);
    p.validate();
    return p;
}

}  // namespace

std::string serializePattern(const Pattern& p) { return patternToJson(p).dump(2); }

Pattern parsePattern(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("pattern: JSON parse error");
    return patternFromJson(j);
}

std::string serializePatternList(const std::vector<Pattern>& ps) {
    ordered_json j;
    j["patterns"] = ordered_json::array();
    for (const Pattern& p : ps) j["patterns"].push_back(patternToJson(p));
    return j.dump(2);
}

std::vector<Pattern> parsePatternList(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("patterns: JSON parse error");
    if (!j.contains("patterns") || !j["patterns"].is_array())
        throw std::runtime_error("patterns: missing \"patterns\" array");
    std::vector<Pattern> out;
    for (const auto& pj : j["patterns"]) out.push_back(patternFromJson(pj));
    return out;
}

Pattern loadPattern(const std::filesystem::path& path) {
    try {
        return parsePattern(readTextFile(path));
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

bool patternsIsomorphic(const Pattern& a, const Pattern& b) {
    if (a.graph.nodeCount() != b.graph.nodeCount()) return false;
    if (a.graph.edgeCount() != b.graph.edgeCount()) return false;
    const Graph bHost = b.graph.withTarget(b.root);
    const Graph aHost = a.graph.withTarget(a.root);
    return !findEmbeddings(a, bHost, true, 1).empty() &&
           !findEmbeddings(b, aHost, true, 1).empty();
}

}  // namespace graphlens
