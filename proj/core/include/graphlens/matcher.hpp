// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "graphlens/graph.hpp"

namespace graphlens {

/// Rooted, node-labeled pattern graph with mining provenance. The pattern
/// must be connected and non-empty; features ride along but matching only
/// looks at labels and edges.
struct Pattern {
    Graph graph;
    int root = 0;
    int supportCount = 1;
    double importance = 0.0;

    void validate() const;
};

/// Injective map from pattern node ids to host node ids (map[p] = host node).
struct Embedding {
    std::vector<int> map;

    bool operator==(const Embedding& o) const = default;
};

/// Throws unless emb is injective, label-preserving, maps every pattern edge
/// to a host edge, and (when anchored) maps the root to the host's target.
void validateEmbedding(const Pattern& p, const Graph& host, const Embedding& emb,
                       bool anchorRootToTarget);

/// Subgraph-isomorphism search (non-induced: the host may carry extra edges
/// among image nodes). Enumeration order is deterministic: pattern nodes are
/// assigned in degree-descending order (ties by ascending id) and host
/// candidates are tried in ascending id order. Returns at most `limit`
/// embeddings.
std::vector<Embedding> findEmbeddings(const Pattern& p, const Graph& host,
                                      bool anchorRootToTarget, std::size_t limit);

/// Evaluation semantics of the structure predicate: true iff the pattern
/// embeds into the host with the root anchored at the host's target.
bool checkStructurePredicate(const Pattern& p, const Graph& host);

/// Boolean encoding of the matching instance. One variable per compatible
/// (pattern node, host node) pair; satisfiable iff checkStructurePredicate
/// holds (for anchored instances).
struct CnfInstance {
    /// DIMACS text, `p cnf <vars> <clauses>` header included.
    std::string dimacs;
    /// variables[i] = (pattern node, host node) for DIMACS variable i+1.
    std::vector<std::pair<int, int>> variables;

    std::string sidecarJson() const;
};

CnfInstance encodeCnf(const Pattern& p, const Graph& host, bool anchorRootToTarget);

std::string serializePattern(const Pattern& p);
Pattern parsePattern(const std::string& jsonText);
std::string serializePatternList(const std::vector<Pattern>& ps);
std::vector<Pattern> parsePatternList(const std::string& jsonText);
Pattern loadPattern(const std::filesystem::path& path);

/// Rooted isomorphism between two patterns: equal node counts and anchored
/// embeddings in both directions.
bool patternsIsomorphic(const Pattern& a, const Pattern& b);

}  // namespace graphlens
