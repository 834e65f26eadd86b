// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "graphlens/equiv.hpp"
#include "graphlens/miner.hpp"
#include "graphlens/unroller.hpp"

namespace graphlens {

namespace {

[[noreturn]] void rethrowTagged(const char* stage, const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
}

struct SupportingEmbedding {
    int graphIndex = 0;
    Embedding emb;
};

}  // namespace

PipelineResult runPipeline(const GnnModel& m, const Dataset& ds, const PipelineConfig& cfg,
                           const std::string& modelName, const std::string& dataName) {
    try {
        m.validate();
        ds.validate();
        if (m.featureWidth() != ds.featureWidth)
            throw std::runtime_error("model input width " + std::to_string(m.featureWidth()) +
                                     " != dataset featureWidth " +
                                     std::to_string(ds.featureWidth));
        if (m.classCount() != ds.classCount)
            throw std::runtime_error("model class count " + std::to_string(m.classCount()) +
                                     " != dataset classCount " + std::to_string(ds.classCount));
    } catch (const std::exception& e) {
        rethrowTagged("load", e);
    }

    PipelineResult result;
    std::size_t regionsSeeded = 0;
    std::size_t regionsVerified = 0;

    try {
        result.minedPatterns = mineSubstructures(m, ds, cfg.maxEdges, cfg.minSupport);
    } catch (const std::exception& e) {
        rethrowTagged("mine", e);
    }

    for (std::size_t pi = 0; pi < result.minedPatterns.size(); ++pi) {
        const Pattern& pattern = result.minedPatterns[pi];

        UnrollResult unrolled;
        try {
            unrolled = unroll(m, pattern);
        } catch (const std::exception& e) {
            rethrowTagged("unroll", e);
        }

        // supporting set: every training graph embedding the pattern at its target
        std::vector<SupportingEmbedding> support;
        for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
            const auto embs =
                findEmbeddings(pattern, ds.graphs[gi], true,
                               static_cast<std::size_t>(cfg.maxEmbeddingsPerGraph));
            for (const Embedding& emb : embs)
                support.push_back({static_cast<int>(gi), emb});
        }

        // regions seeded from supporting embeddings, one per activation pattern
        std::vector<LinearRegion> regions;
        std::vector<ActivationPattern> seen;
        try {
            for (const SupportingEmbedding& se : support) {
                const std::vector<double> x =
                    flattenEmbeddingFeatures(ds.graphs[se.graphIndex], se.emb, unrolled.layout);
                ActivationPattern apat = activationPattern(unrolled.ffnn, x);
                if (std::find(seen.begin(), seen.end(), apat) != seen.end()) continue;
                regions.push_back(regionOf(unrolled.ffnn, apat, x));
                seen.push_back(std::move(apat));
            }
        } catch (const std::exception& e) {
            rethrowTagged("infer", e);
        }
        regionsSeeded += regions.size();

        std::vector<LinearRegion> verified;
        try {
            for (std::size_t ri = 0; ri < regions.size(); ++ri) {
                const AffineMap out = symbolicOutput(unrolled.ffnn, seen[ri]);
                const auto claim = dominanceClaim(regions[ri].classIndex, m.classCount());
                const VerifyResult vr = verifyRegion(regions[ri], out, claim);
                if (vr.kind == VerifyResult::Kind::Verified)
                    verified.push_back(std::move(regions[ri]));
            }
        } catch (const std::exception& e) {
            rethrowTagged("verify", e);
        }
        regionsVerified += verified.size();

        std::vector<PathPredicate> predicates;
        try {
            std::vector<EquivSample> samples;
            samples.reserve(support.size());
            for (const SupportingEmbedding& se : support)
                samples.push_back(
                    extractEquivFeatures(m, ds.graphs[se.graphIndex], pattern, se.emb));
            if (!samples.empty()) {
                const DecisionTree tree = fitTree(samples, cfg.maxDepth, cfg.minLeaf);
                predicates = extractPathPredicates(tree, cfg.purityThreshold);
            }
        } catch (const std::exception& e) {
            rethrowTagged("equiv", e);
        }

        try {
            for (const LinearRegion& region : verified)
                for (const PathPredicate& pred : predicates) {
                    result.properties.push_back(
                        composeProperty(pattern, region, pred, {}, m.classCount()));
                    PropertyStats st;
                    st.patternIndex = pi;
                    result.stats.push_back(std::move(st));
                }
        } catch (const std::exception& e) {
            rethrowTagged("compose", e);
        }
    }

    // training-support statistics; mispredictions are tabulated, not hidden
    try {
        for (std::size_t i = 0; i < result.properties.size(); ++i) {
            PropertyStats& st = result.stats[i];
            for (std::size_t gi = 0; gi < ds.graphs.size(); ++gi) {
                const CheckReport rep = checkProperty(result.properties[i], m, ds.graphs[gi]);
                if (!rep.applies) continue;
                st.trainApplies += 1;
                if (rep.holds.value_or(false))
                    st.trainHolds += 1;
                else
                    st.mispredictedGraphs.push_back(static_cast<int>(gi));
            }
        }
    } catch (const std::exception& e) {
        rethrowTagged("report", e);
    }

    std::ostringstream os;
    os << "graphlens pipeline report\n";
    os << "model: " << modelName << "\n";
    os << "dataset: " << dataName << " (graphs=" << ds.graphs.size()
       << ", featureWidth=" << ds.featureWidth << ", classCount=" << ds.classCount << ")\n";
    os << "config: maxEdges=" << cfg.maxEdges << " minSupport=" << cfg.minSupport
       << " maxDepth=" << cfg.maxDepth << " minLeaf=" << cfg.minLeaf
       << " purityThreshold=" << cfg.purityThreshold << " seed=" << cfg.seed << "\n\n";

    os << "mined patterns: " << result.minedPatterns.size() << "\n";
    for (std::size_t pi = 0; pi < result.minedPatterns.size(); ++pi) {
        const Pattern& p = result.minedPatterns[pi];
        os << "  [" << pi << "] nodes=" << p.graph.nodeCount()
           << " edges=" << p.graph.edgeCount() << " root=" << p.root
           << " support=" << p.supportCount << " importance=" << p.importance << "\n";
    }
    os << "\nproperties: " << result.properties.size() << "\n";
    for (std::size_t i = 0; i < result.properties.size(); ++i) {
        const Property& prop = result.properties[i];
        const PropertyStats& st = result.stats[i];
        os << "  [" << i << "] pattern=" << st.patternIndex
           << " class=" << prop.region.classIndex
           << " regionConstraints=" << prop.region.constraints.size() << " equiv=\""
           << renderPredicate(prop.equivPredicate, prop.pattern.graph.nodeCount(),
                              prop.pattern.graph.featureWidth())
           << "\"\n";
        os << "      train: applies=" << st.trainApplies << " holds=" << st.trainHolds
           << " mispredictions=" << st.mispredictedGraphs.size();
        if (!st.mispredictedGraphs.empty()) {
            os << " (graphs:";
            for (int gi : st.mispredictedGraphs) os << " " << gi;
            os << ")";
        }
        os << "\n";
    }
    os << "\nsummary: patterns=" << result.minedPatterns.size()
       << " regionsSeeded=" << regionsSeeded << " regionsVerified=" << regionsVerified
       << " propertiesEmitted=" << result.properties.size() << "\n";
    result.report = os.str();
    return result;
}

PipelineResult runPipeline(const std::filesystem::path& modelPath,
                           const std::filesystem::path& datasetPath,
                           const PipelineConfig& cfg) {
    GnnModel m;
    Dataset ds;
    try {
        m = loadModel(modelPath);
        ds = loadDataset(datasetPath);
    } catch (const std::exception& e) {
        rethrowTagged("load", e);
    }
    return runPipeline(m, ds, cfg, modelPath.string(), datasetPath.string());
}

}  // namespace graphlens
