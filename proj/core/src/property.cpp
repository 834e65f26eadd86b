// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/property.hpp"

#include <stdexcept>

#include <json.hpp>

#include "graphlens/unroller.hpp"

namespace graphlens {

using ordered_json = nlohmann::ordered_json;

std::vector<LinearConstraint> dominanceClaim(int cls, int classCount) {
    std::vector<LinearConstraint> claim;
    for (int k = 0; k < classCount; ++k) {
        if (k == cls) continue;
        LinearConstraint c;
        c.coeffs.assign(static_cast<std::size_t>(classCount), 0.0);
        if (k < cls) {
            c.coeffs[static_cast<std::size_t>(k)] = 1.0;
            c.coeffs[static_cast<std::size_t>(cls)] = -1.0;
            c.rel = Rel::Lt;  // o_k - o_cls < 0
        } else {
            c.coeffs[static_cast<std::size_t>(cls)] = 1.0;
            c.coeffs[static_cast<std::size_t>(k)] = -1.0;
            c.rel = Rel::Ge;  // o_cls - o_k >= 0
        }
        claim.push_back(std::move(c));
    }
    return claim;
}

Property composeProperty(const Pattern& p, const LinearRegion& region,
                         const PathPredicate& equivPredicate,
                         const std::vector<LinearConstraint>& claim, int classCount) {
    p.validate();
    if (classCount < 1) throw std::runtime_error("composeProperty: classCount must be >= 1");

    const int n = p.graph.nodeCount();
    const int d = p.graph.featureWidth();
    const int inputWidth = n * d;
    for (const LinearConstraint& c : region.constraints)
        if (static_cast<int>(c.coeffs.size()) != inputWidth)
            throw std::runtime_error("composeProperty: region constraint width " +
                                     std::to_string(c.coeffs.size()) + " != pattern inputs " +
                                     std::to_string(inputWidth));
    if (region.classIndex < 0 || region.classIndex >= classCount)
        throw std::runtime_error("composeProperty: region class out of range");

    const int equivWidth = n + n * d;
    for (const ThresholdComparison& c : equivPredicate)
        if (c.feature < 0 || c.feature >= equivWidth)
            throw std::runtime_error("composeProperty: equivalence feature " +
                                     std::to_string(c.feature) + " out of range");

    Property prop;
    prop.pattern = p;
    prop.region = region;
    prop.equivPredicate = equivPredicate;
    prop.claim = claim.empty() ? dominanceClaim(region.classIndex, classCount) : claim;
    for (const LinearConstraint& c : prop.claim)
        if (static_cast<int>(c.coeffs.size()) != classCount)
            throw std::runtime_error("composeProperty: claim width != class count");
    return prop;
}

CheckReport checkProperty(const Property& prop, const GnnModel& m, const Graph& g) {
    if (!g.target()) throw std::runtime_error("checkProperty: graph has no target");
    if (g.featureWidth() != m.featureWidth())
        throw std::runtime_error("checkProperty: graph feature width " +
                                 std::to_string(g.featureWidth()) + " != model input width " +
                                 std::to_string(m.featureWidth()));

    InputLayout layout;
    layout.featureWidth = g.featureWidth();
    for (int v = 0; v < prop.pattern.graph.nodeCount(); ++v)
        for (int j = 0; j < g.featureWidth(); ++j) layout.slots.emplace_back(v, j);

    CheckReport report;
    constexpr std::size_t kEmbeddingCap = 4096;
    for (const Embedding& emb : findEmbeddings(prop.pattern, g, true, kEmbeddingCap)) {
        const std::vector<double> x = flattenEmbeddingFeatures(g, emb, layout);
        if (!prop.region.contains(x)) continue;
        const EquivSample s = extractEquivFeatures(m, g, prop.pattern, emb);
        if (!predicateSatisfied(prop.equivPredicate, flattenEquivFeatures(s))) continue;
        report.applies = true;
        report.witness = emb;
        break;
    }

    if (report.applies) {
        const ForwardResult res = forward(m, g);
        const auto logits = res.logits.row(static_cast<std::size_t>(*g.target()));
        bool ok = true;
        for (const LinearConstraint& c : prop.claim)
            if (!c.satisfied(logits)) {
                ok = false;
                break;
            }
        report.holds = ok;
    }
    return report;
}

namespace {

ordered_json constraintToJson(const LinearConstraint& c) {
    ordered_json j;
    j["a"] = c.coeffs;
    j["b"] = c.offset;
    j["rel"] = c.rel == Rel::Ge ? ">=" : "<";
    return j;
}

LinearConstraint constraintFromJson(const ordered_json& j) {
    LinearConstraint c;
    c.coeffs = j.at("a").get<std::vector<double>>();
    c.offset = j.at("b").get<double>();
    const std::string rel = j.at("rel").get<std::string>();
    if (rel == ">=")
        c.rel = Rel::Ge;
    else if (rel == "<")
        c.rel = Rel::Lt;
    else
        throw std::runtime_error("property: unknown relation \"" + rel + "\"");
    return c;
}

ordered_json propertyToJson(const Property& p) {
    ordered_json j;
    j["pattern"] = ordered_json::parse(serializePattern(p.pattern));
    j["region"] = ordered_json::parse(serializeRegion(p.region));
    j["equivPredicate"] = ordered_json::parse(serializePredicates({p.equivPredicate}))
                              .at("predicates")[0];
    j["claim"] = ordered_json::array();
    for (const LinearConstraint& c : p.claim) j["claim"].push_back(constraintToJson(c));
    return j;
}

Property propertyFromJson(const ordered_json& j) {
    Property p;
    p.pattern = parsePattern(j.at("pattern").dump());
    p.region = parseRegion(j.at("region").dump());
    ordered_json wrap;
    wrap["predicates"] = ordered_json::array({j.at("equivPredicate")});
    p.equivPredicate = parsePredicates(wrap.dump())[0];
    for (const auto& cj : j.at("claim")) p.claim.push_back(constraintFromJson(cj));
    return p;
}

}  // namespace

std::string serializeProperty(const Property& p) { return propertyToJson(p).dump(2); }

Property parseProperty(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("property: JSON parse error");
    return propertyFromJson(j);
}

std::string serializePropertyList(const std::vector<Property>& ps) {
    ordered_json j;
    j["properties"] = ordered_json::array();
    for (const Property& p : ps) j["properties"].push_back(propertyToJson(p));
    return j.dump(2);
}

std::vector<Property> parsePropertyList(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("properties: JSON parse error");
    std::vector<Property> out;
    if (j.is_object() && j.contains("properties")) {
        for (const auto& pj : j["properties"]) out.push_back(propertyFromJson(pj));
    } else {
        out.push_back(propertyFromJson(j));  // single property object
    }
    return out;
}

std::string renderCheckReport(const CheckReport& r) {
    ordered_json j;
    j["applies"] = r.applies;
    if (r.holds)
        j["holds"] = *r.holds;
    else
        j["holds"] = nullptr;
    if (r.witness)
        j["witnessEmbedding"] = r.witness->map;
    else
        j["witnessEmbedding"] = nullptr;
    return j.dump(2);
}

}  // namespace graphlens
