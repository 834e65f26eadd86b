// Copyright 2026 graphlens authors
// SPDX-License-Identifier: Apache-2.0

#include "graphlens/ffnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "graphlens/simplex.hpp"

namespace graphlens {

using ordered_json = nlohmann::ordered_json;

namespace {
// optima within this band of zero are treated as exactly zero before the
// strictness re-check, matching the solver's pivot tolerance
constexpr double kVerifyTol = 1e-9;
}  // namespace

int Ffnn::inputWidth() const {
    if (layers.empty()) throw std::runtime_error("ffnn: no layers");
    return static_cast<int>(layers.front().weights.cols());
}

int Ffnn::outputWidth() const {
    if (layers.empty()) throw std::runtime_error("ffnn: no layers");
    return static_cast<int>(layers.back().weights.rows());
}

void Ffnn::validate() const {
    if (layers.empty()) throw std::runtime_error("ffnn: no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const FfnnLayer& layer = layers[l];
        if (layer.bias.size() != layer.weights.rows())
            throw std::runtime_error("ffnn: layer " + std::to_string(l) + ": bias width " +
                                     std::to_string(layer.bias.size()) + " != rows " +
                                     std::to_string(layer.weights.rows()));
        if (!layer.weights.allFinite())
            throw std::runtime_error("ffnn: layer " + std::to_string(l) + ": non-finite weight");
        for (double b : layer.bias)
            if (!std::isfinite(b))
                throw std::runtime_error("ffnn: layer " + std::to_string(l) +
                                         ": non-finite bias");
        if (l + 1 < layers.size() && layers[l + 1].weights.cols() != layer.weights.rows())
            throw std::runtime_error("ffnn: layer " + std::to_string(l + 1) +
                                     ": input width does not chain");
    }
}

std::vector<double> ffnnEval(const Ffnn& f, std::span<const double> x) {
    f.validate();
    if (static_cast<int>(x.size()) != f.inputWidth())
        throw std::runtime_error("ffnnEval: input width " + std::to_string(x.size()) +
                                 " != " + std::to_string(f.inputWidth()));
    std::vector<double> h(x.begin(), x.end());
    for (const FfnnLayer& layer : f.layers) {
        std::vector<double> y = layer.weights.apply(h);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += layer.bias[i];
        if (layer.activation == Activation::Relu)
            for (double& v : y)
                if (v < 0.0) v = 0.0;
        h = std::move(y);
    }
    return h;
}

ActivationPattern activationPattern(const Ffnn& f, std::span<const double> x) {
    f.validate();
    if (static_cast<int>(x.size()) != f.inputWidth())
        throw std::runtime_error("activationPattern: input width mismatch");
    ActivationPattern pat;
    std::vector<double> h(x.begin(), x.end());
    for (const FfnnLayer& layer : f.layers) {
        std::vector<double> y = layer.weights.apply(h);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += layer.bias[i];
        std::vector<bool> signs;
        if (layer.activation == Activation::Relu) {
            signs.resize(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) {
                signs[i] = y[i] >= 0.0;  // boundary counts as active
                if (y[i] < 0.0) y[i] = 0.0;
            }
        }
        pat.active.push_back(std::move(signs));
        h = std::move(y);
    }
    return pat;
}

double LinearConstraint::evaluate(std::span<const double> x) const {
    return dot(coeffs, x) + offset;
}

bool LinearConstraint::satisfied(std::span<const double> x) const {
    const double v = evaluate(x);
    return rel == Rel::Ge ? v >= 0.0 : v < 0.0;
}

bool LinearRegion::contains(std::span<const double> x) const {
    return std::all_of(constraints.begin(), constraints.end(),
                       [&](const LinearConstraint& c) { return c.satisfied(x); });
}

double LinearRegion::boundaryMargin(std::span<const double> x) const {
    double m = std::numeric_limits<double>::infinity();
    for (const LinearConstraint& c : constraints) m = std::min(m, std::abs(c.evaluate(x)));
    return m;
}

std::vector<double> AffineMap::apply(std::span<const double> x) const {
    std::vector<double> y = matrix.apply(x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += offset[i];
    return y;
}

namespace {

void checkPatternShape(const Ffnn& f, const ActivationPattern& pat) {
    if (pat.active.size() != f.layers.size())
        throw std::runtime_error("activation pattern: layer count mismatch");
    for (std::size_t l = 0; l < f.layers.size(); ++l) {
        const std::size_t expect =
            f.layers[l].activation == Activation::Relu ? f.layers[l].weights.rows() : 0;
        if (pat.active[l].size() != expect)
            throw std::runtime_error("activation pattern: layer " + std::to_string(l) +
                                     ": width mismatch");
    }
}

/// Symbolic propagation with ReLUs fixed by the pattern. Appends one
/// constraint per ReLU unit when `constraints` is non-null.
AffineMap propagate(const Ffnn& f, const ActivationPattern& pat,
                    std::vector<LinearConstraint>* constraints) {
    AffineMap acc{Matrix::identity(static_cast<std::size_t>(f.inputWidth())),
                  std::vector<double>(static_cast<std::size_t>(f.inputWidth()), 0.0)};
    for (std::size_t l = 0; l < f.layers.size(); ++l) {
        const FfnnLayer& layer = f.layers[l];
        AffineMap next{layer.weights.matmul(acc.matrix), layer.weights.apply(acc.offset)};
        for (std::size_t i = 0; i < next.offset.size(); ++i) next.offset[i] += layer.bias[i];
        if (layer.activation == Activation::Relu) {
            for (std::size_t u = 0; u < next.matrix.rows(); ++u) {
                const bool active = pat.active[l][u];
                if (constraints) {
                    LinearConstraint c;
                    c.coeffs.assign(next.matrix.row(u).begin(), next.matrix.row(u).end());
                    c.offset = next.offset[u];
                    c.rel = active ? Rel::Ge : Rel::Lt;
                    constraints->push_back(std::move(c));
                }
                if (!active) {  // inactive unit contributes the zero function
                    for (std::size_t c2 = 0; c2 < next.matrix.cols(); ++c2)
                        next.matrix(u, c2) = 0.0;
                    next.offset[u] = 0.0;
                }
            }
        }
        acc = std::move(next);
    }
    return acc;
}

}  // namespace

AffineMap symbolicOutput(const Ffnn& f, const ActivationPattern& pat) {
    f.validate();
    checkPatternShape(f, pat);
    return propagate(f, pat, nullptr);
}

LinearRegion regionOf(const Ffnn& f, const ActivationPattern& pat,
                      std::span<const double> seed) {
    f.validate();
    checkPatternShape(f, pat);

    LinearRegion region;
    const AffineMap out = propagate(f, pat, &region.constraints);

    const std::vector<double> logits = out.apply(seed);
    const int cls = argmaxLowest(logits);
    region.classIndex = cls;

    const std::size_t classes = out.matrix.rows();
    for (std::size_t k = 0; k < classes; ++k) {
        if (static_cast<int>(k) == cls) continue;
        LinearConstraint c;
        c.coeffs.resize(out.matrix.cols());
        // lower class indices win ties, so dominance over them must be strict
        if (static_cast<int>(k) < cls) {
            for (std::size_t j = 0; j < c.coeffs.size(); ++j)
                c.coeffs[j] = out.matrix(k, j) - out.matrix(static_cast<std::size_t>(cls), j);
            c.offset = out.offset[k] - out.offset[static_cast<std::size_t>(cls)];
            c.rel = Rel::Lt;  // o_k - o_c < 0
        } else {
            for (std::size_t j = 0; j < c.coeffs.size(); ++j)
                c.coeffs[j] = out.matrix(static_cast<std::size_t>(cls), j) - out.matrix(k, j);
            c.offset = out.offset[static_cast<std::size_t>(cls)] - out.offset[k];
            c.rel = Rel::Ge;  // o_c - o_k >= 0
        }
        region.constraints.push_back(std::move(c));
    }
    return region;
}

VerifyResult verifyRegion(const LinearRegion& region, const AffineMap& output,
                          const std::vector<LinearConstraint>& claims) {
    const std::size_t n = output.matrix.cols();
    for (const LinearConstraint& c : region.constraints)
        if (c.coeffs.size() != n)
            throw std::runtime_error("verifyRegion: region constraint width mismatch");

    // closed relaxation of the region: rows of A x <= b
    Matrix a(region.constraints.size(), n);
    std::vector<double> b(region.constraints.size());
    for (std::size_t i = 0; i < region.constraints.size(); ++i) {
        const LinearConstraint& c = region.constraints[i];
        const double sign = c.rel == Rel::Ge ? -1.0 : 1.0;  // Ge: -a.x <= b ; Lt: a.x <= -b
        for (std::size_t j = 0; j < n; ++j) a(i, j) = sign * c.coeffs[j];
        b[i] = -sign * c.offset;
    }

    VerifyResult res;

    {  // feasibility probe
        LpProblem probe{a, b, std::vector<double>(n, 0.0)};
        if (solveLp(probe).status == LpSolution::Status::Infeasible) {
            res.kind = VerifyResult::Kind::InfeasibleRegion;
            return res;
        }
    }

    for (std::size_t ci = 0; ci < claims.size(); ++ci) {
        const LinearConstraint& claim = claims[ci];
        if (claim.coeffs.size() != output.matrix.rows())
            throw std::runtime_error("verifyRegion: claim width != logit count");

        // violation of the claim as an affine function of the inputs:
        //   Ge claim (g.x + h >= 0): violation = -(g.x + h)
        //   Lt claim (g.x + h < 0):  violation = g.x + h
        std::vector<double> g(n, 0.0);
        double h = claim.offset;
        for (std::size_t k = 0; k < claim.coeffs.size(); ++k) {
            if (claim.coeffs[k] == 0.0) continue;
            h += claim.coeffs[k] * output.offset[k];
            for (std::size_t j = 0; j < n; ++j) g[j] += claim.coeffs[k] * output.matrix(k, j);
        }
        const double dir = claim.rel == Rel::Ge ? -1.0 : 1.0;
        std::vector<double> c(n);
        for (std::size_t j = 0; j < n; ++j) c[j] = dir * g[j];

        LpProblem lp{a, b, c};
        const LpSolution s = solveLp(lp);
        if (s.status == LpSolution::Status::Infeasible) {
            res.kind = VerifyResult::Kind::InfeasibleRegion;  // cannot happen after the probe
            return res;
        }
        if (s.status == LpSolution::Status::Unbounded) {
            res.kind = VerifyResult::Kind::Unbounded;
            res.failedClaim = ci;
            return res;
        }
        double opt = s.value + dir * h;  // max violation over the closed region
        if (std::abs(opt) <= kVerifyTol) opt = 0.0;
        res.claimOptima.push_back(opt);

        // strictness re-check on the optimum: a strict claim needs the
        // violation to stay strictly negative on the closed region
        const bool holds = claim.rel == Rel::Ge ? opt <= 0.0 : opt < 0.0;
        if (!holds) {
            res.kind = VerifyResult::Kind::Falsified;
            res.failedClaim = ci;
            res.witness = s.x;
            return res;
        }
    }

    res.kind = VerifyResult::Kind::Verified;
    return res;
}

namespace {

std::string relToString(Rel r) { return r == Rel::Ge ? ">=" : "<"; }

Rel relFromString(const std::string& s) {
    if (s == ">=") return Rel::Ge;
    if (s == "<") return Rel::Lt;
    throw std::runtime_error("region: unknown relation \"" + s + "\"");
}

ordered_json constraintToJson(const LinearConstraint& c) {
    ordered_json j;
    j["a"] = c.coeffs;
    j["b"] = c.offset;
    j["rel"] = relToString(c.rel);
    return j;
}

LinearConstraint constraintFromJson(const ordered_json& j) {
    LinearConstraint c;
    c.coeffs = j.at("a").get<std::vector<double>>();
    c.offset = j.at("b").get<double>();
    c.rel = relFromString(j.at("rel").get<std::string>());
    return c;
}

}  // namespace

std::string serializeRegion(const LinearRegion& r) {
    ordered_json j;
    j["class"] = r.classIndex;
    j["constraints"] = ordered_json::array();
    for (const LinearConstraint& c : r.constraints) j["constraints"].push_back(constraintToJson(c));
    return j.dump(2);
}

LinearRegion parseRegion(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("region: JSON parse error");
    LinearRegion r;
    r.classIndex = j.at("class").get<int>();
    for (const auto& cj : j.at("constraints")) r.constraints.push_back(constraintFromJson(cj));
    return r;
}

std::string serializeFfnn(const Ffnn& f) {
    ordered_json j;
    j["layers"] = ordered_json::array();
    for (const FfnnLayer& layer : f.layers) {
        ordered_json jl;
        jl["weights"] = ordered_json::array();
        for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (std::size_t c = 0; c < layer.weights.cols(); ++c)
                row.push_back(layer.weights(r, c));
            jl["weights"].push_back(std::move(row));
        }
        jl["bias"] = layer.bias;
        jl["activation"] = layer.activation == Activation::Relu ? "relu" : "none";
        j["layers"].push_back(std::move(jl));
    }
    return j.dump(2);
}

Ffnn parseFfnn(const std::string& jsonText) {
    ordered_json j = ordered_json::parse(jsonText, nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("ffnn: JSON parse error");
    if (!j.contains("layers") || !j["layers"].is_array())
        throw std::runtime_error("ffnn: missing \"layers\" array");
    Ffnn f;
    for (const auto& jl : j["layers"]) {
        FfnnLayer layer;
        const auto& rows = jl.at("weights");
        if (rows.empty()) throw std::runtime_error("ffnn: empty weight matrix");
        layer.weights = Matrix(rows.size(), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != layer.weights.cols())
                throw std::runtime_error("ffnn: ragged weight matrix");
            for (std::size_t c = 0; c < layer.weights.cols(); ++c)
                layer.weights(r, c) = rows[r][c].get<double>();
        }
        layer.bias = jl.at("bias").get<std::vector<double>>();
        const std::string act = jl.value("activation", "none");
        if (act == "relu")
            layer.activation = Activation::Relu;
        else if (act == "none")
            layer.activation = Activation::None;
        else
            throw std::runtime_error("ffnn: unknown activation \"" + act + "\"");
        f.layers.push_back(std::move(layer));
    }
    f.validate();
    return f;
}

}  // namespace graphlens
