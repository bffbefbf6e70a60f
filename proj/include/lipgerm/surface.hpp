#pragma once

#include "lipgerm/rate_graph.hpp"
#include "lipgerm/resolution.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lipgerm {

// One component of the lift of a test curve at a node.
struct LiftEntry {
    std::string id;
    std::vector<std::string> fhat;  // Fhat vertex per slice
    std::string g;
    long degree = 1;
    long mult_hat = 1;
    std::map<std::string, Rational> qout;  // partner entry id -> outer rate
};

struct CoverData {
    long order = 1;
    std::vector<std::string> generator;  // images of the total graph's vertices, in vertex order
};

// Graph maps are vertex dictionaries; the four are E: F->T, C: G->T, Ehat: Fhat->G, Chat: Fhat->F.
using VertexDict = std::map<std::string, std::string>;

struct SurfaceGerm {
    long mult = 0;  // 0 when absent (curve-only documents)
    std::vector<NamedBranch> branches;
    std::vector<std::string> delta;
    std::vector<BlowupDirective> directives;
    std::optional<ResolutionTree> tree;
    std::optional<RateGraph> G, F, Fhat;
    std::map<std::string, VertexDict> maps;
    std::map<std::string, CoverData> covers;  // "F" and "Fhat"
    std::vector<std::pair<std::string, std::vector<LiftEntry>>> lifts;
    std::vector<std::string> notes;

    bool is_surface() const { return tree && G && F && Fhat; }
    RateGraph T() const { return tree->as_rate_graph(); }
    const std::vector<LiftEntry>* lifts_at(const std::string& node) const;
};

// JSON schema "lipgerm/1"; errors carry a path such as graphs.Fhat.vertices[3].rate.
SurfaceGerm parse_surface(const std::string& text);
SurfaceGerm load_surface(const std::string& path);
std::string serialize_surface(const SurfaceGerm& s);

// Builds GraphMap views; the graphs passed in must outlive the result.
GraphMap graph_map(const VertexDict& d, const RateGraph& src, const RateGraph& tgt, const std::string& name);
CyclicCover cyclic_cover(const CoverData& c, const GraphMap& projection);

Diagnostics validate(const SurfaceGerm& s);

// Fhat' = union of simple paths between L- and P-marked Fhat vertices.
PathsSubgraph fhat_prime(const SurfaceGerm& s);
std::vector<LiftEntry> principal_components(const SurfaceGerm& s, const std::string& node,
                                            const PathsSubgraph* prime = nullptr);
std::vector<std::pair<std::string, PuiseuxBranch>> nodal_test_curves(const SurfaceGerm& s);

// All inner rates (tree, graphs, annotations) multiplied by a positive factor.
SurfaceGerm scale_rates(const SurfaceGerm& s, const Rational& factor);

}  // namespace lipgerm
