#pragma once

#include "lipgerm/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lipgerm {

// Vertex-rate-weighted multigraph; vertices carry string ids and marks ("L", "P", ...).
class RateGraph {
public:
    int add_vertex(const std::string& id, const Rational& rate, std::set<std::string> marks = {});
    void add_edge(int a, int b);
    void add_edge(const std::string& a, const std::string& b) { add_edge(at(a), at(b)); }

    int size() const { return static_cast<int>(ids_.size()); }
    const std::string& id(int v) const { return ids_[v]; }
    int at(const std::string& id) const;
    std::optional<int> find(const std::string& id) const;
    const Rational& rate(int v) const { return rates_[v]; }
    void set_rate(int v, const Rational& r) { rates_[v] = r; }
    const std::set<std::string>& marks(int v) const { return marks_[v]; }
    bool has_mark(int v, const std::string& m) const { return marks_[v].count(m) > 0; }
    void add_mark(int v, const std::string& m) { marks_[v].insert(m); }
    std::vector<int> marked(const std::string& m) const;

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int edge_count(int a, int b) const;
    bool adjacent(int a, int b) const { return edge_count(a, b) > 0; }
    bool connected() const;

    RateGraph induced(const std::set<int>& keep, const std::set<int>& keep_edges) const;
    RateGraph scaled(const Rational& factor) const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<Rational> rates_;
    std::vector<std::set<std::string>> marks_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

struct Bottleneck {
    Rational value;
    std::vector<int> path;  // witness, from source to target
    int nu0 = -1;           // first vertex of minimal rate on the witness
};

// Max over paths of the minimal vertex rate, endpoints included.
Bottleneck bottleneck(const RateGraph& g, int a, int b);

// All-pairs bottleneck values; nullopt for disconnected pairs.
using BottleneckMatrix = std::vector<std::vector<std::optional<Rational>>>;
BottleneckMatrix bottleneck_matrix(const RateGraph& g);
BottleneckMatrix bottleneck_matrix_serial(const RateGraph& g);

struct PathsSubgraph {
    std::set<int> vertices;
    std::set<int> edges;  // indices into g.edges()
};

// Union of simple paths whose two ends are distinct marked vertices.
PathsSubgraph paths_subgraph_parts(const RateGraph& g, const std::set<int>& marked);
RateGraph paths_subgraph(const RateGraph& g, const std::set<int>& marks_a, const std::set<int>& marks_b);

// Class index per vertex after deleting 'P' vertices; -1 on the deleted ones.
std::vector<int> gauss_classes(const RateGraph& g);

struct GraphMap {
    const RateGraph* source = nullptr;
    const RateGraph* target = nullptr;
    std::vector<int> vmap;
    std::string name;
};

using Diagnostics = std::vector<std::string>;

Diagnostics validate_graph_map(const GraphMap& f);

struct CyclicCover {
    GraphMap projection;  // total -> base
    long order = 1;
    std::vector<int> generator;  // permutation of total's vertices
};

Diagnostics validate_cyclic_cover(const CyclicCover& c);

// Checks C o Ehat = E o Chat for Ehat: Fhat->G, Chat: Fhat->F, E: F->T, C: G->T.
Diagnostics check_commuting_square(const GraphMap& ehat, const GraphMap& chat, const GraphMap& e,
                                   const GraphMap& c);

std::string rate_graph_dot(const RateGraph& g, const std::string& name,
                           const std::set<int>& thick_edges = {});

}  // namespace lipgerm
