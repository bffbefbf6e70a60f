#pragma once

#include "lipgerm/puiseux.hpp"
#include "lipgerm/rate_graph.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lipgerm {

struct NamedBranch {
    std::string id;
    PuiseuxBranch branch;
};

struct ResolutionVertex {
    std::string id;
    Rational rate;
    long selfint = -1;
    long m = 1;
    std::optional<std::string> parent;
    bool root = false;
    bool delta = false;
    bool separation = false;
    std::vector<std::string> arrows;
    PuiseuxBranch prefix;  // curvettes are prefix + s*x^rate
};

class ResolutionTree {
public:
    int add_vertex(ResolutionVertex v);
    void add_edge(int a, int b);
    void remove_edge(int a, int b);
    void attach(const std::string& branch, int v);

    int size() const { return static_cast<int>(vertices_.size()); }
    const ResolutionVertex& vertex(int v) const { return vertices_[v]; }
    ResolutionVertex& vertex(int v) { return vertices_[v]; }
    const std::vector<ResolutionVertex>& vertices() const { return vertices_; }
    int at(const std::string& id) const;
    std::optional<int> find(const std::string& id) const;
    int root() const;

    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    std::vector<int> neighbors(int v) const;
    int valency(int v) const { return static_cast<int>(neighbors(v).size()); }
    bool adjacent(int a, int b) const;

    // branch id -> vertex index
    const std::map<std::string, int>& attachments() const { return attach_; }
    std::map<std::string, PuiseuxBranch>& branches() { return branches_; }
    const std::map<std::string, PuiseuxBranch>& branches() const { return branches_; }
    const std::vector<std::string>& delta_branches() const { return delta_; }
    void set_delta_branches(std::vector<std::string> ids) { delta_ = std::move(ids); }

    // Recomputes parent links by BFS from the root.
    void link_parents();
    std::string next_id() const { return "C" + std::to_string(size() + 1); }

    // Exceptional curves as a rate graph; marks root/delta/separation/node.
    RateGraph as_rate_graph() const;

private:
    std::vector<ResolutionVertex> vertices_;
    std::vector<std::pair<int, int>> edges_;
    std::map<std::string, int> attach_;
    std::map<std::string, PuiseuxBranch> branches_;
    std::vector<std::string> delta_;
};

struct BlowupDirective {
    enum class Kind { ExtendAlongBranch, BlowUpEdge };
    Kind kind = Kind::ExtendAlongBranch;
    std::string branch;
    Rational target;
    std::string a, b;

    static BlowupDirective extend(const std::string& branch, const Rational& target) {
        return {Kind::ExtendAlongBranch, branch, target, {}, {}};
    }
    static BlowupDirective edge(const std::string& a, const std::string& b) {
        return {Kind::BlowUpEdge, {}, Rational(0), a, b};
    }
    // "extend:<branch>:<rate>" or "edge:<v>:<w>"
    static BlowupDirective parse(const std::string& s);
    std::string str() const;
};

// Default 10000; LIPGERM_STEP_BUDGET overrides.
long step_budget();

ResolutionTree resolve(const std::vector<NamedBranch>& branches,
                       const std::vector<BlowupDirective>& directives = {});

// In-place variants used by resolve and by fixture builders.
void apply_directive(ResolutionTree& t, const BlowupDirective& d);
int blow_up_edge(ResolutionTree& t, int a, int b);

ResolutionTree mark_delta(const ResolutionTree& t, const std::vector<std::string>& delta_ids);
ResolutionTree separate_delta(const ResolutionTree& t);
std::vector<std::string> classify_nodes(const ResolutionTree& t);
bool is_node(const ResolutionTree& t, int v);

Rational inner_rate(const ResolutionTree& t, const std::string& v);
Rational polar_rate(const ResolutionTree& t, const std::string& delta_branch);
PuiseuxBranch curvette(const ResolutionTree& t, const std::string& v, const std::string& symbol);
long curvette_multiplicity(const ResolutionTree& t, const std::string& v);

std::string tree_dot(const ResolutionTree& t, const std::string& name = "T");

}  // namespace lipgerm
