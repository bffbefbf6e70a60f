#include "lipgerm/resolution.hpp"

#include "lipgerm/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>

namespace lipgerm {

int ResolutionTree::add_vertex(ResolutionVertex v) {
    if (find(v.id)) throw SchemaError("duplicate tree vertex '" + v.id + "'");
    vertices_.push_back(std::move(v));
    return size() - 1;
}

void ResolutionTree::add_edge(int a, int b) {
    if (a == b || a < 0 || b < 0 || a >= size() || b >= size()) throw SchemaError("bad tree edge");
    edges_.emplace_back(a, b);
}

void ResolutionTree::remove_edge(int a, int b) {
    for (auto it = edges_.begin(); it != edges_.end(); ++it)
        if ((it->first == a && it->second == b) || (it->first == b && it->second == a)) {
            edges_.erase(it);
            return;
        }
    throw InvalidDirective("no edge between '" + vertices_[a].id + "' and '" + vertices_[b].id + "'");
}

void ResolutionTree::attach(const std::string& branch, int v) {
    auto it = attach_.find(branch);
    if (it != attach_.end()) {
        auto& arrows = vertices_[it->second].arrows;
        arrows.erase(std::remove(arrows.begin(), arrows.end(), branch), arrows.end());
    }
    attach_[branch] = v;
    vertices_[v].arrows.push_back(branch);
}

int ResolutionTree::at(const std::string& id) const {
    auto v = find(id);
    if (!v) throw SchemaError("unknown tree vertex '" + id + "'");
    return *v;
}

std::optional<int> ResolutionTree::find(const std::string& id) const {
    for (int v = 0; v < size(); ++v)
        if (vertices_[v].id == id) return v;
    return std::nullopt;
}

int ResolutionTree::root() const {
    for (int v = 0; v < size(); ++v)
        if (vertices_[v].root) return v;
    throw SchemaError("tree has no root");
}

std::vector<int> ResolutionTree::neighbors(int v) const {
    std::vector<int> out;
    for (auto [a, b] : edges_) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    return out;
}

bool ResolutionTree::adjacent(int a, int b) const {
    for (auto [x, y] : edges_)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

void ResolutionTree::link_parents() {
    for (auto& v : vertices_) v.parent.reset();
    if (vertices_.empty()) return;
    int r = root();
    std::vector<char> seen(size(), 0);
    std::deque<int> q{r};
    seen[r] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                vertices_[w].parent = vertices_[v].id;
                q.push_back(w);
            }
    }
}

RateGraph ResolutionTree::as_rate_graph() const {
    RateGraph g;
    for (int v = 0; v < size(); ++v) {
        std::set<std::string> marks;
        const auto& x = vertices_[v];
        if (x.root) marks.insert("root");
        if (x.delta) marks.insert("delta");
        if (x.separation) marks.insert("separation");
        if (is_node(*this, v)) marks.insert("node");
        g.add_vertex(x.id, x.rate, marks);
    }
    for (auto [a, b] : edges_) g.add_edge(a, b);
    return g;
}

BlowupDirective BlowupDirective::parse(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() == 3 && parts[0] == "extend") return extend(parts[1], Rational::parse(parts[2]));
    if (parts.size() == 3 && parts[0] == "edge") return edge(parts[1], parts[2]);
    throw ParseError("bad directive '" + s + "' (expected extend:<branch>:<rate> or edge:<v>:<w>)");
}

std::string BlowupDirective::str() const {
    if (kind == Kind::ExtendAlongBranch) return "extend:" + branch + ":" + target.str();
    return "edge:" + a + ":" + b;
}

long step_budget() {
    if (const char* env = std::getenv("LIPGERM_STEP_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return 10000;
}

namespace {

// Position of a branch's next term relative to the rays of the current frame.
// Either an exact slope, infinite (no further term), or only a strict lower bound
// (the branch stops being known before its next term).
struct Slope {
    enum class Kind { Exact, Infinite, Above } kind;
    Rational v;
};

struct Ray {
    long a, b;
    int vertex;  // -1 for the virtual curvette direction
};

struct Frame {
    int D;
    Rational q;
    long m;
    PuiseuxBranch prefix;
};

class Engine {
public:
    Engine(ResolutionTree& t, const std::vector<NamedBranch>& br) : t_(t), br_(br), budget_(step_budget()) {}

    void run() {
        int c1 = new_vertex(Rational(1), 1, PuiseuxBranch());
        t_.vertex(c1).root = true;
        std::vector<int> all(br_.size());
        for (size_t i = 0; i < br_.size(); ++i) all[i] = int(i);
        for (auto& g : group_on(all, Rational(1)))
            open_frame({c1, Rational(1), 1, br_[g[0]].branch.prefix_upto(Rational(1))}, g);
    }

    int new_vertex(const Rational& rate, long m, const PuiseuxBranch& prefix) {
        if (++steps_ > budget_)
            throw StepBudgetExceeded("blow-up step budget of " + std::to_string(budget_) + " exceeded");
        ResolutionVertex v;
        v.id = t_.next_id();
        v.rate = rate;
        v.m = m;
        v.selfint = -1;
        v.prefix = prefix.with_truncation(std::nullopt);
        return t_.add_vertex(std::move(v));
    }

private:
    std::vector<std::vector<int>> group_on(const std::vector<int>& bs, const Rational& rate) {
        std::vector<std::vector<int>> groups;
        for (int b : bs) {
            bool placed = false;
            for (auto& g : groups) {
                Contact c = contact(br_[g[0]].branch, br_[b].branch);
                if (is_infinite(c))
                    throw TruncationTooShort("branches '" + br_[g[0]].id + "' and '" + br_[b].id +
                                             "' cannot be separated");
                if (std::get<Rational>(c) > rate) {
                    g.push_back(b);
                    placed = true;
                    break;
                }
            }
            if (!placed) groups.push_back({b});
        }
        return groups;
    }

    Slope slope(int b, const Frame& f) const {
        const auto& br = br_[b].branch;
        if (auto e = br.first_exponent_above(f.q)) return {Slope::Kind::Exact, Rational(f.m) * (*e - f.q)};
        if (!br.truncation()) return {Slope::Kind::Infinite, Rational(0)};
        return {Slope::Kind::Above, Rational(f.m) * (*br.truncation() - f.q)};
    }

    // -1 below s, 0 on s, 1 above s.
    int side(int b, const Frame& f, const Rational& s) const {
        Slope sl = slope(b, f);
        switch (sl.kind) {
            case Slope::Kind::Exact: return sl.v < s ? -1 : sl.v == s ? 0 : 1;
            case Slope::Kind::Infinite: return 1;
            case Slope::Kind::Above:
                if (s <= sl.v) return 1;
                throw TruncationTooShort("branch '" + br_[b].id + "' is not known far enough past x^(" +
                                         f.q.str() + ")");
        }
        return 1;
    }

    void open_frame(const Frame& f, const std::vector<int>& group) {
        corner(f, {1, 0, f.D}, {0, 1, -1}, group);
    }

    void corner(const Frame& f, Ray L, Ray R, const std::vector<int>& group) {
        if (group.empty()) return;
        bool satellite = R.vertex >= 0;
        if (!satellite && group.size() == 1) {
            int b = group[0];
            if (multiplicity(br_[b].branch) == t_.vertex(L.vertex).m) {
                t_.attach(br_[b].id, L.vertex);
                return;
            }
        }
        Ray M{L.a + R.a, L.b + R.b, -1};
        Rational s(M.b, M.a);
        M.vertex = new_vertex(f.q + Rational(M.b, f.m * M.a), f.m * M.a, f.prefix);
        t_.vertex(L.vertex).selfint -= 1;
        if (satellite) {
            t_.vertex(R.vertex).selfint -= 1;
            t_.remove_edge(L.vertex, R.vertex);
        }
        t_.add_edge(L.vertex, M.vertex);
        if (satellite) t_.add_edge(M.vertex, R.vertex);

        std::vector<int> left, on, right;
        for (int b : group) {
            int sd = side(b, f, s);
            (sd < 0 ? left : sd == 0 ? on : right).push_back(b);
        }
        // sub-tasks run in order of their first branch
        struct Task {
            int first;
            int kind;  // 0 left, 1 on, 2 right
            std::vector<int> bs;
        };
        std::vector<Task> tasks;
        if (!left.empty()) tasks.push_back({left[0], 0, left});
        if (!right.empty()) tasks.push_back({right[0], 2, right});
        Rational rate = t_.vertex(M.vertex).rate;
        for (auto& g : group_on(on, rate)) tasks.push_back({g[0], 1, g});
        std::stable_sort(tasks.begin(), tasks.end(), [](const Task& x, const Task& y) { return x.first < y.first; });
        for (auto& task : tasks) {
            if (task.kind == 0) corner(f, L, M, task.bs);
            else if (task.kind == 2) corner(f, M, R, task.bs);
            else {
                const auto& rep = br_[task.bs[0]].branch;
                open_frame({M.vertex, rate, t_.vertex(M.vertex).m, rep.prefix_upto(rate)}, task.bs);
            }
        }
    }

    ResolutionTree& t_;
    const std::vector<NamedBranch>& br_;
    long budget_;
    long steps_ = 0;
};

int free_blow_up(ResolutionTree& t, int v, const PuiseuxBranch& prefix) {
    const auto& x = t.vertex(v);
    ResolutionVertex n;
    n.id = t.next_id();
    n.m = x.m;
    n.rate = x.rate + Rational(1, x.m);
    n.selfint = -1;
    n.prefix = prefix;
    t.vertex(v).selfint -= 1;
    int w = t.add_vertex(std::move(n));
    t.add_edge(v, w);
    return w;
}

}  // namespace

int blow_up_edge(ResolutionTree& t, int a, int b) {
    if (!t.adjacent(a, b))
        throw InvalidDirective("no edge between '" + t.vertex(a).id + "' and '" + t.vertex(b).id + "'");
    const auto& x = t.vertex(a);
    const auto& y = t.vertex(b);
    ResolutionVertex n;
    n.id = t.next_id();
    n.m = x.m + y.m;
    n.rate = (Rational(x.m) * x.rate + Rational(y.m) * y.rate) / Rational(n.m);
    n.selfint = -1;
    n.prefix = (x.rate > y.rate ? x : y).prefix;
    t.vertex(a).selfint -= 1;
    t.vertex(b).selfint -= 1;
    t.remove_edge(a, b);
    int w = t.add_vertex(std::move(n));
    t.add_edge(a, w);
    t.add_edge(w, b);
    return w;
}

void apply_directive(ResolutionTree& t, const BlowupDirective& d) {
    if (d.kind == BlowupDirective::Kind::BlowUpEdge) {
        auto a = t.find(d.a), b = t.find(d.b);
        if (!a || !b) throw InvalidDirective("directive '" + d.str() + "' names an unknown vertex");
        blow_up_edge(t, *a, *b);
        t.link_parents();
        return;
    }
    auto it = t.attachments().find(d.branch);
    if (it == t.attachments().end()) throw UnknownBranch("unknown branch '" + d.branch + "'");
    const auto& br = t.branches().at(d.branch);
    int v = it->second;
    Rational steps = (d.target - t.vertex(v).rate) * Rational(t.vertex(v).m);
    if (steps.sign() <= 0 || !steps.is_integer())
        throw InvalidDirective("rate " + d.target.str() + " is not reachable from '" + t.vertex(v).id +
                               "' by blowing up along '" + d.branch + "'");
    if (!br.known_through(d.target))
        throw TruncationTooShort("branch '" + d.branch + "' is not known through x^(" + d.target.str() + ")");
    long n = steps.num_long();
    long budget = step_budget();
    if (n + t.size() > budget)
        throw StepBudgetExceeded("blow-up step budget of " + std::to_string(budget) + " exceeded");
    for (long k = 0; k < n; ++k) {
        Rational next = t.vertex(v).rate + Rational(1, t.vertex(v).m);
        v = free_blow_up(t, v, br.prefix_below(next));
    }
    t.attach(d.branch, v);
    t.link_parents();
}

ResolutionTree resolve(const std::vector<NamedBranch>& branches, const std::vector<BlowupDirective>& directives) {
    ResolutionTree t;
    std::set<std::string> seen;
    for (auto& b : branches) {
        if (!seen.insert(b.id).second) throw SchemaError("duplicate branch id '" + b.id + "'");
        t.branches()[b.id] = b.branch;
    }
    Engine(t, branches).run();
    t.link_parents();
    for (auto& d : directives) apply_directive(t, d);
    return t;
}

ResolutionTree mark_delta(const ResolutionTree& t, const std::vector<std::string>& delta_ids) {
    ResolutionTree out = t;
    for (auto& id : delta_ids) {
        auto it = t.attachments().find(id);
        if (it == t.attachments().end()) throw UnknownBranch("unknown branch '" + id + "'");
        out.vertex(it->second).delta = true;
    }
    auto ids = out.delta_branches();
    for (auto& id : delta_ids)
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    out.set_delta_branches(ids);
    return out;
}

ResolutionTree separate_delta(const ResolutionTree& t) {
    ResolutionTree out = t;
    std::vector<std::pair<int, int>> dd;
    for (auto [a, b] : out.edges())
        if (out.vertex(a).delta && out.vertex(b).delta) dd.emplace_back(a, b);
    for (auto [a, b] : dd) out.vertex(blow_up_edge(out, a, b)).separation = true;

    // strings of valency-2 vertices between two Δ-nodes
    for (int d = 0; d < out.size(); ++d) {
        if (!out.vertex(d).delta) continue;
        for (int first : out.neighbors(d)) {
            std::vector<int> inner;
            int prev = d, cur = first;
            bool ok = false;
            while (true) {
                const auto& x = out.vertex(cur);
                if (x.delta) { ok = true; break; }
                if (x.root || x.separation || out.valency(cur) != 2) break;
                inner.push_back(cur);
                auto nb = out.neighbors(cur);
                int next = nb[0] == prev ? nb[1] : nb[0];
                prev = cur;
                cur = next;
            }
            if (!ok || inner.empty()) continue;
            int pick = inner[0];
            for (int v : inner)
                if (out.vertex(v).rate < out.vertex(pick).rate ||
                    (out.vertex(v).rate == out.vertex(pick).rate && v < pick))
                    pick = v;
            out.vertex(pick).separation = true;
        }
    }
    out.link_parents();
    return out;
}

bool is_node(const ResolutionTree& t, int v) {
    const auto& x = t.vertex(v);
    return x.root || x.delta || x.separation || t.valency(v) >= 3;
}

std::vector<std::string> classify_nodes(const ResolutionTree& t) {
    std::vector<std::string> out;
    for (int v = 0; v < t.size(); ++v)
        if (is_node(t, v)) out.push_back(t.vertex(v).id);
    return out;
}

Rational inner_rate(const ResolutionTree& t, const std::string& v) { return t.vertex(t.at(v)).rate; }

Rational polar_rate(const ResolutionTree& t, const std::string& delta_branch) {
    const auto& ds = t.delta_branches();
    auto it = t.attachments().find(delta_branch);
    if (it == t.attachments().end() || std::find(ds.begin(), ds.end(), delta_branch) == ds.end())
        throw UnknownBranch("'" + delta_branch + "' is not a Δ-branch of this tree");
    return t.vertex(it->second).rate;
}

PuiseuxBranch curvette(const ResolutionTree& t, const std::string& v, const std::string& symbol) {
    const auto& x = t.vertex(t.at(v));
    return x.prefix.prefix_below(x.rate).with_term(x.rate, Coefficient::symbol(symbol)).with_truncation(x.rate);
}

long curvette_multiplicity(const ResolutionTree& t, const std::string& v) { return t.vertex(t.at(v)).m; }

std::string tree_dot(const ResolutionTree& t, const std::string& name) {
    std::ostringstream os;
    os << "graph \"" << name << "\" {\n";
    for (int v = 0; v < t.size(); ++v) {
        const auto& x = t.vertex(v);
        os << "  \"" << x.id << "\" [label=\"q=" << x.rate.str() << " m=" << x.m << " s=" << x.selfint << "\"";
        if (x.delta) os << ", shape=doublecircle";
        else if (x.separation) os << ", shape=diamond";
        os << "];\n";
    }
    for (auto [a, b] : t.edges()) os << "  \"" << t.vertex(a).id << "\" -- \"" << t.vertex(b).id << "\";\n";
    for (int v = 0; v < t.size(); ++v)
        for (auto& br : t.vertex(v).arrows) {
            os << "  \"arrow:" << br << "\" [label=\"" << br << "\", shape=box];\n";
            os << "  \"" << t.vertex(v).id << "\" -- \"arrow:" << br << "\";\n";
        }
    os << "}\n";
    return os.str();
}

}  // namespace lipgerm
