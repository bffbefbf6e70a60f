#include "lipgerm/rate_graph.hpp"

#include "lipgerm/errors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace lipgerm {

int RateGraph::add_vertex(const std::string& id, const Rational& rate, std::set<std::string> marks) {
    if (index_.count(id)) throw SchemaError("duplicate vertex id '" + id + "'");
    int v = size();
    ids_.push_back(id);
    index_[id] = v;
    rates_.push_back(rate);
    marks_.push_back(std::move(marks));
    adj_.emplace_back();
    return v;
}

void RateGraph::add_edge(int a, int b) {
    if (a < 0 || b < 0 || a >= size() || b >= size()) throw SchemaError("edge endpoint out of range");
    if (a == b) throw SchemaError("loop at vertex '" + ids_[a] + "'");
    edges_.emplace_back(a, b);
    adj_[a].push_back(b);
    adj_[b].push_back(a);
}

int RateGraph::at(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw SchemaError("unknown vertex id '" + id + "'");
    return it->second;
}

std::optional<int> RateGraph::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<int> RateGraph::marked(const std::string& m) const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (has_mark(v, m)) out.push_back(v);
    return out;
}

int RateGraph::edge_count(int a, int b) const {
    int k = 0;
    for (int w : adj_[a]) k += (w == b);
    return k;
}

bool RateGraph::connected() const {
    if (size() == 0) return true;
    std::vector<char> seen(size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj_[v])
            if (!seen[w]) { seen[w] = 1; ++count; stack.push_back(w); }
    }
    return count == size();
}

RateGraph RateGraph::induced(const std::set<int>& keep, const std::set<int>& keep_edges) const {
    RateGraph h;
    for (int v : keep) h.add_vertex(ids_[v], rates_[v], marks_[v]);
    for (int e : keep_edges) {
        auto [a, b] = edges_[e];
        if (keep.count(a) && keep.count(b)) h.add_edge(ids_[a], ids_[b]);
    }
    return h;
}

RateGraph RateGraph::scaled(const Rational& factor) const {
    RateGraph h = *this;
    for (auto& r : h.rates_) r *= factor;
    return h;
}

namespace {

struct Widest {
    std::vector<std::optional<Rational>> width;
    std::vector<int> pred;
};

// Maximum-capacity search from s with vertex capacities; ties pop the lowest index first.
Widest widest_from(const RateGraph& g, int s) {
    int n = g.size();
    Widest w{std::vector<std::optional<Rational>>(n), std::vector<int>(n, -1)};
    auto cmp = [&](int a, int b) {
        if (*w.width[a] != *w.width[b]) return *w.width[a] > *w.width[b];
        return a < b;
    };
    std::set<int, decltype(cmp)> queue(cmp);
    std::vector<char> done(n, 0);
    w.width[s] = g.rate(s);
    queue.insert(s);
    while (!queue.empty()) {
        int u = *queue.begin();
        queue.erase(queue.begin());
        done[u] = 1;
        for (int v : g.neighbors(u)) {
            if (done[v]) continue;
            Rational cand = std::min(*w.width[u], g.rate(v));
            if (!w.width[v] || cand > *w.width[v]) {
                if (w.width[v]) queue.erase(v);
                w.width[v] = cand;
                w.pred[v] = u;
                queue.insert(v);
            }
        }
    }
    return w;
}

}  // namespace

Bottleneck bottleneck(const RateGraph& g, int a, int b) {
    if (a == b) return {g.rate(a), {a}, a};
    auto w = widest_from(g, a);
    if (!w.width[b]) throw Disconnected("vertices '" + g.id(a) + "' and '" + g.id(b) + "' are not connected");
    Bottleneck out{*w.width[b], {}, -1};
    for (int v = b; v != -1; v = w.pred[v]) out.path.push_back(v);
    std::reverse(out.path.begin(), out.path.end());
    for (int v : out.path)
        if (g.rate(v) == out.value) { out.nu0 = v; break; }
    return out;
}

BottleneckMatrix bottleneck_matrix_serial(const RateGraph& g) {
    BottleneckMatrix m(g.size());
    for (int s = 0; s < g.size(); ++s) m[s] = widest_from(g, s).width;
    return m;
}

BottleneckMatrix bottleneck_matrix(const RateGraph& g) {
    int n = g.size();
    BottleneckMatrix m(n);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n; ++s) m[s] = widest_from(g, s).width;
    return m;
}

namespace {

// Unit-capacity flow on the vertex-split graph; true if two augmenting paths exist.
class SplitFlow {
public:
    explicit SplitFlow(int nodes) : n_(nodes), cap_(nodes * nodes, 0) {}
    void arc(int a, int b, int c) { cap_[a * n_ + b] += c; }
    int flow(int s, int t, int want) {
        int total = 0;
        while (total < want) {
            std::vector<int> pred(n_, -1);
            pred[s] = s;
            std::vector<int> q{s};
            for (size_t i = 0; i < q.size() && pred[t] < 0; ++i) {
                int u = q[i];
                for (int v = 0; v < n_; ++v)
                    if (pred[v] < 0 && cap_[u * n_ + v] > 0) { pred[v] = u; q.push_back(v); }
            }
            if (pred[t] < 0) break;
            for (int v = t; v != s; v = pred[v]) {
                cap_[pred[v] * n_ + v] -= 1;
                cap_[v * n_ + pred[v]] += 1;
            }
            ++total;
        }
        return total;
    }

private:
    int n_;
    std::vector<int> cap_;
};

// Nodes: in(v)=2v, out(v)=2v+1, source 2n, sink 2n+1.
SplitFlow split_network(const RateGraph& g, const std::set<int>& marked, int skip_cap) {
    int n = g.size();
    SplitFlow f(2 * n + 2);
    for (int v = 0; v < n; ++v) f.arc(2 * v, 2 * v + 1, v == skip_cap ? 2 : 1);
    for (auto [a, b] : g.edges()) {
        f.arc(2 * a + 1, 2 * b, 1);
        f.arc(2 * b + 1, 2 * a, 1);
    }
    for (int m : marked)
        if (m != skip_cap) f.arc(2 * m + 1, 2 * n + 1, 1);
    return f;
}

}  // namespace

PathsSubgraph paths_subgraph_parts(const RateGraph& g, const std::set<int>& marked) {
    PathsSubgraph out;
    int n = g.size();
    for (int x = 0; x < n; ++x) {
        if (marked.count(x)) { out.vertices.insert(x); continue; }
        auto f = split_network(g, marked, x);
        if (f.flow(2 * x + 1, 2 * n + 1, 2) == 2) out.vertices.insert(x);
    }
    for (int e = 0; e < int(g.edges().size()); ++e) {
        auto [a, b] = g.edges()[e];
        if (!out.vertices.count(a) || !out.vertices.count(b)) continue;
        // one path leaves through a, the other through b
        auto f = split_network(g, marked, -1);
        f.arc(2 * n, 2 * a, 1);
        f.arc(2 * n, 2 * b, 1);
        if (f.flow(2 * n, 2 * n + 1, 2) == 2) out.edges.insert(e);
    }
    return out;
}

RateGraph paths_subgraph(const RateGraph& g, const std::set<int>& marks_a, const std::set<int>& marks_b) {
    std::set<int> marked = marks_a;
    marked.insert(marks_b.begin(), marks_b.end());
    auto parts = paths_subgraph_parts(g, marked);
    return g.induced(parts.vertices, parts.edges);
}

std::vector<int> gauss_classes(const RateGraph& g) {
    std::vector<int> cls(g.size(), -2);
    int next = 0;
    for (int s = 0; s < g.size(); ++s) {
        if (g.has_mark(s, "P")) { cls[s] = -1; continue; }
        if (cls[s] != -2) continue;
        std::vector<int> stack{s};
        cls[s] = next;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : g.neighbors(v))
                if (cls[w] == -2 && !g.has_mark(w, "P")) { cls[w] = next; stack.push_back(w); }
        }
        ++next;
    }
    return cls;
}

Diagnostics validate_graph_map(const GraphMap& f) {
    Diagnostics d;
    const auto& s = *f.source;
    const auto& t = *f.target;
    std::string tag = f.name.empty() ? "map" : f.name;
    if (int(f.vmap.size()) != s.size()) {
        d.push_back(tag + ": vertex map covers " + std::to_string(f.vmap.size()) + " of " +
                    std::to_string(s.size()) + " vertices");
        return d;
    }
    std::vector<char> hit(t.size(), 0);
    for (int v = 0; v < s.size(); ++v) {
        int w = f.vmap[v];
        if (w < 0 || w >= t.size()) {
            d.push_back(tag + ": vertex '" + s.id(v) + "' has no image");
            continue;
        }
        hit[w] = 1;
        if (s.rate(v) != t.rate(w))
            d.push_back(tag + ": rate mismatch at '" + s.id(v) + "' (" + s.rate(v).str() + " -> " +
                        t.rate(w).str() + ")");
    }
    for (int w = 0; w < t.size(); ++w)
        if (!hit[w]) d.push_back(tag + ": not surjective, '" + t.id(w) + "' has no preimage");
    if (!d.empty()) return d;
    std::set<std::pair<int, int>> covered;
    for (auto [a, b] : s.edges()) {
        int fa = f.vmap[a], fb = f.vmap[b];
        if (!t.adjacent(fa, fb)) {
            d.push_back(tag + ": edge '" + s.id(a) + "'-'" + s.id(b) + "' does not map to an edge");
            continue;
        }
        covered.insert(std::minmax(fa, fb));
    }
    for (auto [a, b] : t.edges())
        if (!covered.count(std::minmax(a, b)))
            d.push_back(tag + ": edge '" + t.id(a) + "'-'" + t.id(b) + "' has no preimage");
    return d;
}

Diagnostics validate_cyclic_cover(const CyclicCover& c) {
    Diagnostics d = validate_graph_map(c.projection);
    const auto& s = *c.projection.source;
    const auto& t = *c.projection.target;
    std::string tag = (c.projection.name.empty() ? "cover" : c.projection.name) + " cover";
    int n = s.size();
    const auto& g = c.generator;
    if (int(g.size()) != n) {
        d.push_back(tag + ": generator has " + std::to_string(g.size()) + " entries for " + std::to_string(n) +
                    " vertices");
        return d;
    }
    std::vector<char> seen(n, 0);
    for (int v : g) {
        if (v < 0 || v >= n || seen[v]) {
            d.push_back(tag + ": generator is not a permutation");
            return d;
        }
        seen[v] = 1;
    }
    if (c.order < 1) d.push_back(tag + ": order must be positive");
    for (int v = 0; v < n; ++v) {
        if (s.rate(v) != s.rate(g[v]))
            d.push_back(tag + ": generator changes the rate of '" + s.id(v) + "'");
    }
    std::map<std::pair<int, int>, int> mult, image;
    for (auto [a, b] : s.edges()) {
        mult[std::minmax(a, b)]++;
        image[std::minmax(g[a], g[b])]++;
    }
    if (mult != image) d.push_back(tag + ": generator is not a graph automorphism");
    // order of the permutation = lcm of cycle lengths
    long ord = 1;
    std::vector<int> orbit_of(n, -1);
    std::vector<std::vector<int>> orbits;
    for (int v = 0; v < n; ++v) {
        if (orbit_of[v] >= 0) continue;
        std::vector<int> orb;
        for (int w = v; orbit_of[w] < 0; w = g[w]) {
            orbit_of[w] = int(orbits.size());
            orb.push_back(w);
        }
        ord = std::lcm(ord, long(orb.size()));
        orbits.push_back(orb);
    }
    if (c.order >= 1 && c.order % ord != 0)
        d.push_back(tag + ": generator order " + std::to_string(ord) + " does not divide " + std::to_string(c.order));
    if (int(c.projection.vmap.size()) != n) return d;
    std::vector<int> orbit_image(t.size(), -1);
    for (size_t o = 0; o < orbits.size(); ++o) {
        int img = c.projection.vmap[orbits[o][0]];
        for (int w : orbits[o])
            if (c.projection.vmap[w] != img)
                d.push_back(tag + ": projection not constant on the orbit of '" + s.id(orbits[o][0]) + "'");
        if (img < 0 || img >= t.size()) continue;
        if (orbit_image[img] >= 0)
            d.push_back(tag + ": two orbits over base vertex '" + t.id(img) + "'");
        orbit_image[img] = int(o);
    }
    // edge orbits against base edges, counted with multiplicity
    std::map<std::pair<int, int>, int> base_mult, orbit_count;
    for (auto [a, b] : t.edges()) base_mult[std::minmax(a, b)]++;
    std::set<std::pair<int, int>> visited;
    for (auto& [e, k] : mult) {
        if (visited.count(e)) continue;
        auto cur = e;
        while (!visited.count(cur)) {
            visited.insert(cur);
            cur = std::minmax(g[cur.first], g[cur.second]);
        }
        int pa = c.projection.vmap[e.first], pb = c.projection.vmap[e.second];
        orbit_count[std::minmax(pa, pb)] += k;
    }
    if (orbit_count != base_mult) d.push_back(tag + ": edge orbits do not match the base edges");
    return d;
}

Diagnostics check_commuting_square(const GraphMap& ehat, const GraphMap& chat, const GraphMap& e,
                                   const GraphMap& c) {
    if (ehat.source != chat.source || chat.target != e.source || ehat.target != c.source ||
        e.target != c.target)
        throw SourceMismatch("maps do not form a square Fhat -> {F, G} -> T");
    Diagnostics d;
    const auto& s = *ehat.source;
    for (int v = 0; v < s.size(); ++v) {
        int a = c.vmap[ehat.vmap[v]];
        int b = e.vmap[chat.vmap[v]];
        if (a != b)
            d.push_back("square does not commute at '" + s.id(v) + "' ('" + c.target->id(a) + "' vs '" +
                        e.target->id(b) + "')");
    }
    return d;
}

std::string rate_graph_dot(const RateGraph& g, const std::string& name, const std::set<int>& thick_edges) {
    std::ostringstream os;
    os << "graph \"" << name << "\" {\n";
    for (int v = 0; v < g.size(); ++v) {
        os << "  \"" << g.id(v) << "\" [label=<<b>" << g.rate(v).str() << "</b>>";
        if (g.has_mark(v, "L")) os << ", peripheries=2";
        if (g.has_mark(v, "P")) os << ", style=dashed";
        os << "];\n";
    }
    for (int e = 0; e < int(g.edges().size()); ++e) {
        auto [a, b] = g.edges()[e];
        os << "  \"" << g.id(a) << "\" -- \"" << g.id(b) << "\"";
        if (thick_edges.count(e)) os << " [penwidth=3]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace lipgerm
