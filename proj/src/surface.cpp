#include "lipgerm/surface.hpp"

#include "lipgerm/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace lipgerm {

using ojson = nlohmann::ordered_json;

const std::vector<LiftEntry>* SurfaceGerm::lifts_at(const std::string& node) const {
    for (auto& [n, es] : lifts)
        if (n == node) return &es;
    return nullptr;
}

namespace {

// Field access with a dotted path for error messages.
struct Reader {
    const ojson& j;
    std::string path;

    Reader at(const std::string& key) const {
        if (!j.is_object()) fail("expected an object");
        if (!j.contains(key)) throw SchemaError(path + ": missing field '" + key + "'");
        return {j.at(key), path.empty() ? key : path + "." + key};
    }
    bool has(const std::string& key) const { return j.is_object() && j.contains(key); }
    Reader idx(size_t i) const { return {j.at(i), path + "[" + std::to_string(i) + "]"}; }
    [[noreturn]] void fail(const std::string& what) const { throw SchemaError((path.empty() ? "document" : path) + ": " + what); }

    std::string str() const {
        if (!j.is_string()) fail("expected a string");
        return j.get<std::string>();
    }
    long integer() const {
        if (!j.is_number_integer()) fail("expected an integer");
        return j.get<long>();
    }
    bool boolean() const {
        if (!j.is_boolean()) fail("expected true/false");
        return j.get<bool>();
    }
    Rational rational() const {
        try {
            return Rational::parse(str());
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    PuiseuxBranch branch() const {
        try {
            return PuiseuxBranch::parse(str());
        } catch (const ParseError& e) {
            fail(e.what());
        }
    }
    size_t size() const {
        if (!j.is_array()) fail("expected an array");
        return j.size();
    }
    std::vector<std::string> strings() const {
        std::vector<std::string> out;
        for (size_t i = 0; i < size(); ++i) out.push_back(idx(i).str());
        return out;
    }
};

RateGraph read_graph(const Reader& r) {
    RateGraph g;
    auto vs = r.at("vertices");
    for (size_t i = 0; i < vs.size(); ++i) {
        auto v = vs.idx(i);
        std::set<std::string> marks;
        if (v.has("marks"))
            for (auto& m : v.at("marks").strings()) marks.insert(m);
        Rational rate = v.at("rate").rational();
        if (rate.sign() <= 0) v.at("rate").fail("rates must be positive");
        try {
            g.add_vertex(v.at("id").str(), rate, marks);
        } catch (const SchemaError& e) {
            v.fail(e.what());
        }
    }
    auto es = r.at("edges");
    for (size_t i = 0; i < es.size(); ++i) {
        auto e = es.idx(i);
        if (e.size() != 2) e.fail("an edge is a pair of vertex ids");
        try {
            g.add_edge(e.idx(0).str(), e.idx(1).str());
        } catch (const SchemaError& ex) {
            e.fail(ex.what());
        }
    }
    return g;
}

ojson write_graph(const RateGraph& g) {
    ojson vs = ojson::array();
    for (int v = 0; v < g.size(); ++v) {
        ojson x;
        x["id"] = g.id(v);
        x["rate"] = g.rate(v).str();
        x["marks"] = ojson(std::vector<std::string>(g.marks(v).begin(), g.marks(v).end()));
        vs.push_back(x);
    }
    ojson es = ojson::array();
    for (auto [a, b] : g.edges()) es.push_back({g.id(a), g.id(b)});
    ojson out;
    out["vertices"] = vs;
    out["edges"] = es;
    return out;
}

ResolutionTree read_tree(const Reader& r, const std::vector<NamedBranch>& branches,
                         const std::vector<std::string>& delta) {
    ResolutionTree t;
    std::string root = r.at("root").str();
    auto vs = r.at("vertices");
    std::vector<std::pair<std::string, int>> arrows;
    for (size_t i = 0; i < vs.size(); ++i) {
        auto v = vs.idx(i);
        ResolutionVertex x;
        x.id = v.at("id").str();
        x.rate = v.at("rate").rational();
        x.m = v.at("m").integer();
        if (x.m < 1) v.at("m").fail("multiplicity must be positive");
        x.selfint = v.at("selfint").integer();
        x.delta = v.has("delta") && v.at("delta").boolean();
        x.separation = v.has("separation") && v.at("separation").boolean();
        x.root = x.id == root;
        if (v.has("prefix")) x.prefix = v.at("prefix").branch();
        int idx;
        try {
            idx = t.add_vertex(x);
        } catch (const SchemaError& e) {
            v.fail(e.what());
        }
        if (v.has("arrows"))
            for (auto& a : v.at("arrows").strings()) arrows.emplace_back(a, idx);
    }
    if (!t.find(root)) r.at("root").fail("root '" + root + "' is not a tree vertex");
    auto es = r.at("edges");
    for (size_t i = 0; i < es.size(); ++i) {
        auto e = es.idx(i);
        if (e.size() != 2) e.fail("an edge is a pair of vertex ids");
        auto a = t.find(e.idx(0).str()), b = t.find(e.idx(1).str());
        if (!a || !b) e.fail("unknown tree vertex");
        t.add_edge(*a, *b);
    }
    for (auto& b : branches) t.branches()[b.id] = b.branch;
    for (auto& [a, v] : arrows) {
        if (!t.branches().count(a)) r.at("vertices").fail("arrow names unknown branch '" + a + "'");
        t.attach(a, v);
    }
    t.set_delta_branches(delta);
    t.link_parents();
    return t;
}

ojson write_tree(const ResolutionTree& t) {
    ojson out;
    out["root"] = t.size() ? t.vertex(t.root()).id : "";
    ojson vs = ojson::array();
    for (auto& v : t.vertices()) {
        ojson x;
        x["id"] = v.id;
        x["rate"] = v.rate.str();
        x["m"] = v.m;
        x["selfint"] = v.selfint;
        x["delta"] = v.delta;
        x["separation"] = v.separation;
        x["arrows"] = ojson(v.arrows);
        x["prefix"] = v.prefix.str();
        vs.push_back(x);
    }
    out["vertices"] = vs;
    ojson es = ojson::array();
    for (auto [a, b] : t.edges()) es.push_back({t.vertex(a).id, t.vertex(b).id});
    out["edges"] = es;
    return out;
}

const char* kMapNames[] = {"E", "C", "Ehat", "Chat"};
const char* kCoverNames[] = {"F", "Fhat"};

}  // namespace

SurfaceGerm parse_surface(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    Reader r{j, ""};
    if (!j.is_object()) r.fail("expected a JSON object");
    if (r.at("schema").str() != "lipgerm/1") r.at("schema").fail("unsupported schema (expected \"lipgerm/1\")");
    SurfaceGerm s;
    if (r.has("mult")) {
        s.mult = r.at("mult").integer();
        if (s.mult < 1) r.at("mult").fail("multiplicity must be positive");
    }
    if (r.has("branches")) {
        auto b = r.at("branches");
        if (!b.j.is_object()) b.fail("expected an object of id -> literal");
        for (auto& [id, lit] : b.j.items()) s.branches.push_back({id, Reader{lit, b.path + "." + id}.branch()});
    }
    if (r.has("delta")) s.delta = r.at("delta").strings();
    for (auto& d : s.delta) {
        bool known = std::any_of(s.branches.begin(), s.branches.end(), [&](auto& b) { return b.id == d; });
        if (!known) r.at("delta").fail("unknown branch '" + d + "'");
    }
    if (r.has("directives")) {
        auto ds = r.at("directives");
        for (size_t i = 0; i < ds.size(); ++i) {
            try {
                s.directives.push_back(BlowupDirective::parse(ds.idx(i).str()));
            } catch (const ParseError& e) {
                ds.idx(i).fail(e.what());
            }
        }
    }
    if (r.has("tree")) s.tree = read_tree(r.at("tree"), s.branches, s.delta);
    if (r.has("graphs")) {
        auto gs = r.at("graphs");
        for (auto& [name, g] : gs.j.items()) {
            if (name != "G" && name != "F" && name != "Fhat") gs.fail("unknown graph '" + name + "'");
            RateGraph rg = read_graph(Reader{g, gs.path + "." + name});
            (name == "G" ? s.G : name == "F" ? s.F : s.Fhat) = std::move(rg);
        }
    }
    if (r.has("maps")) {
        auto ms = r.at("maps");
        for (auto& [name, m] : ms.j.items()) {
            Reader mr{m, ms.path + "." + name};
            if (!m.is_object()) mr.fail("expected a vertex dictionary");
            if (std::find(std::begin(kMapNames), std::end(kMapNames), name) == std::end(kMapNames))
                ms.fail("unknown map '" + name + "'");
            VertexDict d;
            for (auto& [k, v] : m.items()) d[k] = Reader{v, mr.path + "." + k}.str();
            s.maps[name] = d;
        }
    }
    if (r.has("covers")) {
        auto cs = r.at("covers");
        for (auto& [name, c] : cs.j.items()) {
            if (name != "F" && name != "Fhat") cs.fail("unknown cover '" + name + "'");
            Reader cr{c, cs.path + "." + name};
            CoverData cd;
            cd.order = cr.at("order").integer();
            cd.generator = cr.at("generator").strings();
            s.covers[name] = cd;
        }
    }
    if (r.has("lifts")) {
        auto ls = r.at("lifts");
        if (!ls.j.is_object()) ls.fail("expected an object of node -> entries");
        for (auto& [node, arr] : ls.j.items()) {
            Reader nr{arr, ls.path + "." + node};
            std::vector<LiftEntry> es;
            for (size_t i = 0; i < nr.size(); ++i) {
                auto e = nr.idx(i);
                LiftEntry le;
                le.id = e.at("id").str();
                le.fhat = e.at("fhat").strings();
                le.g = e.at("g").str();
                le.degree = e.at("degree").integer();
                le.mult_hat = e.at("mult_hat").integer();
                if (le.degree < 1 || le.mult_hat < 1) e.fail("degree and mult_hat must be positive");
                if (e.has("qout")) {
                    auto q = e.at("qout");
                    if (!q.j.is_object()) q.fail("expected an object of entry id -> rate");
                    for (auto& [k, v] : q.j.items()) le.qout[k] = Reader{v, q.path + "." + k}.rational();
                }
                es.push_back(le);
            }
            s.lifts.emplace_back(node, es);
        }
    }
    if (r.has("notes")) s.notes = r.at("notes").strings();
    return s;
}

SurfaceGerm load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_surface(ss.str());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

std::string serialize_surface(const SurfaceGerm& s) {
    ojson j;
    j["schema"] = "lipgerm/1";
    if (s.mult) j["mult"] = s.mult;
    // graph-only documents carry no curve sections
    if (!s.branches.empty()) {
        ojson br = ojson::object();
        for (auto& b : s.branches) br[b.id] = b.branch.str();
        j["branches"] = br;
        j["delta"] = ojson(s.delta);
        ojson ds = ojson::array();
        for (auto& d : s.directives) ds.push_back(d.str());
        j["directives"] = ds;
    }
    if (s.tree) j["tree"] = write_tree(*s.tree);
    if (s.G || s.F || s.Fhat) {
        ojson gs = ojson::object();
        if (s.G) gs["G"] = write_graph(*s.G);
        if (s.F) gs["F"] = write_graph(*s.F);
        if (s.Fhat) gs["Fhat"] = write_graph(*s.Fhat);
        j["graphs"] = gs;
    }
    if (!s.maps.empty()) {
        // dictionaries follow the source graph's vertex order
        ojson ms = ojson::object();
        for (const char* name : kMapNames) {
            auto it = s.maps.find(name);
            if (it == s.maps.end()) continue;
            std::string n = name;
            const std::optional<RateGraph>& src = (n == "E") ? s.F : (n == "C") ? s.G : s.Fhat;
            ojson d = ojson::object();
            std::set<std::string> done;
            if (src)
                for (int v = 0; v < src->size(); ++v) {
                    auto f = it->second.find(src->id(v));
                    if (f != it->second.end()) { d[f->first] = f->second; done.insert(f->first); }
                }
            for (auto& [k, v] : it->second)
                if (!done.count(k)) d[k] = v;
            ms[name] = d;
        }
        j["maps"] = ms;
    }
    if (!s.covers.empty()) {
        ojson cs = ojson::object();
        for (const char* name : kCoverNames) {
            auto it = s.covers.find(name);
            if (it == s.covers.end()) continue;
            ojson c;
            c["order"] = it->second.order;
            c["generator"] = ojson(it->second.generator);
            cs[name] = c;
        }
        j["covers"] = cs;
    }
    if (!s.lifts.empty()) {
        ojson ls = ojson::object();
        for (auto& [node, es] : s.lifts) {
            ojson arr = ojson::array();
            for (auto& e : es) {
                ojson x;
                x["id"] = e.id;
                x["fhat"] = ojson(e.fhat);
                x["g"] = e.g;
                x["degree"] = e.degree;
                x["mult_hat"] = e.mult_hat;
                ojson q = ojson::object();
                for (auto& [k, v] : e.qout) q[k] = v.str();
                x["qout"] = q;
                arr.push_back(x);
            }
            ls[node] = arr;
        }
        j["lifts"] = ls;
    }
    if (!s.notes.empty()) j["notes"] = ojson(s.notes);
    return j.dump(2) + "\n";
}

GraphMap graph_map(const VertexDict& d, const RateGraph& src, const RateGraph& tgt, const std::string& name) {
    GraphMap f{&src, &tgt, std::vector<int>(src.size(), -1), name};
    for (int v = 0; v < src.size(); ++v) {
        auto it = d.find(src.id(v));
        if (it == d.end()) continue;
        if (auto w = tgt.find(it->second)) f.vmap[v] = *w;
    }
    return f;
}

CyclicCover cyclic_cover(const CoverData& c, const GraphMap& projection) {
    CyclicCover out{projection, c.order, {}};
    for (auto& id : c.generator) {
        auto v = projection.source->find(id);
        out.generator.push_back(v ? *v : -1);
    }
    return out;
}

namespace {

void check_tree(const SurfaceGerm& s, Diagnostics& d) {
    const auto& t = *s.tree;
    int roots = 0;
    for (auto& v : t.vertices()) roots += v.root;
    if (roots != 1) {
        d.push_back("tree: expected exactly one root, found " + std::to_string(roots));
        return;
    }
    if (int(t.edges().size()) != t.size() - 1 || !t.as_rate_graph().connected())
        d.push_back("tree: not a connected tree");
    const auto& r = t.vertex(t.root());
    if (r.rate != Rational(1)) d.push_back("tree: root rate is " + r.rate.str() + ", expected 1");
    if (r.m != 1) d.push_back("tree: root multiplicity is " + std::to_string(r.m) + ", expected 1");
    for (auto& v : t.vertices()) {
        if (v.selfint > -1) d.push_back("tree: self-intersection of '" + v.id + "' is " + std::to_string(v.selfint));
        if (v.parent && !(t.vertex(t.at(*v.parent)).rate < v.rate))
            d.push_back("tree: rate does not increase from '" + *v.parent + "' to '" + v.id + "'");
    }
    for (auto& id : s.delta) {
        auto it = t.attachments().find(id);
        if (it == t.attachments().end()) d.push_back("tree: Δ-branch '" + id + "' has no arrow");
        else if (!t.vertex(it->second).delta)
            d.push_back("tree: '" + t.vertex(it->second).id + "' carries Δ-branch '" + id + "' but is not a Δ-node");
    }
    for (auto [a, b] : t.edges())
        if (t.vertex(a).delta && t.vertex(b).delta)
            d.push_back("tree: adjacent Δ-nodes '" + t.vertex(a).id + "' and '" + t.vertex(b).id + "'");
}

void check_lifts(const SurfaceGerm& s, const RateGraph& T, Diagnostics& d) {
    const auto& t = *s.tree;
    auto E = graph_map(s.maps.at("E"), *s.F, T, "E");
    auto Chat = graph_map(s.maps.at("Chat"), *s.Fhat, *s.F, "Chat");
    auto Ehat = graph_map(s.maps.at("Ehat"), *s.Fhat, *s.G, "Ehat");
    std::set<std::string> ids;
    for (auto& [node, es] : s.lifts) {
        auto nv = t.find(node);
        if (!nv) {
            d.push_back("lifts: '" + node + "' is not a tree vertex");
            continue;
        }
        if (!is_node(t, *nv)) d.push_back("lifts: '" + node + "' is not a node");
        long sum = 0;
        std::set<std::string> here;
        for (auto& e : es) here.insert(e.id);
        for (auto& e : es) {
            std::string tag = "lifts: " + node + "/" + e.id;
            if (!ids.insert(e.id).second) d.push_back(tag + ": duplicate entry id");
            sum += e.degree;
            long m = t.vertex(*nv).m;
            if (e.mult_hat != e.degree * m)
                d.push_back(tag + ": mult_hat " + std::to_string(e.mult_hat) + " != degree " +
                            std::to_string(e.degree) + " x m " + std::to_string(m));
            if (e.fhat.empty()) d.push_back(tag + ": empty fhat list");
            else if (long(e.fhat.size()) != e.mult_hat)
                d.push_back(tag + ": " + std::to_string(e.fhat.size()) + " fhat vertices for mult_hat " +
                            std::to_string(e.mult_hat));
            auto gv = s.G->find(e.g);
            if (!gv) d.push_back(tag + ": unknown G vertex '" + e.g + "'");
            for (auto& f : e.fhat) {
                auto fv = s.Fhat->find(f);
                if (!fv) {
                    d.push_back(tag + ": unknown Fhat vertex '" + f + "'");
                    continue;
                }
                int img = Chat.vmap[*fv] < 0 ? -1 : E.vmap[Chat.vmap[*fv]];
                if (img != *nv) d.push_back(tag + ": '" + f + "' does not lie over '" + node + "'");
                if (gv && Ehat.vmap[*fv] != *gv) d.push_back(tag + ": '" + f + "' does not map to g '" + e.g + "'");
            }
            for (auto& [k, q] : e.qout) {
                if (!here.count(k)) {
                    d.push_back(tag + ": qout names '" + k + "', not an entry of this node");
                    continue;
                }
                for (auto& o : es)
                    if (o.id == k) {
                        auto back = o.qout.find(e.id);
                        if (back != o.qout.end() && back->second != q)
                            d.push_back(tag + ": qout with '" + k + "' disagrees with the reverse annotation");
                        // q_out >= q_inn always
                        Rational qi(0);
                        bool ok = true;
                        for (auto& a : e.fhat)
                            for (auto& b : o.fhat) {
                                auto va = s.Fhat->find(a), vb = s.Fhat->find(b);
                                if (!va || !vb) { ok = false; continue; }
                                try {
                                    qi = std::max(qi, bottleneck(*s.Fhat, *va, *vb).value);
                                } catch (const Disconnected&) {
                                    ok = false;
                                }
                            }
                        if (ok && q < qi)
                            d.push_back(tag + ": annotated q_out " + q.str() + " with '" + k + "' is below q_inn " +
                                        qi.str());
                    }
            }
        }
        if (sum != s.mult)
            d.push_back("lifts: degrees at '" + node + "' sum to " + std::to_string(sum) + ", expected mult " +
                        std::to_string(s.mult));
    }
    for (int v = 0; v < t.size(); ++v)
        if (is_node(t, v) && !s.lifts_at(t.vertex(v).id))
            d.push_back("lifts: node '" + t.vertex(v).id + "' has no lift entries");
}

}  // namespace

Diagnostics validate(const SurfaceGerm& s) {
    Diagnostics d;
    if (!s.tree) d.push_back("missing tree");
    if (!s.G) d.push_back("missing graph G");
    if (!s.F) d.push_back("missing graph F");
    if (!s.Fhat) d.push_back("missing graph Fhat");
    if (s.mult < 1) d.push_back("missing mult");
    for (const char* m : kMapNames)
        if (!s.maps.count(m)) d.push_back(std::string("missing map ") + m);
    for (const char* c : kCoverNames)
        if (!s.covers.count(c)) d.push_back(std::string("missing cover ") + c);
    if (!d.empty()) return d;

    check_tree(s, d);
    RateGraph T = s.T();
    auto E = graph_map(s.maps.at("E"), *s.F, T, "E");
    auto C = graph_map(s.maps.at("C"), *s.G, T, "C");
    auto Ehat = graph_map(s.maps.at("Ehat"), *s.Fhat, *s.G, "Ehat");
    auto Chat = graph_map(s.maps.at("Chat"), *s.Fhat, *s.F, "Chat");
    for (auto& [name, dict] : s.maps) {
        const RateGraph& src = name == "E" ? *s.F : name == "C" ? *s.G : *s.Fhat;
        const RateGraph& tgt = name == "E" || name == "C" ? T : name == "Ehat" ? *s.G : *s.F;
        for (auto& [k, v] : dict) {
            if (!src.find(k)) d.push_back(name + ": unknown source vertex '" + k + "'");
            if (!tgt.find(v)) d.push_back(name + ": unknown target vertex '" + v + "'");
        }
    }
    size_t before = d.size();
    for (auto* f : {&E, &C, &Ehat, &Chat})
        for (auto& x : validate_graph_map(*f)) d.push_back(x);
    auto cf = validate_cyclic_cover(cyclic_cover(s.covers.at("F"), E));
    auto ch = validate_cyclic_cover(cyclic_cover(s.covers.at("Fhat"), Ehat));
    d.insert(d.end(), cf.begin(), cf.end());
    d.insert(d.end(), ch.begin(), ch.end());
    long k = s.covers.at("F").order, kh = s.covers.at("Fhat").order;
    if (kh != k * s.mult)
        d.push_back("covers: Fhat order " + std::to_string(kh) + " != F order " + std::to_string(k) + " x mult " +
                    std::to_string(s.mult));
    if (d.size() != before) return d;  // later checks assume total maps
    for (auto& x : check_commuting_square(Ehat, Chat, E, C)) d.push_back(x);
    check_lifts(s, T, d);
    return d;
}

PathsSubgraph fhat_prime(const SurfaceGerm& s) {
    std::set<int> marked;
    for (int v : s.Fhat->marked("L")) marked.insert(v);
    for (int v : s.Fhat->marked("P")) marked.insert(v);
    return paths_subgraph_parts(*s.Fhat, marked);
}

std::vector<LiftEntry> principal_components(const SurfaceGerm& s, const std::string& node, const PathsSubgraph* prime) {
    auto v = s.tree->find(node);
    if (!v || !is_node(*s.tree, *v)) throw NotANode("'" + node + "' is not a node of T");
    PathsSubgraph local;
    if (!prime) {
        local = fhat_prime(s);
        prime = &local;
    }
    std::vector<LiftEntry> out;
    const auto* es = s.lifts_at(node);
    if (!es) return out;
    for (auto& e : *es)
        for (auto& f : e.fhat) {
            auto fv = s.Fhat->find(f);
            if (fv && prime->vertices.count(*fv)) {
                out.push_back(e);
                break;
            }
        }
    return out;
}

std::vector<std::pair<std::string, PuiseuxBranch>> nodal_test_curves(const SurfaceGerm& s) {
    std::vector<std::pair<std::string, PuiseuxBranch>> out;
    const auto& t = *s.tree;
    for (auto& id : classify_nodes(t)) out.emplace_back(id, curvette(t, id, "test_" + id));
    return out;
}

SurfaceGerm scale_rates(const SurfaceGerm& s, const Rational& factor) {
    if (factor.sign() <= 0) throw ValidationError("scale factor must be positive");
    SurfaceGerm out = s;
    if (out.tree)
        for (int v = 0; v < out.tree->size(); ++v) out.tree->vertex(v).rate *= factor;
    for (auto* g : {&out.G, &out.F, &out.Fhat})
        if (*g) **g = (*g)->scaled(factor);
    for (auto& [node, es] : out.lifts)
        for (auto& e : es)
            for (auto& [k, q] : e.qout) q *= factor;
    return out;
}

}  // namespace lipgerm
