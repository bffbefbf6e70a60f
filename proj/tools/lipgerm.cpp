#include "lipgerm/errors.hpp"
#include "lipgerm/lne.hpp"
#include "lipgerm/polynomial.hpp"
#include "lipgerm/surface.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lipgerm;
using ojson = nlohmann::ordered_json;

namespace {

struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(w) {}
};

struct Options {
    std::string input, output, delta, directives, pair, from, to, branch, graph, poly, fiber = "x";
    std::string mode = "gauss";
    bool json = false, dot = false, strict = false;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string x; std::getline(ss, x, sep);)
        if (!x.empty()) out.push_back(x);
    return out;
}

void emit(const Options& o, const std::string& text) {
    if (o.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output);
    if (!out) throw UsageError("cannot write '" + o.output + "'");
    out << text;
}

const PuiseuxBranch& branch_named(const SurfaceGerm& s, const std::string& id) {
    for (auto& b : s.branches)
        if (b.id == id) return b.branch;
    throw UsageError("no branch '" + id + "' in input");
}

// Tree from the document, or resolved from its branches plus flags.
ResolutionTree tree_of(const SurfaceGerm& s, const Options& o) {
    auto delta = o.delta.empty() ? s.delta : split(o.delta);
    auto directives = s.directives;
    for (auto& d : split(o.directives)) directives.push_back(BlowupDirective::parse(d));
    if (s.tree && o.delta.empty() && o.directives.empty()) return *s.tree;
    if (s.branches.empty()) throw UsageError("input has neither a tree nor branches");
    for (auto& d : delta) branch_named(s, d);
    auto t = resolve(s.branches, directives);
    if (!delta.empty()) t = separate_delta(mark_delta(t, delta));
    return t;
}

int cmd_resolve(const Options& o) {
    auto s = load_surface(o.input);
    auto t = tree_of(s, o);
    if (o.dot) {
        emit(o, tree_dot(t));
        return 0;
    }
    if (o.json || !o.output.empty()) {
        SurfaceGerm out = s;
        if (!o.delta.empty()) out.delta = split(o.delta);
        for (auto& d : split(o.directives)) out.directives.push_back(BlowupDirective::parse(d));
        out.tree = t;
        emit(o, serialize_surface(out));
        return 0;
    }
    auto nodes = classify_nodes(t);
    std::ostringstream os;
    for (auto& v : t.vertices()) {
        os << v.id << "  rate " << v.rate.str() << "  m " << v.m << "  selfint " << v.selfint;
        if (v.delta) os << "  delta";
        if (v.separation) os << "  separation";
        if (std::find(nodes.begin(), nodes.end(), v.id) != nodes.end()) os << "  node";
        for (auto& a : v.arrows) os << "  -> " << a;
        os << "\n";
    }
    for (auto [a, b] : t.edges()) os << t.vertex(a).id << " -- " << t.vertex(b).id << "\n";
    emit(o, os.str());
    return 0;
}

int cmd_contact(const Options& o) {
    auto s = load_surface(o.input);
    auto ids = split(o.pair);
    if (ids.size() != 2) throw UsageError("--pair expects two branch ids a,b");
    auto c = contact(branch_named(s, ids[0]), branch_named(s, ids[1]));
    if (o.json) {
        ojson j;
        j["pair"] = ids;
        j["contact"] = to_string(c);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << to_string(c) << "\n";
    }
    return 0;
}

int cmd_rates(const Options& o) {
    auto s = load_surface(o.input);
    auto t = tree_of(s, o);
    ojson j = ojson::object();
    ojson vs = ojson::object();
    for (auto& v : t.vertices()) vs[v.id] = inner_rate(t, v.id).str();
    j["inner"] = vs;
    ojson ps = ojson::object();
    for (auto& d : t.delta_branches()) ps[d] = polar_rate(t, d).str();
    j["polar"] = ps;
    if (o.json) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    for (auto& [k, v] : j["inner"].items()) std::cout << k << " " << v.get<std::string>() << "\n";
    for (auto& [k, v] : j["polar"].items()) std::cout << "polar " << k << " " << v.get<std::string>() << "\n";
    return 0;
}

const RateGraph& pick_graph(const SurfaceGerm& s, const Options& o, std::optional<RateGraph>& tgraph) {
    if (s.tree) tgraph = s.T();
    std::vector<std::pair<std::string, const std::optional<RateGraph>*>> all = {
        {"Fhat", &s.Fhat}, {"F", &s.F}, {"G", &s.G}, {"T", &tgraph}};
    for (auto& [name, g] : all) {
        if (!o.graph.empty() && name != o.graph) continue;
        if (!g->has_value()) continue;
        if (!o.graph.empty() || ((*g)->find(o.from) && (*g)->find(o.to))) return **g;
    }
    if (!o.graph.empty()) throw UsageError("input has no graph '" + o.graph + "'");
    throw UsageError("no graph in input contains both '" + o.from + "' and '" + o.to + "'");
}

int cmd_bottleneck(const Options& o) {
    auto s = load_surface(o.input);
    std::optional<RateGraph> tg;
    const RateGraph& g = pick_graph(s, o, tg);
    auto a = g.find(o.from), b = g.find(o.to);
    if (!a || !b) throw UsageError("unknown vertex '" + (a ? o.to : o.from) + "'");
    auto bn = bottleneck(g, *a, *b);
    std::vector<std::string> path;
    for (int v : bn.path) path.push_back(g.id(v));
    if (o.json) {
        ojson j;
        j["from"] = o.from;
        j["to"] = o.to;
        j["bottleneck"] = bn.value.str();
        j["path"] = path;
        j["minimizer"] = g.id(bn.nu0);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << bn.value.str() << "\n";
        for (size_t i = 0; i < path.size(); ++i) std::cout << (i ? " - " : "") << path[i];
        std::cout << "\n";
    }
    return 0;
}

int cmd_slices(const Options& o) {
    auto s = load_surface(o.input);
    auto ids = split(o.branch);
    if (ids.empty() || ids.size() > 2) throw UsageError("--branch expects a or a,b");
    const auto& b1 = branch_named(s, ids[0]);
    const auto& b2 = branch_named(s, ids.size() == 2 ? ids[1] : ids[0]);
    auto s1 = slices(b1), s2 = slices(b2);
    ojson rows = ojson::array();
    for (auto& x : s1)
        for (auto& y : s2) {
            if (ids.size() == 1 && y.sheet <= x.sheet) continue;
            ojson r;
            r["sheets"] = {x.sheet, y.sheet};
            r["contact"] = to_string(slice_contact(x, y));
            rows.push_back(r);
        }
    if (o.json) {
        ojson j;
        j["branches"] = ids;
        j["sheets"] = {s1.size(), s2.size()};
        j["pairs"] = rows;
        if (ids.size() == 2) j["complex_contact"] = to_string(complex_contact_via_slices(b1, b2));
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << ids[0] << ": " << s1.size() << " sheets\n";
    for (auto& r : rows)
        std::cout << "  (" << r["sheets"][0] << "," << r["sheets"][1] << ")  " << r["contact"].get<std::string>() << "\n";
    if (ids.size() == 2) std::cout << "max " << to_string(complex_contact_via_slices(b1, b2)) << "\n";
    return 0;
}

int cmd_discriminant(const Options& o) {
    if (o.fiber.size() != 1) throw UsageError("--fiber expects a single variable name");
    Polynomial f;
    try {
        f = Polynomial::parse(o.poly);
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
    auto d = discriminant_of_projection(f, Polynomial::var_index(o.fiber[0]));
    if (o.json) {
        ojson j;
        j["polynomial"] = f.str();
        j["fiber"] = o.fiber;
        j["discriminant"] = d.str();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << d.str() << "\n";
    }
    return 0;
}

int cmd_validate(const Options& o) {
    Diagnostics diags;
    try {
        diags = validate(load_surface(o.input));
    } catch (const SchemaError& e) {
        diags.push_back(e.what());
    }
    if (o.json) {
        ojson j;
        j["valid"] = diags.empty();
        j["diagnostics"] = diags;
        std::cout << j.dump(2) << "\n";
    } else if (diags.empty()) {
        std::cout << "valid\n";
    } else {
        for (auto& d : diags) std::cout << d << "\n";
    }
    return diags.empty() ? 0 : 1;
}

int cmd_check_lne(const Options& o) {
    auto mode = parse_mode(o.mode);
    auto s = load_surface(o.input);
    auto diags = validate(s);
    if (!diags.empty()) {
        for (auto& d : diags) std::cerr << d << "\n";
        return 1;
    }
    auto v = check_lne(s, mode, o.strict);
    if (o.json || !o.output.empty()) {
        emit(o, verdict_json(v));
    } else {
        std::cout << to_string(v.result) << "\n";
        for (auto& w : v.witnesses) std::cout << "  (" << w.condition << ") at " << w.node << ": " << w.details << "\n";
        std::cout << v.pairs.size() << " principal pairs checked\n";
    }
    return v.result == LneResult::NOT_LNE ? 1 : 0;
}

int cmd_export_dot(const Options& o) {
    auto s = load_surface(o.input);
    std::string out;
    if (s.tree || !s.branches.empty()) out += tree_dot(tree_of(s, o));
    if (s.G) out += rate_graph_dot(*s.G, "G");
    if (s.F) out += rate_graph_dot(*s.F, "F");
    if (s.Fhat) {
        std::set<int> thick;
        if (!s.Fhat->marked("L").empty()) thick = fhat_prime(s).edges;
        out += rate_graph_dot(*s.Fhat, "Fhat", thick);
    }
    if (out.empty()) throw UsageError("nothing to export");
    emit(o, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lipgerm: Lipschitz geometry of plane-curve and surface germs"};
    app.require_subcommand(1, 1);
    Options o;

    auto input = [&](CLI::App* c) { c->add_option("-i,--input", o.input, "input JSON")->required()->check(CLI::ExistingFile); };
    auto json = [&](CLI::App* c) { c->add_flag("--json", o.json, "machine-readable output"); };
    auto treeflags = [&](CLI::App* c) {
        c->add_option("--delta", o.delta, "comma-separated Δ branch ids");
        c->add_option("--directives", o.directives, "comma-separated blow-up directives");
    };

    auto* resolve_c = app.add_subcommand("resolve", "resolution tree of a branch set");
    input(resolve_c);
    json(resolve_c);
    treeflags(resolve_c);
    resolve_c->add_option("-o,--output", o.output, "write the document with its tree");
    resolve_c->add_flag("--dot", o.dot, "emit DOT");

    auto* contact_c = app.add_subcommand("contact", "contact exponent of two branches");
    input(contact_c);
    json(contact_c);
    contact_c->add_option("--pair", o.pair, "a,b")->required();

    auto* rates_c = app.add_subcommand("rates", "inner and polar rates");
    input(rates_c);
    json(rates_c);
    treeflags(rates_c);

    auto* bottleneck_c = app.add_subcommand("bottleneck", "bottleneck contact between two vertices");
    input(bottleneck_c);
    json(bottleneck_c);
    bottleneck_c->add_option("--from", o.from)->required();
    bottleneck_c->add_option("--to", o.to)->required();
    bottleneck_c->add_option("--graph", o.graph, "T, G, F or Fhat")->check(CLI::IsMember({"T", "G", "F", "Fhat"}));

    auto* slices_c = app.add_subcommand("slices", "real-slice sheets and their contacts");
    input(slices_c);
    json(slices_c);
    slices_c->add_option("--branch", o.branch, "a or a,b")->required();

    auto* disc_c = app.add_subcommand("discriminant", "discriminant of a linear projection");
    json(disc_c);
    disc_c->add_option("-f,--polynomial", o.poly)->required();
    disc_c->add_option("--fiber", o.fiber, "variable projected away");

    auto* validate_c = app.add_subcommand("validate", "validate a surface document");
    input(validate_c);
    json(validate_c);

    auto* lne_c = app.add_subcommand("check-lne", "test-curve criterion for normal embedding");
    input(lne_c);
    json(lne_c);
    lne_c->add_option("--mode", o.mode, "gauss or annotated");
    lne_c->add_flag("--strict-theorem", o.strict, "ignore Δ-node failures");
    lne_c->add_option("-o,--output", o.output, "write the JSON report");

    auto* dot_c = app.add_subcommand("export-dot", "DOT for every graph in a document");
    input(dot_c);
    treeflags(dot_c);
    dot_c->add_option("-o,--output", o.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*resolve_c) return cmd_resolve(o);
        if (*contact_c) return cmd_contact(o);
        if (*rates_c) return cmd_rates(o);
        if (*bottleneck_c) return cmd_bottleneck(o);
        if (*slices_c) return cmd_slices(o);
        if (*disc_c) return cmd_discriminant(o);
        if (*validate_c) return cmd_validate(o);
        if (*lne_c) return cmd_check_lne(o);
        if (*dot_c) return cmd_export_dot(o);
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const InvalidMode& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const InvalidDirective& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
