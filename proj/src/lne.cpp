#include "lipgerm/lne.hpp"

#include "lipgerm/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <exception>
#include <set>

namespace lipgerm {

Mode parse_mode(const std::string& s) {
    if (s == "gauss") return Mode::Gauss;
    if (s == "annotated") return Mode::Annotated;
    throw InvalidMode("unknown mode '" + s + "' (expected gauss or annotated)");
}

std::string to_string(Mode m) { return m == Mode::Gauss ? "gauss" : "annotated"; }

std::string to_string(PairStatus s) {
    switch (s) {
        case PairStatus::Holds: return "holds";
        case PairStatus::Fails: return "fails";
        default: return "undecided";
    }
}

std::string to_string(LneResult r) {
    switch (r) {
        case LneResult::LNE: return "LNE";
        case LneResult::NOT_LNE: return "NOT_LNE";
        default: return "UNDECIDED";
    }
}

namespace {

// Everything the combinatorial procedure reads, computed once per surface.
struct Context {
    const SurfaceGerm& s;
    const ResolutionTree& t;
    const RateGraph& fh;
    std::vector<int> over;  // Fhat vertex -> tree vertex under E o Chat
    std::vector<int> cls;   // Gauss class, -1 on P-nodes
    PathsSubgraph prime;

    explicit Context(const SurfaceGerm& surface)
        : s(surface), t(*surface.tree), fh(*surface.Fhat), cls(gauss_classes(*surface.Fhat)),
          prime(fhat_prime(surface)) {
        const auto& E = s.maps.at("E");
        const auto& Chat = s.maps.at("Chat");
        over.assign(fh.size(), -1);
        for (int v = 0; v < fh.size(); ++v) {
            auto f = Chat.find(fh.id(v));
            if (f == Chat.end()) continue;
            auto tv = E.find(f->second);
            if (tv == E.end()) continue;
            if (auto x = t.find(tv->second)) over[v] = *x;
        }
    }

    bool is_p(int v) const { return fh.has_mark(v, "P"); }
    const std::string& tid(int j) const { return t.vertex(j).id; }
    std::string cls_name(int v) const { return is_p(v) ? "P" : "K" + std::to_string(cls[v] + 1); }
};

struct Outcome {
    PairStatus status;
    std::vector<std::string> trace;
};

Outcome agree(const std::vector<Outcome>& outs, const std::string& where, std::vector<std::string> trace) {
    if (outs.empty()) {
        trace.push_back(where + ": no partner vertices");
        return {PairStatus::Undecided, trace};
    }
    for (auto& o : outs) trace.insert(trace.end(), o.trace.begin(), o.trace.end());
    bool holds = false, fails = false, undecided = false;
    for (auto& o : outs) {
        holds |= o.status == PairStatus::Holds;
        fails |= o.status == PairStatus::Fails;
        undecided |= o.status == PairStatus::Undecided;
    }
    if (holds && fails) throw ValidationError(where + ": partner candidates disagree (inconsistent fixture)");
    if (undecided) {
        trace.push_back(where + ": some partner candidates undecided");
        return {PairStatus::Undecided, trace};
    }
    return {outs[0].status, trace};
}

// (a): distinct Gauss classes at a non-Δ node.
Outcome test_a(const Context& c, int j, int v1, int v2) {
    std::string at = "(a) at " + c.tid(j) + ": " + c.fh.id(v1) + " [" + c.cls_name(v1) + "] vs " + c.fh.id(v2) +
                     " [" + c.cls_name(v2) + "]";
    if (c.is_p(v1) || c.is_p(v2)) return {PairStatus::Undecided, {at + " -> undecided (P-node endpoint)"}};
    if (c.cls[v1] != c.cls[v2]) return {PairStatus::Holds, {at + " -> distinct classes, holds"}};
    return {PairStatus::Fails, {at + " -> same Gauss class, fails"}};
}

// Non-Δ nodes reached from a Δ-node through strings of non-nodes, with the tree path.
std::vector<std::vector<int>> string_targets(const Context& c, int j) {
    std::vector<std::vector<int>> out;
    for (int n : c.t.neighbors(j)) {
        std::vector<int> path{j, n};
        int prev = j, cur = n;
        bool found = false;
        while (true) {
            if (is_node(c.t, cur)) {
                found = !c.t.vertex(cur).delta;
                break;
            }
            auto nb = c.t.neighbors(cur);
            if (nb.size() != 2) break;
            int next = nb[0] == prev ? nb[1] : nb[0];
            prev = cur;
            cur = next;
            path.push_back(cur);
        }
        if (found) out.push_back(path);
    }
    return out;
}

std::vector<int> lift_path(const Context& c, int v, const std::vector<int>& path) {
    std::set<int> frontier{v};
    for (size_t k = 1; k < path.size(); ++k) {
        std::set<int> next;
        for (int f : frontier)
            for (int w : c.fh.neighbors(f))
                if (c.over[w] == path[k]) next.insert(w);
        frontier = next;
    }
    return {frontier.begin(), frontier.end()};
}

std::vector<std::pair<int, int>> assignments(const std::vector<int>& p1, const std::vector<int>& p2, bool injective) {
    std::vector<std::pair<int, int>> out;
    for (int a : p1)
        for (int b : p2)
            if (!injective || a != b) out.emplace_back(a, b);
    return out;
}

// (b): follow the strings to the adjacent non-Δ nodes and test the partner pairs there.
Outcome test_b(const Context& c, int j, int v1, int v2) {
    std::vector<std::string> trace{"(b) at Δ-node " + c.tid(j) + " from " + c.fh.id(v1) + ", " + c.fh.id(v2)};
    std::vector<Outcome> outs;
    for (auto& path : string_targets(c, j)) {
        int target = path.back();
        auto p1 = lift_path(c, v1, path), p2 = lift_path(c, v2, path);
        bool injective = v1 == v2 && p1.size() >= 2;
        auto as = assignments(p1, p2, injective);
        std::string names;
        for (int p : p1) names += (names.empty() ? "" : ",") + c.fh.id(p);
        trace.push_back("  string to " + c.tid(target) + ": partners of " + c.fh.id(v1) + " {" + names + "}");
        for (auto [a, b] : as) outs.push_back(test_a(c, target, a, b));
        if (as.empty()) trace.push_back("  no partner pair over " + c.tid(target));
    }
    return agree(outs, "(b) at " + c.tid(j), trace);
}

Outcome decide_at(const Context& c, int j, int v1, int v2) {
    return c.t.vertex(j).delta ? test_b(c, j, v1, v2) : test_a(c, j, v1, v2);
}

// Fiber vertices over j0 adjacent to the component of Fhat minus that fiber containing v.
std::vector<int> fiber_partners(const Context& c, int j0, int v) {
    std::vector<char> seen(c.fh.size(), 0);
    std::vector<int> stack{v};
    std::set<int> out;
    seen[v] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int w : c.fh.neighbors(x)) {
            if (c.over[w] == j0) {
                out.insert(w);
                continue;
            }
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return {out.begin(), out.end()};
}

Outcome gauss_decision(const Context& c, int node, int v1, int v2, const Bottleneck& b) {
    const Rational& q = c.t.vertex(node).rate;
    if (b.value == q) return decide_at(c, node, v1, v2);
    int j0 = c.over[b.nu0];
    std::vector<std::string> trace{"(c) bottleneck " + b.value.str() + " < " + q.str() + " at " + c.fh.id(b.nu0) +
                                   ", reduce to " + c.tid(j0)};
    auto p1 = fiber_partners(c, j0, v1), p2 = fiber_partners(c, j0, v2);
    std::vector<Outcome> outs;
    for (int a : p1)
        for (int b2 : p2) {
            if (a == b2 && !c.is_p(a)) {
                outs.push_back({PairStatus::Fails,
                                {"  partners coincide at " + c.fh.id(a) + " (not a P-node) -> same Gauss value, fails"}});
                continue;
            }
            outs.push_back(decide_at(c, j0, a, b2));
        }
    return agree(outs, "(c) at " + c.tid(j0), trace);
}

std::optional<Rational> annotation(const LiftEntry& e1, const LiftEntry& e2) {
    if (auto it = e1.qout.find(e2.id); it != e1.qout.end()) return it->second;
    if (auto it = e2.qout.find(e1.id); it != e2.qout.end()) return it->second;
    return std::nullopt;
}

PairVerdict evaluate_pair(const Context& c, const std::string& node, const LiftEntry& e1, const LiftEntry& e2,
                          Mode mode) {
    int nv = c.t.at(node);
    PairVerdict pv;
    pv.node = node;
    pv.e1 = e1.id;
    pv.e2 = e2.id;
    pv.delta_node_informative = c.t.vertex(nv).delta;

    // the arcs' inner contact is the best over slice pairs
    std::optional<Bottleneck> best;
    int v1 = -1, v2 = -1;
    for (auto& a : e1.fhat)
        for (auto& b : e2.fhat) {
            int x = c.fh.at(a), y = c.fh.at(b);
            auto bn = bottleneck(c.fh, x, y);
            if (!best || bn.value > best->value) {
                best = bn;
                v1 = x;
                v2 = y;
            }
        }
    pv.q_inn = best->value;
    pv.trace.push_back("q_inn = " + pv.q_inn.str() + " between " + c.fh.id(v1) + " and " + c.fh.id(v2));

    auto ann = annotation(e1, e2);
    if (ann && *ann < pv.q_inn)
        throw ValidationError("annotated q_out " + ann->str() + " for " + e1.id + "/" + e2.id + " is below q_inn " +
                              pv.q_inn.str());

    if (mode == Mode::Gauss) {
        auto o = gauss_decision(c, nv, v1, v2, *best);
        pv.trace.insert(pv.trace.end(), o.trace.begin(), o.trace.end());
        if (o.status != PairStatus::Undecided) {
            pv.status = o.status;
            pv.decided_by = "gauss";
            pv.q_out_symbolic = o.status == PairStatus::Holds ? "equal" : "greater";
            if (ann) {
                pv.q_out = ann;
                bool ann_holds = *ann == pv.q_inn;
                if (ann_holds != (o.status == PairStatus::Holds))
                    throw ValidationError("pair " + e1.id + "/" + e2.id + ": annotation q_out " + ann->str() +
                                          " contradicts the Gauss-class decision");
                pv.trace.push_back("annotation q_out = " + ann->str() + " agrees");
            }
            return pv;
        }
    }
    if (ann) {
        pv.q_out = ann;
        pv.status = *ann == pv.q_inn ? PairStatus::Holds : PairStatus::Fails;
        pv.decided_by = "annotation";
        pv.trace.push_back("annotation q_out = " + ann->str() + " -> " + to_string(pv.status));
    } else {
        pv.status = PairStatus::Undecided;
        pv.trace.push_back(mode == Mode::Gauss ? "undecided, no annotation to fall back on" : "no annotation");
    }
    return pv;
}

struct Job {
    std::string node;
    const LiftEntry* e1;
    const LiftEntry* e2;
};

std::vector<Job> pair_jobs(const Context& c) {
    std::vector<Job> jobs;
    for (auto& node : classify_nodes(c.t)) {
        const auto* es = c.s.lifts_at(node);
        if (!es) continue;
        std::vector<const LiftEntry*> principal;
        for (auto& e : *es)
            for (auto& f : e.fhat)
                if (c.prime.vertices.count(c.fh.at(f))) {
                    principal.push_back(&e);
                    break;
                }
        for (size_t i = 0; i < principal.size(); ++i)
            for (size_t k = i + 1; k < principal.size(); ++k) jobs.push_back({node, principal[i], principal[k]});
    }
    return jobs;
}

LneVerdict assemble(const SurfaceGerm& s, Mode mode, bool strict, std::vector<PairVerdict> pairs) {
    LneVerdict v;
    v.mode = mode;
    v.strict_theorem = strict;
    bool failed = false, undecided = false;
    for (auto& c1 : check_condition1(s)) {
        v.witnesses.push_back({"1*", c1.node,
                               "component " + c1.entry + " has degree " + std::to_string(c1.degree) + ": mult_hat " +
                                   std::to_string(c1.mult_hat) + " != mult " + std::to_string(c1.m)});
        failed = true;
    }
    for (auto& p : pairs) {
        if (p.status == PairStatus::Fails) {
            if (strict && p.delta_node_informative) continue;
            std::string d = p.e1 + "/" + p.e2 + ": q_inn " + p.q_inn.str() + " < q_out";
            d += p.q_out ? " = " + p.q_out->str() : " (same Gauss class)";
            if (p.delta_node_informative) d += " (delta_node_informative)";
            v.witnesses.push_back({"2*", p.node, d});
            failed = true;
        }
    }
    if (!failed)
        for (auto& p : pairs)
            if (p.status == PairStatus::Undecided) {
                v.witnesses.push_back({"undecided", p.node, p.e1 + "/" + p.e2});
                undecided = true;
            }
    v.result = failed ? LneResult::NOT_LNE : undecided ? LneResult::UNDECIDED : LneResult::LNE;
    v.pairs = std::move(pairs);
    return v;
}

}  // namespace

std::vector<Condition1Violation> check_condition1(const SurfaceGerm& s) {
    std::vector<Condition1Violation> out;
    auto prime = fhat_prime(s);
    for (auto& node : classify_nodes(*s.tree)) {
        if (!s.lifts_at(node)) continue;
        long m = s.tree->vertex(s.tree->at(node)).m;
        for (auto& e : principal_components(s, node, &prime))
            if (e.degree != 1) out.push_back({node, e.id, e.degree, e.mult_hat, m});
    }
    return out;
}

Bottleneck pair_q_inn(const SurfaceGerm& s, const std::string& v1, const std::string& v2) {
    return bottleneck(*s.Fhat, s.Fhat->at(v1), s.Fhat->at(v2));
}

Rational q_inn_resolution(const RateGraph& gtilde, const std::string& v, const std::string& w) {
    return bottleneck(gtilde, gtilde.at(v), gtilde.at(w)).value;
}

PairVerdict check_pair_condition2(const SurfaceGerm& s, const std::string& node, const LiftEntry& e1,
                                  const LiftEntry& e2, Mode mode) {
    Context c(s);
    auto principal = principal_components(s, node, &c.prime);
    for (auto* e : {&e1, &e2}) {
        bool found = std::any_of(principal.begin(), principal.end(), [&](auto& p) { return p.id == e->id; });
        if (!found) throw NonPrincipal("entry '" + e->id + "' is not a principal component over '" + node + "'");
    }
    if (e1.id == e2.id) {
        PairVerdict pv;
        pv.node = node;
        pv.e1 = pv.e2 = e1.id;
        pv.q_inn = s.tree->vertex(s.tree->at(node)).rate;
        pv.q_out = pv.q_inn;
        pv.status = PairStatus::Holds;
        pv.trace.push_back("component paired with itself");
        return pv;
    }
    return evaluate_pair(c, node, e1, e2, mode);
}

LneVerdict check_lne_serial(const SurfaceGerm& s, Mode mode, bool strict) {
    Context c(s);
    std::vector<PairVerdict> pairs;
    for (auto& j : pair_jobs(c)) pairs.push_back(evaluate_pair(c, j.node, *j.e1, *j.e2, mode));
    return assemble(s, mode, strict, std::move(pairs));
}

LneVerdict check_lne(const SurfaceGerm& s, Mode mode, bool strict) {
    Context c(s);
    auto jobs = pair_jobs(c);
    std::vector<PairVerdict> pairs(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    int n = int(jobs.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            pairs[i] = evaluate_pair(c, jobs[i].node, *jobs[i].e1, *jobs[i].e2, mode);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return assemble(s, mode, strict, std::move(pairs));
}

std::string verdict_json(const LneVerdict& v) {
    using ojson = nlohmann::ordered_json;
    ojson j;
    j["result"] = to_string(v.result);
    j["mode"] = to_string(v.mode);
    j["strict_theorem"] = v.strict_theorem;
    ojson ws = ojson::array();
    for (auto& w : v.witnesses) {
        ojson x;
        x["condition"] = w.condition;
        x["node"] = w.node;
        x["details"] = w.details;
        ws.push_back(x);
    }
    j["witnesses"] = ws;
    ojson ps = ojson::array();
    for (auto& p : v.pairs) {
        ojson x;
        x["node"] = p.node;
        x["components"] = {p.e1, p.e2};
        x["q_inn"] = p.q_inn.str();
        if (p.q_out) x["q_out"] = p.q_out->str();
        else if (!p.q_out_symbolic.empty()) x["q_out"] = p.q_out_symbolic;
        else x["q_out"] = nullptr;
        x["status"] = to_string(p.status);
        x["delta_node_informative"] = p.delta_node_informative;
        x["decided_by"] = p.decided_by;
        x["trace"] = ojson(p.trace);
        ps.push_back(x);
    }
    j["pairs"] = ps;
    return j.dump(2) + "\n";
}

}  // namespace lipgerm
