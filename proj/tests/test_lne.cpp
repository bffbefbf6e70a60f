#include "doctest.h"
#include "oracles.hpp"

#include "lipgerm/errors.hpp"
#include "lipgerm/lne.hpp"

#include "json.hpp"

#include <map>

using namespace lipgerm;

namespace {

const std::string kFixtures = LIPGERM_FIXTURES;

Rational R(const char* s) { return Rational::parse(s); }

SurfaceGerm fixture(const std::string& name) { return load_surface(kFixtures + "/" + name + ".json"); }

LiftEntry& entry(SurfaceGerm& s, const std::string& id) {
    for (auto& [node, es] : s.lifts)
        for (auto& e : es)
            if (e.id == id) return e;
    throw std::runtime_error("no entry " + id);
}

std::map<std::string, int> pairs_per_node(const LneVerdict& v) {
    std::map<std::string, int> out;
    for (auto& p : v.pairs) ++out[p.node];
    return out;
}

const PairVerdict& pair(const LneVerdict& v, const std::string& a, const std::string& b) {
    for (auto& p : v.pairs)
        if (p.e1 == a && p.e2 == b) return p;
    throw std::runtime_error("no pair " + a + "/" + b);
}

bool same(const LneVerdict& a, const LneVerdict& b) {
    if (a.result != b.result || a.pairs.size() != b.pairs.size() || a.witnesses.size() != b.witnesses.size())
        return false;
    for (size_t i = 0; i < a.pairs.size(); ++i)
        if (a.pairs[i].e1 != b.pairs[i].e1 || a.pairs[i].e2 != b.pairs[i].e2 || a.pairs[i].status != b.pairs[i].status ||
            a.pairs[i].trace != b.pairs[i].trace)
            return false;
    return true;
}

// Annotate every checked pair with q_out = q_inn.
SurfaceGerm annotate_equal(SurfaceGerm s) {
    auto v = check_lne(s, Mode::Gauss);
    for (auto& p : v.pairs) entry(s, p.e1).qout[p.e2] = p.q_inn;
    return s;
}

}  // namespace

TEST_CASE("mode parsing") {
    CHECK(parse_mode("gauss") == Mode::Gauss);
    CHECK(parse_mode("annotated") == Mode::Annotated);
    CHECK_THROWS_AS(parse_mode("outer"), InvalidMode);
    CHECK(to_string(Mode::Annotated) == "annotated");
}

TEST_CASE("E8 is not normally embedded") {
    auto s = fixture("e8");
    auto c1 = check_condition1(s);
    REQUIRE(c1.size() == 2);
    CHECK(c1[0].node == "t1");
    CHECK(c1[0].degree == 2);
    CHECK(c1[1].node == "t53");
    CHECK(c1[1].degree == 2);

    auto v = check_lne(s, Mode::Gauss);
    CHECK(v.result == LneResult::NOT_LNE);
    REQUIRE(!v.witnesses.empty());
    CHECK(v.witnesses[0].condition == "1*");
    CHECK(v.witnesses[0].node == "t1");
    REQUIRE(v.pairs.size() == 1);
    auto& p = v.pairs[0];
    CHECK(p.node == "t103");
    CHECK(p.q_inn == R("10/3"));
    CHECK(p.status == PairStatus::Fails);
    CHECK(p.delta_node_informative);
    CHECK(p.decided_by == "gauss");
    CHECK(p.q_out_symbolic == "greater");

    auto strict = check_lne(s, Mode::Gauss, true);
    CHECK(strict.result == LneResult::NOT_LNE);
    for (auto& w : strict.witnesses) CHECK(w.condition == "1*");
}

TEST_CASE("minimal singularity is normally embedded") {
    auto s = fixture("minimal-b2");
    auto v = check_lne(s, Mode::Gauss);
    CHECK(v.result == LneResult::LNE);
    CHECK(v.witnesses.empty());
    auto counts = pairs_per_node(v);
    CHECK(counts["C1"] == 15);
    CHECK(counts["C2"] == 3);
    for (auto& p : v.pairs) {
        CHECK(p.status == PairStatus::Holds);
        CHECK(p.decided_by == "gauss");
        CHECK(p.delta_node_informative == s.tree->vertex(s.tree->at(p.node)).delta);
    }
    CHECK(check_condition1(s).empty());
}

TEST_CASE("separation alternatives agree") {
    auto base = check_lne(fixture("minimal-b2"), Mode::Gauss);
    for (auto name : {"minimal-b2-sep-a", "minimal-b2-sep-b"}) {
        auto v = check_lne(fixture(name), Mode::Gauss);
        CHECK(v.result == base.result);
        REQUIRE(v.pairs.size() == base.pairs.size());
        for (size_t i = 0; i < v.pairs.size(); ++i) CHECK(v.pairs[i].status == base.pairs[i].status);
    }
}

TEST_CASE("parallel and serial checkers agree") {
    for (auto name : {"e8", "minimal-b2", "minimal-b2-sep-a", "minimal-b2-sep-b"}) {
        auto s = fixture(name);
        CHECK(same(check_lne(s, Mode::Gauss), check_lne_serial(s, Mode::Gauss)));
        CHECK(same(check_lne(s, Mode::Annotated), check_lne_serial(s, Mode::Annotated)));
    }
}

TEST_CASE("rate scaling leaves statuses unchanged") {
    for (auto name : {"e8", "minimal-b2"}) {
        auto s = fixture(name);
        auto base = check_lne(s, Mode::Gauss);
        for (auto f : {"7/3", "1/12", "4"}) {
            auto t = scale_rates(s, R(f));
            auto v = check_lne(t, Mode::Gauss);
            CHECK(v.result == base.result);
            REQUIRE(v.pairs.size() == base.pairs.size());
            for (size_t i = 0; i < v.pairs.size(); ++i) {
                CHECK(v.pairs[i].status == base.pairs[i].status);
                CHECK(v.pairs[i].q_inn == base.pairs[i].q_inn * R(f));
            }
        }
    }
}

TEST_CASE("annotated mode") {
    SUBCASE("no annotations leaves every pair undecided") {
        auto v = check_lne(fixture("minimal-b2"), Mode::Annotated);
        CHECK(v.result == LneResult::UNDECIDED);
        CHECK(v.witnesses.size() == v.pairs.size());
        for (auto& w : v.witnesses) CHECK(w.condition == "undecided");
    }
    SUBCASE("equal annotations give LNE") {
        auto s = annotate_equal(fixture("minimal-b2"));
        auto v = check_lne(s, Mode::Annotated);
        CHECK(v.result == LneResult::LNE);
        for (auto& p : v.pairs) CHECK(p.decided_by == "annotation");
        auto g = check_lne(s, Mode::Gauss);
        CHECK(g.result == LneResult::LNE);
        for (auto& p : g.pairs) CHECK(p.q_out == p.q_inn);
    }
    SUBCASE("a larger outer rate fails") {
        auto s = fixture("minimal-b2");
        entry(s, "C2.2").qout["C2.3"] = R("3");
        auto c2 = principal_components(s, "C2");
        REQUIRE(c2.size() == 3);
        auto v = check_lne(s, Mode::Annotated);
        auto& p = pair(v, "C2.2", "C2.3");
        CHECK(p.status == PairStatus::Fails);
        CHECK(*p.q_out == R("3"));
        CHECK(v.result == LneResult::NOT_LNE);
        // the Gauss decision says equal, so the annotation contradicts it
        CHECK_THROWS_AS(check_lne(s, Mode::Gauss), ValidationError);
    }
    SUBCASE("annotations are cross-checked against Gauss classes") {
        auto s = fixture("e8");
        entry(s, "t103.a").qout["t103.b"] = R("10/3");
        CHECK(check_lne(s, Mode::Annotated).pairs[0].status == PairStatus::Holds);
        CHECK_THROWS_AS(check_lne(s, Mode::Gauss), ValidationError);
        entry(s, "t103.a").qout["t103.b"] = R("4");
        auto v = check_lne(s, Mode::Gauss);
        CHECK(v.pairs[0].status == PairStatus::Fails);
        CHECK(*v.pairs[0].q_out == R("4"));
        CHECK(v.pairs[0].q_out_symbolic == "greater");
    }
    SUBCASE("outer below inner is rejected") {
        auto s = fixture("e8");
        entry(s, "t103.b").qout["t103.a"] = R("3");
        CHECK_THROWS_AS(check_lne(s, Mode::Annotated), ValidationError);
        CHECK_THROWS_AS(check_lne(s, Mode::Gauss), ValidationError);
    }
}

TEST_CASE("undecided Gauss pairs fall back to annotations") {
    auto s = fixture("minimal-b2");
    // a P-node among the partners over C2 makes the C1 pairs undecidable
    s.Fhat->add_mark(s.Fhat->at("(-2,0)"), "P");
    auto& es = *s.lifts_at("C1");
    auto p = check_pair_condition2(s, "C1", es[0], es[1], Mode::Gauss);
    CHECK(p.status == PairStatus::Undecided);
    entry(s, es[0].id).qout[es[1].id] = p.q_inn;
    auto q = check_pair_condition2(s, "C1", s.lifts_at("C1")->at(0), s.lifts_at("C1")->at(1), Mode::Gauss);
    CHECK(q.status == PairStatus::Holds);
    CHECK(q.decided_by == "annotation");
}

TEST_CASE("conflicting partner candidates are a fixture error") {
    auto s = fixture("minimal-b2");
    // merging two Gauss classes over C2 makes one partner assignment fail while the others hold
    s.Fhat->add_edge("(-2,0)", "(-2,-1)");
    auto& es = *s.lifts_at("C1");
    CHECK_THROWS_AS(check_pair_condition2(s, "C1", es[0], es[1], Mode::Gauss), ValidationError);
}

TEST_CASE("single pair checks") {
    auto s = fixture("minimal-b2");
    auto principal = principal_components(s, "C2");
    std::vector<LiftEntry> other;
    for (auto& e : *s.lifts_at("C2")) {
        bool p = false;
        for (auto& x : principal) p |= x.id == e.id;
        if (!p) other.push_back(e);
    }
    REQUIRE(other.size() == 3);
    CHECK_THROWS_AS(check_pair_condition2(s, "C2", principal[0], other[0], Mode::Gauss), NonPrincipal);
    auto v = check_pair_condition2(s, "C2", principal[0], principal[1], Mode::Gauss);
    CHECK(v.status == PairStatus::Holds);
    CHECK(v.q_inn == R("2"));
    CHECK_THROWS_AS(check_pair_condition2(s, "C3", principal[0], principal[1], Mode::Gauss), NotANode);
    auto self = check_pair_condition2(s, "C2", principal[0], principal[0], Mode::Gauss);
    CHECK(self.status == PairStatus::Holds);
}

TEST_CASE("inner contact of lifted arcs") {
    auto s = fixture("e8");
    auto b = pair_q_inn(s, "hpa", "hpb");
    CHECK(b.value == R("5/3"));
    CHECK(b.value == *oracle::bottleneck_by_paths(*s.Fhat, s.Fhat->at("hpa"), s.Fhat->at("hpb")));
    CHECK(s.Fhat->id(b.nu0) == "h53");
    CHECK(pair_q_inn(s, "hpa", "hpa").value == R("10/3"));
    CHECK(pair_q_inn(s, "h1", "hpc").value == R("1"));

    auto m = fixture("minimal-b2");
    for (int a = 0; a < m.Fhat->size(); a += 5)
        for (int c = 0; c < m.Fhat->size(); c += 3)
            CHECK(pair_q_inn(m, m.Fhat->id(a), m.Fhat->id(c)).value == *oracle::bottleneck_by_paths(*m.Fhat, a, c));
}

TEST_CASE("inner contact through resolution graphs") {
    auto t = resolve({{"a", PuiseuxBranch::parse("y = x^(3/2) + x^(7/4)")}});
    auto g = t.as_rate_graph();
    CHECK(q_inn_resolution(g, "C5", "C5") == R("7/4"));
    CHECK(q_inn_resolution(g, "C1", "C5") == R("1"));
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b)
            CHECK(q_inn_resolution(g, g.id(a), g.id(b)) == *oracle::bottleneck_by_paths(g, a, b));
}

TEST_CASE("verdict JSON") {
    auto v = check_lne(fixture("e8"), Mode::Gauss);
    auto j = nlohmann::ordered_json::parse(verdict_json(v));
    std::vector<std::string> keys;
    for (auto& [k, _] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"result", "mode", "strict_theorem", "witnesses", "pairs"});
    CHECK(j["result"] == "NOT_LNE");
    CHECK(j["witnesses"][0]["condition"] == "1*");
    CHECK(j["pairs"][0]["q_inn"] == "10/3");
    CHECK(j["pairs"][0]["q_out"] == "greater");
    CHECK(j["pairs"][0]["status"] == "fails");
    CHECK(j["pairs"][0]["trace"].size() >= 3);
    CHECK(verdict_json(v) == verdict_json(check_lne_serial(fixture("e8"), Mode::Gauss)));
}
