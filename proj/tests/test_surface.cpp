#include "doctest.h"
#include "oracles.hpp"

#include "lipgerm/errors.hpp"
#include "lipgerm/surface.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace lipgerm;

namespace {

const std::string kFixtures = LIPGERM_FIXTURES;

Rational R(const char* s) { return Rational::parse(s); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SurfaceGerm fixture(const std::string& name) { return load_surface(kFixtures + "/" + name + ".json"); }

std::multiset<Rational> rates(const RateGraph& g) {
    std::multiset<Rational> out;
    for (int v = 0; v < g.size(); ++v) out.insert(g.rate(v));
    return out;
}

bool mentions(const Diagnostics& d, const std::string& needle) {
    for (auto& x : d)
        if (x.find(needle) != std::string::npos) return true;
    return false;
}

LiftEntry& entry(SurfaceGerm& s, const std::string& id) {
    for (auto& [node, es] : s.lifts)
        for (auto& e : es)
            if (e.id == id) return e;
    throw std::runtime_error("no entry " + id);
}

// Components of g minus P-marked vertices, by plain search.
int class_count(const RateGraph& g) {
    std::vector<int> seen(g.size(), 0);
    int n = 0;
    for (int v = 0; v < g.size(); ++v) {
        if (seen[v] || g.has_mark(v, "P")) continue;
        ++n;
        std::vector<int> st{v};
        seen[v] = 1;
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            for (int w : g.neighbors(x))
                if (!seen[w] && !g.has_mark(w, "P")) {
                    seen[w] = 1;
                    st.push_back(w);
                }
        }
    }
    return n;
}

}  // namespace

TEST_CASE("shipped fixtures validate") {
    for (auto name : {"e8", "minimal-b2", "minimal-b2-sep-a", "minimal-b2-sep-b"}) {
        auto s = fixture(name);
        CHECK(s.is_surface());
        auto d = validate(s);
        CHECK_MESSAGE(d.empty(), name << ": " << (d.empty() ? "" : d[0]));
    }
    auto cusp = fixture("cusp74");
    CHECK_FALSE(cusp.is_surface());
    CHECK(cusp.branches.size() == 1);
}

TEST_CASE("serialization round-trips byte for byte") {
    for (auto name : {"cusp74", "e8", "minimal-b2", "minimal-b2-sep-a", "minimal-b2-sep-b", "single-vertex"}) {
        auto path = kFixtures + "/" + std::string(name) + ".json";
        auto text = slurp(path);
        auto once = serialize_surface(parse_surface(text));
        CHECK_MESSAGE(once == text, name);
        CHECK(serialize_surface(parse_surface(once)) == once);
    }
}

TEST_CASE("E8 graphs") {
    auto s = fixture("e8");
    CHECK(s.T().size() == 5);
    CHECK(s.G->size() == 5);
    CHECK(s.F->size() == 7);
    CHECK(s.Fhat->size() == 8);
    std::multiset<Rational> base{R("1"), R("3/2"), R("5/3"), R("2"), R("10/3")};
    CHECK(rates(s.T()) == base);
    CHECK(rates(*s.G) == base);
    auto f = base;
    f.insert({R("10/3"), R("10/3")});
    CHECK(rates(*s.F) == f);
    f.insert(R("2"));
    CHECK(rates(*s.Fhat) == f);
    CHECK(s.covers["F"].order == 3);
    CHECK(s.covers["Fhat"].order == 6);
    CHECK(s.Fhat->marked("L").size() == 1);
    CHECK(s.Fhat->marked("P").size() == 3);
}

TEST_CASE("schema errors carry a path") {
    auto text = slurp(kFixtures + "/e8.json");
    auto bad = text;
    bad.replace(bad.find("\"rate\": \"5/3\""), 13, "\"rate\": \"5/x\"");
    try {
        parse_surface(bad);
        FAIL("accepted a malformed rate");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("tree.vertices[") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_surface("{\"schema\": \"lipgerm/2\"}"), SchemaError);
    CHECK_THROWS_AS(parse_surface("{"), SchemaError);
    CHECK_THROWS_AS(parse_surface("{\"schema\": \"lipgerm/1\", \"delta\": [\"nope\"]}"), SchemaError);
}

TEST_CASE("validation catches broken invariants") {
    SUBCASE("degree sum") {
        auto s = fixture("e8");
        entry(s, "t103.a").degree = 2;
        entry(s, "t103.a").mult_hat = 6;
        CHECK_FALSE(validate(s).empty());
    }
    SUBCASE("mult_hat") {
        auto s = fixture("e8");
        entry(s, "t1.a").mult_hat = 3;
        CHECK_FALSE(validate(s).empty());
    }
    SUBCASE("rate-changing map") {
        auto s = fixture("e8");
        s.maps["Chat"]["h2a"] = "f1";
        CHECK(mentions(validate(s), "rate mismatch"));
    }
    SUBCASE("cover order") {
        auto s = fixture("e8");
        s.covers["Fhat"].order = 4;
        CHECK_FALSE(validate(s).empty());
    }
    SUBCASE("q_out below q_inn") {
        auto s = fixture("e8");
        entry(s, "t103.a").qout["t103.b"] = R("3");
        CHECK_FALSE(validate(s).empty());
    }
    SUBCASE("adjacent delta nodes") {
        auto s = fixture("minimal-b2");
        s.tree->vertex(s.tree->at("C2")).delta = true;
        CHECK_FALSE(validate(s).empty());
    }
}

TEST_CASE("minimal fixture tree is the resolution of its branches") {
    auto s = fixture("minimal-b2");
    auto t = separate_delta(mark_delta(resolve(s.branches), s.delta));
    REQUIRE(t.size() == s.tree->size());
    for (int i = 0; i < t.size(); ++i) {
        auto& a = t.vertex(i);
        auto& b = s.tree->vertex(s.tree->at(a.id));
        CHECK(a.rate == b.rate);
        CHECK(a.m == b.m);
        CHECK(a.selfint == b.selfint);
        CHECK(a.delta == b.delta);
        CHECK(a.separation == b.separation);
    }
    for (auto [x, y] : t.edges()) CHECK(s.tree->adjacent(s.tree->at(t.vertex(x).id), s.tree->at(t.vertex(y).id)));
    CHECK(classify_nodes(t) == classify_nodes(*s.tree));
}

TEST_CASE("principal components") {
    auto s = fixture("minimal-b2");
    CHECK(s.Fhat->size() == 36);
    auto prime = fhat_prime(s);
    CHECK(prime.vertices.size() == 12);
    CHECK(prime.vertices == oracle::vertices_on_marked_paths(*s.Fhat, [&] {
              std::set<int> m;
              for (int v : s.Fhat->marked("L")) m.insert(v);
              for (int v : s.Fhat->marked("P")) m.insert(v);
              return m;
          }()));
    CHECK(s.lifts_at("C2")->size() == 6);
    CHECK(principal_components(s, "C2").size() == 3);
    CHECK(principal_components(s, "C1").size() == 6);
    CHECK_THROWS_AS(principal_components(s, "C3"), NotANode);

    auto e8 = fixture("e8");
    auto root = principal_components(e8, "t1");
    REQUIRE(root.size() == 1);
    CHECK(root[0].degree == 2);
}

TEST_CASE("principal components grow with added marks") {
    auto s = fixture("minimal-b2");
    auto nodes = classify_nodes(*s.tree);
    std::mt19937 rng(5);
    for (int k = 0; k < 20; ++k) {
        auto t = s;
        t.Fhat->add_mark(int(rng() % t.Fhat->size()), rng() % 2 ? "L" : "P");
        for (auto& n : nodes) {
            auto before = principal_components(s, n), after = principal_components(t, n);
            for (auto& e : before) {
                bool kept = false;
                for (auto& f : after) kept |= f.id == e.id;
                CHECK(kept);
            }
        }
    }
}

TEST_CASE("nodal test curves") {
    auto e8 = fixture("e8");
    auto c = nodal_test_curves(e8);
    REQUIRE(c.size() == 3);
    CHECK(c[0].first == "t1");
    for (auto& [node, b] : c) {
        auto& v = e8.tree->vertex(e8.tree->at(node));
        CHECK(multiplicity(b) == v.m);
    }
    auto m = fixture("minimal-b2");
    auto mc = nodal_test_curves(m);
    CHECK(mc.size() == 6);
    for (auto& [node, b] : mc)
        for (auto& [other, b2] : mc)
            if (node != other) {
                auto q = contact(b, b2);
                CHECK_FALSE(is_infinite(q));
            }
}

TEST_CASE("Gauss classes match plain component search") {
    for (auto name : {"e8", "minimal-b2", "minimal-b2-sep-a"}) {
        auto s = fixture(name);
        auto cls = gauss_classes(*s.Fhat);
        int top = -1;
        for (int v = 0; v < s.Fhat->size(); ++v) {
            CHECK((cls[v] < 0) == s.Fhat->has_mark(v, "P"));
            top = std::max(top, cls[v]);
        }
        CHECK(top + 1 == class_count(*s.Fhat));
    }
}

TEST_CASE("rate scaling") {
    auto s = fixture("e8");
    auto t = scale_rates(s, R("7/3"));
    CHECK(t.tree->vertex(0).rate == R("7/3"));
    CHECK(rates(*t.Fhat).count(R("70/9")) == 3);
    CHECK_THROWS_AS(scale_rates(s, R("0")), ValidationError);
}
