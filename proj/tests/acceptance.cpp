// One line per acceptance criterion; exit status is nonzero if any fails.
#include "lipgerm/lne.hpp"
#include "lipgerm/polynomial.hpp"
#include "lipgerm/surface.hpp"

#include "oracles.hpp"
#include "random_branches.hpp"
#include "random_graphs.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace lipgerm;

namespace {

const std::string kFixtures = LIPGERM_FIXTURES;

struct Check {
    bool ok = true;
    std::ostringstream why;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (!ok) why << "; ";
            ok = false;
            why << what;
        }
    }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(int n, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0) c.expect(s < limit_s, "took " + std::to_string(s) + " s");
    if (!c.ok) ++failures;
    std::printf("[%s] %d. %s (%.3f s)%s%s\n", c.ok ? "PASS" : "FAIL", n, title.c_str(), s, c.ok ? "" : ": ",
                c.ok ? "" : c.why.str().c_str());
}

Rational R(const char* s) { return Rational::parse(s); }

std::multiset<Rational> rates(const RateGraph& g) {
    std::multiset<Rational> out;
    for (int v = 0; v < g.size(); ++v) out.insert(g.rate(v));
    return out;
}

std::multiset<Rational> ms(std::initializer_list<const char*> xs) {
    std::multiset<Rational> out;
    for (auto x : xs) out.insert(R(x));
    return out;
}

std::vector<PairStatus> statuses(const LneVerdict& v) {
    std::vector<PairStatus> out;
    for (auto& p : v.pairs) out.push_back(p.status);
    return out;
}

// Two exact-coefficient branches sharing a random prefix.
std::pair<PuiseuxBranch, PuiseuxBranch> exact_pair(std::mt19937& rng) {
    static const long dens[] = {1, 2, 3, 4, 6, 12};
    auto coef = [&] {
        long v = long(rng() % 7) - 3;
        return Coefficient::exact(Rational(v == 0 ? 5 : v));
    };
    while (true) {
        std::vector<Term> a, b;
        Rational e(1);
        int shared = int(rng() % 3);
        for (int k = 0; k < shared; ++k) {
            e += Rational(long(rng() % 3), dens[rng() % 6]);
            if (!a.empty() && e == a.back().exp) continue;
            auto c = coef();
            a.push_back({e, c});
            b.push_back({e, c});
        }
        for (auto* t : {&a, &b}) {
            Rational f = e;
            int more = 1 + int(rng() % 3);
            for (int k = 0; k < more; ++k) {
                f += Rational(long(1 + rng() % 3), dens[rng() % 6]);
                if (f > Rational(6)) break;
                t->push_back({f, coef()});
            }
        }
        PuiseuxBranch x(a), y(b);
        if (!is_infinite(contact(x, y))) return {x, y};
    }
}

}  // namespace

int main() {
    run(1, "cusp resolution y = x^(3/2) + x^(7/4)", 1.0, [](Check& c) {
        auto s = load_surface(kFixtures + "/cusp74.json");
        auto t = resolve(s.branches);
        c.expect(t.size() == 5, "vertex count " + std::to_string(t.size()));
        if (t.size() != 5) return;
        std::vector<long> self;
        for (auto& v : t.vertices()) self.push_back(v.selfint);
        c.expect(self == std::vector<long>{-3, -2, -3, -2, -1}, "self-intersections");
        std::vector<std::string> want = {"1", "2", "3/2", "5/2", "7/4"};
        for (int i = 0; i < 5; ++i)
            c.expect(t.vertex(i).rate == R(want[i].c_str()),
                     t.vertex(i).id + " rate " + t.vertex(i).rate.str() + ", expected " + want[i]);
        c.expect(t.vertex(4).arrows == std::vector<std::string>{"a"}, "arrow not on the rate-7/4 vertex");
        auto dot = tree_dot(t);
        for (auto& w : want) c.expect(dot.find("q=" + w + " ") != std::string::npos, "DOT lacks rate " + w);
    });

    run(2, "contact of coefficient variants", 0, [](Check& c) {
        auto base = PuiseuxBranch::parse("y = x^(3/2) + x^(7/4)");
        auto c74 = contact(base, PuiseuxBranch::parse("y = x^(3/2) + 2*x^(7/4)"));
        auto c32 = contact(base, PuiseuxBranch::parse("y = 2*x^(3/2) + x^(7/4)"));
        c.expect(!is_infinite(c74) && std::get<Rational>(c74) == R("7/4"), "7/4 variant gives " + to_string(c74));
        c.expect(!is_infinite(c32) && std::get<Rational>(c32) == R("3/2"), "3/2 variant gives " + to_string(c32));
    });

    run(3, "rate monotonicity on 200 random branch sets", 30.0, [](Check& c) {
        std::mt19937 rng(20261015);
        for (int k = 0; k < 200; ++k) {
            auto t = resolve(random_branch_set(rng));
            for (int v = 0; v < t.size(); ++v) {
                auto& p = t.vertex(v).parent;
                if (p && !(t.vertex(t.at(*p)).rate < t.vertex(v).rate)) {
                    c.expect(false, "set " + std::to_string(k) + ": " + t.vertex(v).id + " not above parent");
                    return;
                }
            }
        }
    });

    run(4, "bottleneck vs exhaustive paths on 500 random graphs", 30.0, [](Check& c) {
        std::mt19937 rng(7);
        for (int k = 0; k < 500; ++k) {
            auto g = random_rate_graph(rng, 9, 6);
            for (int a = 0; a < g.size(); ++a)
                for (int b = 0; b < g.size(); ++b) {
                    auto want = oracle::bottleneck_by_paths(g, a, b);
                    if (!want || bottleneck(g, a, b).value != *want) {
                        c.expect(false, "graph " + std::to_string(k));
                        return;
                    }
                }
        }
    });

    run(5, "E8 fixture", 0, [](Check& c) {
        auto s = load_surface(kFixtures + "/e8.json");
        auto d = validate(s);
        c.expect(d.empty(), d.empty() ? "" : "validate: " + d[0]);
        auto T = s.T();
        c.expect(T.size() == 5 && s.G->size() == 5 && s.F->size() == 7 && s.Fhat->size() == 8, "vertex counts");
        c.expect(rates(T) == ms({"1", "3/2", "5/3", "2", "10/3"}), "T rates");
        c.expect(rates(*s.G) == ms({"1", "3/2", "5/3", "2", "10/3"}), "G rates");
        c.expect(rates(*s.F) == ms({"1", "3/2", "5/3", "2", "10/3", "10/3", "10/3"}), "F rates");
        c.expect(rates(*s.Fhat) == ms({"1", "3/2", "5/3", "2", "2", "10/3", "10/3", "10/3"}), "Fhat rates");
        auto disc = discriminant_of_projection(Polynomial::parse("x^2+y^3+z^5"), Polynomial::var_index('x'));
        c.expect(disc == Polynomial::parse("y^3+z^5"), "discriminant " + disc.str());
        auto v = check_lne(s, Mode::Gauss);
        c.expect(v.result == LneResult::NOT_LNE, "verdict " + to_string(v.result));
        bool root = false;
        for (auto& w : v.witnesses) root |= w.condition == "1*" && w.node == s.tree->vertex(s.tree->root()).id;
        c.expect(root, "no (1*) witness at the root");
    });

    run(6, "minimal singularity fixture", 0, [](Check& c) {
        auto s = load_surface(kFixtures + "/minimal-b2.json");
        c.expect(validate(s).empty(), "validate");
        c.expect(s.Fhat->size() == 36, "Fhat has " + std::to_string(s.Fhat->size()) + " vertices");
        auto prime = fhat_prime(s);
        c.expect(prime.vertices.size() == 12, "Fhat' has " + std::to_string(prime.vertices.size()) + " vertices");
        std::string central;
        int best = -1;
        for (auto& v : s.tree->vertices()) {
            int i = s.tree->at(v.id);
            if (v.rate == Rational(2) && is_node(*s.tree, i) && s.tree->valency(i) > best) {
                central = v.id;
                best = s.tree->valency(i);
            }
        }
        c.expect(!central.empty(), "no rate-2 node");
        if (central.empty()) return;
        size_t all = s.lifts_at(central)->size();
        size_t principal = principal_components(s, central, &prime).size();
        c.expect(all == 6 && principal == 3,
                 std::to_string(all) + " components, " + std::to_string(principal) + " principal");
        c.expect(all * (all - 1) / 2 == 15 && principal * (principal - 1) / 2 == 3, "pair counts");
        auto v = check_lne(s, Mode::Gauss);
        size_t checked = 0;
        for (auto& p : v.pairs) checked += p.node == central;
        c.expect(checked == 3, "checked " + std::to_string(checked) + " pairs at " + central);
        c.expect(v.result == LneResult::LNE, "verdict " + to_string(v.result));
    });

    run(7, "slice identity on 100 random exact pairs", 0, [](Check& c) {
        std::mt19937 rng(12);
        for (int k = 0; k < 100; ++k) {
            auto [a, b] = exact_pair(rng);
            auto direct = contact(a, b), via = complex_contact_via_slices(a, b);
            std::optional<Rational> numeric;
            for (long i = 0; i < multiplicity(a); ++i)
                for (long j = 0; j < multiplicity(b); ++j) {
                    auto x = oracle::numeric_slice_contact(a, i, b, j);
                    if (x && (!numeric || *numeric < *x)) numeric = x;
                }
            bool same = to_string(direct) == to_string(via) && numeric && to_string(direct) == numeric->str();
            if (!same) {
                c.expect(false, a.str() + " vs " + b.str() + ": " + to_string(direct) + " / " + to_string(via));
                return;
            }
        }
    });

    run(8, "curvette multiplicities of the cusp resolution", 0, [](Check& c) {
        auto t = resolve({{"a", PuiseuxBranch::parse("y = x^(3/2) + x^(7/4)")}});
        std::vector<long> want = {1, 1, 2, 2, 4};
        for (int i = 0; i < 5 && i < t.size(); ++i) {
            auto id = t.vertex(i).id;
            long m = curvette_multiplicity(t, id);
            long den = oracle::parametrization_order(curvette(t, id, "u"));
            c.expect(m == want[i] && den == want[i],
                     id + ": m " + std::to_string(m) + ", denominator " + std::to_string(den));
        }
    });

    run(9, "invariance under rate scaling and separation choice", 0, [](Check& c) {
        for (auto name : {"e8", "minimal-b2"}) {
            auto s = load_surface(kFixtures + "/" + name + ".json");
            auto base = check_lne(s, Mode::Gauss);
            for (auto f : {"7/3", "1/2", "5"}) {
                auto v = check_lne(scale_rates(s, R(f)), Mode::Gauss);
                c.expect(v.result == base.result && statuses(v) == statuses(base),
                         std::string(name) + " scaled by " + f);
            }
        }
        auto a = check_lne(load_surface(kFixtures + "/minimal-b2-sep-a.json"), Mode::Gauss);
        auto b = check_lne(load_surface(kFixtures + "/minimal-b2-sep-b.json"), Mode::Gauss);
        c.expect(a.result == b.result && statuses(a) == statuses(b), "separation alternatives disagree");
    });

    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
