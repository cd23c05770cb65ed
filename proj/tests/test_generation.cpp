#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>

#include "ssg/analysis.hpp"
#include "ssg/generation.hpp"
#include "ssg/graph.hpp"
#include "ssg/io.hpp"
#include "ssg/solvers.hpp"

using namespace ssg;

namespace {

bool all_reachable(const SsgModel& m) {
    std::vector<char> seen(m.num_states(), 0);
    std::queue<StateId> q;
    q.push(m.initial());
    seen[m.initial()] = 1;
    while (!q.empty()) {
        const StateId s = q.front();
        q.pop();
        for (ActionIndex a = 0; a < m.num_actions(s); ++a)
            for (const auto& t : m.transitions(s, a))
                if (!seen[t.target]) {
                    seen[t.target] = 1;
                    q.push(t.target);
                }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace

TEST_CASE("rng is reproducible") {
    Rng a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
    Rng c(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform_oc();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
        CHECK(c.below(7) < 7);
    }
}

TEST_CASE("fill_action") {
    Rng rng(3);
    SUBCASE("single target pool") {
        Distribution d;
        fill_action(d, 0, 1, rng, {});
        REQUIRE(d.size() == 1);
        CHECK(d[0].prob == 1.0);
    }
    SUBCASE("sums to exactly one without duplicates") {
        for (int i = 0; i < 2000; ++i) {
            Distribution d;
            fill_action(d, 0, 50, rng, {});
            double sum = 0;
            for (const auto& t : d) sum += t.prob;
            CHECK(sum == 1.0);
            std::vector<StateId> targets;
            for (const auto& t : d) targets.push_back(t.target);
            std::sort(targets.begin(), targets.end());
            CHECK(std::adjacent_find(targets.begin(), targets.end()) == targets.end());
        }
    }
    SUBCASE("partial distribution is completed") {
        Distribution d{{4, 0.7}};
        fill_action(d, 0, 10, rng, {});
        double sum = 0;
        for (const auto& t : d) sum += t.prob;
        CHECK(sum == 1.0);
        CHECK(d[0].target == 4);
    }
    SUBCASE("transition cap") {
        FillOptions o;
        o.max_transitions = 2;
        for (int i = 0; i < 200; ++i) {
            Distribution d;
            fill_action(d, 0, 50, rng, o);
            CHECK(d.size() <= 2);
        }
    }
}

TEST_CASE("generate_random") {
    GenParams p;
    p.n = 5;
    p.seed = 42;
    const auto m = generate_random(p);
    CHECK(m.num_states() == 5);
    CHECK(validate_model(m).ok());
    CHECK(all_reachable(m));
    CHECK(m.goals() == std::vector<StateId>{4});
    CHECK(m == generate_random(p));
    CHECK(serialize_model(m) == serialize_model(generate_random(p)));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GenParams two;
        two.n = 2;
        two.seed = seed;
        const auto g = generate_random(two);
        CHECK(g.initial() == 0);
        CHECK(g.is_goal(1));
        bool reaches = false;
        for (ActionIndex a = 0; a < g.num_actions(0); ++a)
            for (const auto& t : g.transitions(0, a)) reaches |= t.target == 1;
        CHECK(reaches);
    }

    GenParams bad;
    bad.n = 1;
    CHECK_THROWS(generate_random(bad));
}

TEST_CASE("min_prob floor") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GenParams p;
        p.n = 40;
        p.min_prob = 0.01;
        p.seed = seed;
        const auto m = generate_random(p);
        for (StateId s = 0; s < m.num_states(); ++s)
            for (ActionIndex a = 0; a < m.num_actions(s); ++a) {
                const auto t = m.transitions(s, a);
                for (std::size_t i = 0; i + 1 < t.size(); ++i) CHECK(t[i].prob >= 0.01);
            }
    }
}

TEST_CASE("generate_tree") {
    TreeParams p;
    p.n = 7;
    p.k = 2;
    p.seed = 11;
    const auto m = generate_tree(p);
    CHECK(validate_model(m).ok());
    CHECK(all_reachable(m));
    // Breadth-first layout: node v has children 2v+1 and 2v+2.
    for (StateId v = 0; v < 3; ++v) {
        CHECK(m.num_actions(v) == 2);
        bool first = false, second = false;
        for (ActionIndex a = 0; a < 2; ++a)
            for (const auto& t : m.transitions(v, a)) {
                first |= t.target == 2 * v + 1;
                second |= t.target == 2 * v + 2;
            }
        CHECK(first);
        CHECK(second);
    }
    TreeParams bad;
    bad.n = 1;
    CHECK_THROWS(generate_tree(bad));
}

TEST_CASE("generate_scc_chain") {
    SccChainParams p;
    p.n = 30;
    p.scc_size_min = p.scc_size_max = 10;
    p.seed = 4;
    const auto m = generate_scc_chain(p);
    CHECK(validate_model(m).ok());
    CHECK(all_reachable(m));
    const auto f = compute_features(m);
    CHECK(f.num_non_singleton_sccs == 3);
    CHECK(f.max_scc_depth >= 3);
    for (const auto& c : scc_decomposition(m).components) CHECK((c.size() == 1 || c.size() == 10));

    p.scc_size_min = p.scc_size_max = 1;
    p.n = 8;
    const auto line = generate_scc_chain(p);
    CHECK(validate_model(line).ok());
    CHECK(compute_features(line).num_non_singleton_sccs == 0);
    CHECK(compute_features(line).max_scc_depth >= 8);
}

TEST_CASE("handcrafted") {
    const auto chain = handcrafted(HandcraftedKind::TviChain, 3);
    CHECK(validate_model(chain).ok());
    const auto pc = solve_ptvi(chain, classify_states(chain), {});
    for (StateId s = 0; s < 3; ++s) CHECK(pc.lower[s] == doctest::Approx(0.6).epsilon(1e-12));

    const auto easy = handcrafted(HandcraftedKind::OviEasy, 30);
    const auto pe = solve_ptvi(easy, classify_states(easy), {});
    for (StateId s = 0; s < 30; ++s) CHECK(pe.lower[s] == doctest::Approx(0.5).epsilon(1e-12));

    const auto hard = handcrafted(HandcraftedKind::OviHard, 30);
    const auto ph = solve_ptvi(hard, classify_states(hard), {});
    for (StateId s = 0; s < 30; ++s) CHECK(ph.lower[s] == doctest::Approx(0.49).epsilon(1e-12));

    const auto scc = handcrafted(HandcraftedKind::SimpleScc, 50, 3);
    CHECK(validate_model(scc).ok());
    CHECK(all_reachable(scc));
    CHECK(compute_features(scc).num_non_singleton_sccs == 3);

    const auto big = handcrafted(HandcraftedKind::SimpleScc, 50000, 1);
    CHECK(compute_features(big).num_non_singleton_sccs == 1);

    CHECK(parse_handcrafted_kind("ovi-hard") == HandcraftedKind::OviHard);
    CHECK_THROWS_AS(parse_handcrafted_kind("bigmec"), std::invalid_argument);
}
