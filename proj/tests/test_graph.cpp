#include <doctest.h>

#include <algorithm>

#include "oracle.hpp"
#include "ssg/generation.hpp"
#include "ssg/graph.hpp"
#include "ssg/io.hpp"

using namespace ssg;

TEST_CASE("classification") {
    const auto c = classify_states(example_game());
    CHECK(c.goals == std::vector<StateId>{2});
    CHECK(c.sinks == std::vector<StateId>{3});
    CHECK(c.unknown == std::vector<StateId>{0, 1});

    const auto chain = classify_states(handcrafted(HandcraftedKind::TviChain, 3));
    CHECK(chain.goals == std::vector<StateId>{3});
    CHECK(chain.sinks == std::vector<StateId>{4});
    CHECK(chain.unknown == std::vector<StateId>{0, 1, 2});

    const auto easy = classify_states(handcrafted(HandcraftedKind::OviEasy, 5));
    CHECK(easy.goals.size() + easy.sinks.size() + easy.unknown.size() == 7);
}

TEST_CASE("scc decomposition") {
    const auto m = example_game();
    const auto d = scc_decomposition(m);
    REQUIRE(d.components.size() == 3);
    CHECK(d.component_of[0] == d.component_of[1]);
    CHECK(d.component_of[0] < d.component_of[2]);
    CHECK(d.component_of[0] < d.component_of[3]);

    const auto chain = handcrafted(HandcraftedKind::TviChain, 6);
    const auto dc = scc_decomposition(chain);
    CHECK(dc.components.size() == chain.num_states());
}

TEST_CASE("scc order respects every transition") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        GenParams p;
        p.n = 30;
        p.seed = seed;
        const auto m = generate_random(p);
        const auto d = scc_decomposition(m);
        for (StateId s = 0; s < m.num_states(); ++s)
            for (ActionIndex a = 0; a < m.num_actions(s); ++a)
                for (const auto& t : m.transitions(s, a)) CHECK(d.component_of[s] <= d.component_of[t.target]);
    }
}

TEST_CASE("mec decomposition") {
    const auto m = example_game();
    auto mecs = mec_decomposition(m);
    std::sort(mecs.begin(), mecs.end(), [](const auto& a, const auto& b) { return a.states < b.states; });
    REQUIRE(mecs.size() == 3);
    CHECK(mecs[0].states == std::vector<StateId>{0, 1});
    CHECK(mecs[0].actions[0] == std::vector<ActionIndex>{0});
    CHECK(mecs[0].actions[1] == std::vector<ActionIndex>{0});
    CHECK(mecs[1].states == std::vector<StateId>{2});
    CHECK(mecs[2].states == std::vector<StateId>{3});

    const auto chain = mec_decomposition(handcrafted(HandcraftedKind::TviChain, 4));
    CHECK(chain.size() == 2);
}

TEST_CASE("mecs are disjoint end components") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        GenParams p;
        p.n = 20;
        p.seed = seed;
        const auto m = generate_random(p);
        const auto mecs = mec_decomposition(m);
        std::vector<int> seen(m.num_states(), 0);
        for (const auto& ec : mecs) {
            CHECK(is_end_component(m, ec));
            for (StateId s : ec.states) ++seen[s];
        }
        for (int c : seen) CHECK(c <= 1);
        // A state outside every MEC cannot join one: adding it breaks closure or connectivity.
        for (const auto& ec : mecs) {
            for (StateId extra = 0; extra < m.num_states(); ++extra) {
                if (seen[extra]) continue;
                EcCandidate bigger = ec;
                auto pos = std::lower_bound(bigger.states.begin(), bigger.states.end(), extra);
                const auto at = pos - bigger.states.begin();
                bigger.states.insert(pos, extra);
                std::vector<ActionIndex> all(m.num_actions(extra));
                for (ActionIndex a = 0; a < all.size(); ++a) all[a] = a;
                bigger.actions.insert(bigger.actions.begin() + at, all);
                CHECK_FALSE(is_end_component(m, bigger));
            }
        }
    }
}

TEST_CASE("sec candidates on the example game") {
    const auto m = example_game();
    const auto classes = classify_states(m);
    const ValueFunction v{0.5, 0.5, 1.0, 0.0};
    const auto at_v = find_sec_candidates(m, classes, v);
    REQUIRE(at_v.size() == 1);
    CHECK(at_v[0].states == std::vector<StateId>{0, 1});

    // Maximizer keeps all actions, so the s0/s1 cycle is still a candidate.
    const ValueFunction l{0.0, 0.5, 1.0, 0.0};
    const auto mid = find_sec_candidates(m, classes, l);
    REQUIRE(mid.size() == 1);
    CHECK(mid[0].states == std::vector<StateId>{0, 1});

    const auto none = find_sec_candidates(handcrafted(HandcraftedKind::TviChain, 5), ValueFunction(7, 0.0));
    CHECK(none.empty());
}

TEST_CASE("sec candidates at the true value are simple") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 200 && checked < 60; ++seed) {
        GenParams p;
        p.n = 3 + seed % 6;
        p.seed = seed;
        p.extra_action_geom = 0.5;
        const auto m = generate_random(p);
        if (oracle::profile_count(m) > 20000) continue;
        ++checked;
        const auto v = oracle::game_values(m);
        for (const auto& ec : find_sec_candidates(m, v)) {
            const double exit = best_exit(m, ec.states, v);
            for (StateId s : ec.states) CHECK(v[s] == doctest::Approx(exit).epsilon(1e-9));
        }
    }
    CHECK(checked >= 30);
}

TEST_CASE("best exit") {
    const auto m = example_game();
    CHECK(best_exit(m, {0, 1}, ValueFunction{0.5, 0.5, 1, 0}) == 0.5);
    CHECK(best_exit(m, {0, 1}, ValueFunction{1, 1, 1, 1}) == 1.0);
    // Only a Minimizer state leaving T.
    CHECK(best_exit(m, {0}, ValueFunction{1, 1, 1, 1}) == 0.0);
}
