#include <doctest.h>

#include "ssg/bellman.hpp"
#include "ssg/generation.hpp"
#include "ssg/io.hpp"
#include "ssg/rng.hpp"

using namespace ssg;

TEST_CASE("diff") {
    CHECK(diff(0.4, 0.5, DiffMode::Absolute) == doctest::Approx(0.1));
    CHECK(diff(0.4, 0.5, DiffMode::Relative) == doctest::Approx(0.2));
    CHECK(diff(0.0, 0.0, DiffMode::Relative) == 0.0);
}

TEST_CASE("diff_plus") {
    CHECK(diff_plus(0.0, 1e-6, DiffMode::Absolute) == 0.0);
    CHECK(diff_plus(0.0, 1e-6, DiffMode::Relative) == 0.0);
    CHECK(diff_plus(0.5, 1e-6, DiffMode::Absolute) == doctest::Approx(0.500001).epsilon(1e-15));
    CHECK(diff_plus(0.5, 1e-6, DiffMode::Absolute) - 0.5 <= 1e-6);
    CHECK(diff_plus(0.9999999, 1e-6, DiffMode::Absolute) == 1.0);
    CHECK(diff_plus(0.5, 1e-6, DiffMode::Relative) == doctest::Approx(0.5000005).epsilon(1e-15));
}

TEST_CASE("bellman update") {
    const auto m = example_game();
    const auto classes = classify_states(m);
    const auto l0 = initial_lower(m, classes);
    CHECK(l0 == ValueFunction{0, 0, 1, 0});
    CHECK(initial_upper(m, classes) == ValueFunction{1, 1, 1, 0});

    const auto l1 = bellman_update(m, classes, l0, false);
    CHECK(l1[1] == 0.5);
    CHECK(l1[0] == 0.0);

    const ValueFunction v{0.5, 0.5, 1, 0};
    CHECK(bellman_update(m, classes, v, false) == v);
    CHECK(bellman_update(m, classes, v, true) == v);

    const auto chain = handcrafted(HandcraftedKind::TviChain, 2);
    const auto cc = classify_states(chain);
    const auto c1 = bellman_update(chain, cc, initial_lower(chain, cc), false);
    CHECK(c1[1] == doctest::Approx(0.6));
    CHECK(c1[0] == 0.0);
}

TEST_CASE("gauss-seidel uses fresh values") {
    // s0 -> s1 -> goal; states are swept in index order.
    ModelBuilder b(3);
    b.add_action(0, "a", {{1, 1.0}});
    b.add_action(1, "b", {{0, 0.5}, {2, 0.5}});
    b.add_action(2, "g", {{2, 1.0}});
    b.add_goal(2);
    const auto m = b.build();
    const auto c = classify_states(m);
    const ValueFunction u{1, 0.5, 1};
    const auto sync = bellman_update(m, c, u, false);
    const auto gs = bellman_update(m, c, u, true);
    CHECK(sync[0] == 0.5);
    CHECK(sync[1] == 1.0);
    CHECK(gs[0] == 0.5);
    CHECK(gs[1] == 0.75);
}

TEST_CASE("deflate update") {
    const auto m = example_game();
    const auto classes = classify_states(m);
    const ValueFunction u{1, 1, 1, 0};
    const ValueFunction v{0.5, 0.5, 1, 0};
    const auto d = deflate_update(m, classes, u, v, false);
    CHECK(d[0] == 0.5);
    CHECK(d[1] == 0.5);
    CHECK(deflate_update(m, classes, v, v, false) == v);

    const auto chain = handcrafted(HandcraftedKind::TviChain, 4);
    const auto cc = classify_states(chain);
    const auto cu = initial_upper(chain, cc);
    const auto cl = initial_lower(chain, cc);
    CHECK(deflate_update(chain, cc, cu, cl, false) == bellman_update(chain, cc, cu, false));
}

TEST_CASE("deflate update is monotone on small random games") {
    Rng rng(99);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        GenParams p;
        p.n = 2 + rng.below(12);
        p.seed = rng.next();
        const auto m = generate_random(p);
        const auto classes = classify_states(m);
        ValueFunction f1(m.num_states()), f2(m.num_states()), l(m.num_states());
        for (StateId s = 0; s < m.num_states(); ++s) {
            f1[s] = rng.uniform01();
            f2[s] = f1[s] + (1.0 - f1[s]) * rng.uniform01();
            l[s] = rng.uniform01();
        }
        const auto g1 = deflate_update(m, classes, f1, l, false);
        const auto g2 = deflate_update(m, classes, f2, l, false);
        for (StateId s = 0; s < m.num_states(); ++s)
            if (g1[s] > g2[s]) ++violations;
    }
    CHECK(violations == 0);
}
