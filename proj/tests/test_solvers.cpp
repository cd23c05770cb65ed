#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "ssg/generation.hpp"
#include "ssg/io.hpp"
#include "ssg/solvers.hpp"

using namespace ssg;

namespace {

SsgModel all_goal_model() {
    ModelBuilder b(2);
    b.add_action(0, "g", {{0, 1.0}});
    b.add_action(1, "g", {{1, 1.0}});
    b.add_goal(0).add_goal(1);
    return b.build();
}

MaxStrategy max_support(std::size_t n) {
    MaxStrategy s;
    s.support.resize(n);
    return s;
}

MinStrategy min_choice(std::size_t n) {
    MinStrategy t;
    t.choice.assign(n, kNoAction);
    return t;
}

}  // namespace

TEST_CASE("parsing helpers") {
    CHECK(parse_algorithm("ptvi") == Algorithm::PTVI);
    CHECK(to_string(Algorithm::OVI) == "ovi");
    CHECK(parse_diff_mode("relative") == DiffMode::Relative);
    CHECK_THROWS_AS(parse_algorithm("wp"), std::invalid_argument);
    SolverConfig bad;
    bad.epsilon = 0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("vi") {
    const auto m = example_game();
    const auto r = solve_vi(m, classify_states(m), {});
    CHECK(r.status == SolverStatus::Converged);
    CHECK(r.lower[0] <= 0.5);
    CHECK(r.lower[0] >= 0.5 - 1e-3);

    const auto goals = all_goal_model();
    const auto g = solve_vi(goals, classify_states(goals), {});
    CHECK(g.iterations == 0);
    CHECK(g.lower == ValueFunction{1, 1});

    const auto one = handcrafted(HandcraftedKind::TviChain, 1);
    SolverConfig cfg;
    cfg.max_iterations = 1;
    const auto c = solve_vi(one, classify_states(one), cfg);
    CHECK(c.lower[0] == doctest::Approx(0.6));
}

TEST_CASE("bvi") {
    const auto m = example_game();
    const auto classes = classify_states(m);
    SolverConfig cfg;
    cfg.deflate_every = 1;
    const auto r = solve_bvi(m, classes, cfg);
    CHECK(r.status == SolverStatus::Converged);
    CHECK(r.upper[0] - r.lower[0] <= 1e-6);
    CHECK(r.lower[0] <= 0.5);
    CHECK(r.upper[0] >= 0.5);

    cfg.deflate = false;
    cfg.max_iterations = 2000;
    const auto stuck = solve_bvi(m, classes, cfg);
    CHECK(stuck.status == SolverStatus::IterationCap);
    CHECK(stuck.upper[0] == 1.0);
}

TEST_CASE("bvi on an EC-free chain matches interval iteration") {
    const auto m = handcrafted(HandcraftedKind::TviChain, 1);
    const auto classes = classify_states(m);
    std::vector<std::pair<double, double>> with, without;
    SolverConfig cfg;
    cfg.deflate_every = 1;
    cfg.observer = [&](const ValueFunction& l, const ValueFunction* u) { with.push_back({l[0], (*u)[0]}); };
    solve_bvi(m, classes, cfg);
    cfg.deflate = false;
    cfg.observer = [&](const ValueFunction& l, const ValueFunction* u) { without.push_back({l[0], (*u)[0]}); };
    solve_bvi(m, classes, cfg);
    CHECK(with == without);
}

TEST_CASE("ovi") {
    const auto m = example_game();
    const auto r = solve_ovi(m, classify_states(m), {});
    CHECK(r.status == SolverStatus::Converged);
    CHECK(r.verification_phases >= 1);
    CHECK(r.upper[0] - r.lower[0] <= 1e-6);
    CHECK(r.lower[0] <= 0.5);
    CHECK(r.upper[0] >= 0.5);

    const auto goals = all_goal_model();
    const auto g = solve_ovi(goals, classify_states(goals), {});
    CHECK(g.status == SolverStatus::Converged);
    CHECK(g.verification_phases <= 1);
}

TEST_CASE("ovi easy chain is fast where bvi is not") {
    const auto m = handcrafted(HandcraftedKind::OviEasy, 500);
    const auto classes = classify_states(m);
    SolverConfig cfg;
    cfg.max_bellman_updates = 1'000'000;
    const auto o = solve_ovi(m, classes, cfg);
    CHECK(o.status == SolverStatus::Converged);
    CHECK(o.lower[0] == doctest::Approx(0.5));
    const auto b = solve_bvi(m, classes, cfg);
    CHECK(b.status == SolverStatus::IterationCap);
}

TEST_CASE("topological") {
    const auto chain = handcrafted(HandcraftedKind::TviChain, 25);
    const auto classes = classify_states(chain);
    const auto r = solve_topological(chain, classes, {}, Algorithm::BVI);
    CHECK(r.status == SolverStatus::Stalled);
    CHECK(r.diagnostics.find("SCC") != std::string::npos);

    const auto small = handcrafted(HandcraftedKind::TviChain, 3);
    const auto s = solve_topological(small, classify_states(small), {}, Algorithm::BVI);
    CHECK(s.status == SolverStatus::Converged);
    for (StateId i = 0; i < 3; ++i) {
        CHECK(s.lower[i] <= 0.6);
        CHECK(s.upper[i] >= 0.6);
    }

    const auto m = example_game();
    const auto mc = classify_states(m);
    const auto t = solve_topological(m, mc, {}, Algorithm::BVI);
    const auto b = solve_bvi(m, mc, {});
    CHECK(t.lower == b.lower);
    CHECK(t.upper == b.upper);
}

TEST_CASE("ptvi") {
    const auto chain = handcrafted(HandcraftedKind::TviChain, 25);
    const auto r = solve_ptvi(chain, classify_states(chain), {});
    CHECK(r.status == SolverStatus::Precise);
    for (StateId s = 0; s < 25; ++s) CHECK(std::fabs(r.lower[s] - 0.6) <= 1e-9);

    const auto m = example_game();
    for (auto inner : {InnerSolver::Naive, InnerSolver::Bounded}) {
        const auto e = solve_ptvi(m, classify_states(m), {}, inner);
        CHECK(std::fabs(e.lower[0] - 0.5) <= 1e-9);
        CHECK(std::fabs(e.lower[1] - 0.5) <= 1e-9);
        CHECK(e.lower == e.upper);
    }
}

TEST_CASE("ptvi on a Markov chain equals the chain solution") {
    const auto m = handcrafted(HandcraftedKind::TviChain, 6);
    const auto r = solve_ptvi(m, classify_states(m), {});
    CHECK(r.local_checks_failed == 0);
    MarkovChain chain;
    for (StateId s = 0; s < m.num_states(); ++s) {
        const auto t = m.transitions(s, 0);
        chain.rows.emplace_back(t.begin(), t.end());
        chain.is_goal.push_back(m.is_goal(s));
    }
    const auto v = solve_markov_chain(chain);
    for (StateId s = 0; s < m.num_states(); ++s) CHECK(r.lower[s] == doctest::Approx(v[s]).epsilon(1e-12));
}

TEST_CASE("strategy extraction") {
    const auto m = example_game();
    const auto classes = classify_states(m);
    const ValueFunction v{0.5, 0.5, 1, 0};
    auto [sigma, tau] = extract_strategies(m, classes, v, v);
    CHECK(tau.choice[0] == 0);
    CHECK(sigma.support[1] == std::vector<ActionIndex>{0, 1});

    const ValueFunction mid{0.4, 0.5, 1, 0};
    auto [sigma2, tau2] = extract_strategies(m, classes, mid, mid);
    CHECK(sigma2.support[1] == std::vector<ActionIndex>{1});
}

TEST_CASE("markov chain solve") {
    MarkovChain one;
    one.rows = {{{1, 0.6}, {2, 0.4}}, {{1, 1.0}}, {{2, 1.0}}};
    one.is_goal = {0, 1, 0};
    CHECK(solve_markov_chain(one)[0] == doctest::Approx(0.6));

    MarkovChain loop;
    loop.rows = {{{0, 0.5}, {1, 0.3}, {2, 0.2}}, {{1, 1.0}}, {{2, 1.0}}};
    loop.is_goal = {0, 1, 0};
    CHECK(solve_markov_chain(loop)[0] == doctest::Approx(0.6));

    MarkovChain dead;
    dead.rows = {{{0, 0.5}, {2, 0.5}}, {{1, 1.0}}, {{2, 1.0}}};
    dead.is_goal = {0, 1, 0};
    CHECK(solve_markov_chain(dead)[0] == 0.0);
}

TEST_CASE("local optimality check") {
    const auto m = example_game();
    const ValueFunction v{0.5, 0.5, 1, 0};
    auto sigma = max_support(4);
    auto tau = min_choice(4);
    sigma.support[1] = {0, 1};
    tau.choice[0] = 0;
    CHECK(local_optimality_check(m, sigma, tau, v));

    sigma.support[1] = {0};
    const auto chain = induced_markov_chain(m, sigma, tau);
    const auto loop_values = solve_markov_chain(chain);
    CHECK(loop_values[1] == 0.0);
    CHECK_FALSE(local_optimality_check(m, sigma, tau, loop_values));

    const auto mc = handcrafted(HandcraftedKind::TviChain, 3);
    CHECK(local_optimality_check(mc, max_support(5), min_choice(5), ValueFunction(5, 0.3)));
}

TEST_CASE("strategy iteration") {
    const auto m = example_game();
    const auto classes = classify_states(m);
    const auto r = solve_si(m, classes);
    CHECK(r.status == SolverStatus::Precise);
    CHECK(std::fabs(r.lower[0] - 0.5) <= 1e-12);

    auto tau = min_choice(4);
    tau.choice[0] = 0;
    const auto warm = solve_si(m, classes, tau);
    CHECK(warm.iterations == 1);
}

TEST_CASE("solvers agree with brute force on tiny games") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 400 && checked < 80; ++seed) {
        GenParams p;
        p.n = 2 + seed % 7;
        p.seed = 1000 + seed;
        p.extra_action_geom = 0.5;
        const auto m = generate_random(p);
        if (oracle::profile_count(m) > 20000) continue;
        ++checked;
        const auto v = oracle::game_values(m);
        const auto classes = classify_states(m);
        const auto si = solve_si(m, classes);
        const auto pt = solve_ptvi(m, classes, {});
        const auto bvi = solve_bvi(m, classes, {});
        const auto ovi = solve_ovi(m, classes, {});
        REQUIRE(bvi.ok());
        REQUIRE(ovi.ok());
        for (StateId s = 0; s < m.num_states(); ++s) {
            CHECK(std::fabs(si.lower[s] - v[s]) <= 1e-9);
            CHECK(std::fabs(pt.lower[s] - v[s]) <= 1e-9);
            CHECK(bvi.lower[s] <= v[s] + 1e-9);
            CHECK(bvi.upper[s] >= v[s] - 1e-9);
            CHECK(ovi.lower[s] <= v[s] + 1e-9);
            CHECK(ovi.upper[s] >= v[s] - 1e-9);
        }
    }
    CHECK(checked >= 40);
}

TEST_CASE("si fallback in ptvi") {
    const auto m = fixtures::slow_detour_game();
    const auto v = oracle::game_values(m);
    CHECK(v[0] == doctest::Approx(0.6));
    const auto r = solve_ptvi(m, classify_states(m), {}, InnerSolver::Naive);
    CHECK(r.status == SolverStatus::Precise);
    CHECK(r.local_checks_failed == 1);
    for (StateId s = 0; s < 4; ++s) CHECK(std::fabs(r.lower[s] - v[s]) <= 1e-9);
}

TEST_CASE("limits") {
    const auto m = handcrafted(HandcraftedKind::OviHard, 200);
    const auto classes = classify_states(m);
    SolverConfig cfg;
    cfg.max_iterations = 10;
    CHECK(solve_bvi(m, classes, cfg).status == SolverStatus::IterationCap);
    cfg.max_iterations = 100'000'000;
    cfg.timeout_s = 1e-4;
    cfg.epsilon = 1e-12;
    const auto t = solve_bvi(m, classes, cfg);
    CHECK(t.status == SolverStatus::Timeout);
    for (StateId s = 0; s < m.num_states(); ++s) CHECK(t.lower[s] <= t.upper[s]);
}
