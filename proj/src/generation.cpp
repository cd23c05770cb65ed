#include "ssg/generation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "ssg/graph.hpp"

namespace ssg {

namespace {

bool contains(const Distribution& d, StateId t) {
    return std::any_of(d.begin(), d.end(), [t](const Transition& x) { return x.target == t; });
}

double increment(Rng& rng, double min_prob) { return min_prob + (1.0 - min_prob) * rng.uniform_oc(); }

StateId pick_fresh(const Distribution& d, StateId first, std::size_t count, Rng& rng) {
    if (2 * d.size() < count) {
        for (;;) {
            const auto t = static_cast<StateId>(first + rng.below(count));
            if (!contains(d, t)) return t;
        }
    }
    std::vector<StateId> fresh;
    for (std::size_t i = 0; i < count; ++i) {
        const auto t = static_cast<StateId>(first + i);
        if (!contains(d, t)) fresh.push_back(t);
    }
    return fresh[rng.below(fresh.size())];
}

std::size_t geometric(Rng& rng, double p) {
    const auto cap = static_cast<std::size_t>(std::ceil(10.0 * p / (1.0 - p)));
    std::size_t m = 0;
    while (m < cap && rng.bernoulli(p)) ++m;
    return m;
}

// Actions collected per state before the model is assembled.
struct Pending {
    std::vector<Player> owner;
    std::vector<std::vector<Distribution>> actions;

    explicit Pending(std::size_t n) : owner(n, Player::Maximizer), actions(n) {}

    SsgModel build(StateId initial, const std::vector<StateId>& goals) const {
        ModelBuilder b(owner.size());
        for (StateId s = 0; s < owner.size(); ++s) {
            b.set_owner(s, owner[s]);
            for (std::size_t i = 0; i < actions[s].size(); ++i)
                b.add_action(s, "a" + std::to_string(i), actions[s][i]);
        }
        b.set_initial(initial);
        for (StateId g : goals) b.add_goal(g);
        return b.build();
    }
};

struct BlockOptions {
    double minimizer_prob;
    double extra_action_geom;
    FillOptions fill;
    bool last_is_goal;
};

// Forward and backward procedure on the states [first, first + size); all
// targets stay inside the block. Draw order: owners, forward, backward.
void random_block(Pending& p, StateId first, std::size_t size, Rng& rng, const BlockOptions& o) {
    for (std::size_t i = 0; i < size; ++i)
        p.owner[first + i] = rng.bernoulli(o.minimizer_prob) ? Player::Minimizer : Player::Maximizer;

    std::vector<std::uint8_t> incoming(size, 0);
    for (std::size_t s = 1; s < size; ++s) {
        if (incoming[s]) continue;
        const auto src = static_cast<StateId>(first + rng.below(s));
        Distribution d{{static_cast<StateId>(first + s), increment(rng, o.fill.min_prob)}};
        if (d[0].prob < 1.0) fill_action(d, first, size, rng, o.fill);
        for (const auto& t : d) incoming[t.target - first] = 1;
        p.actions[src].push_back(std::move(d));
    }

    for (std::size_t i = size; i-- > 0;) {
        if (o.last_is_goal && i == size - 1) continue;
        const StateId s = first + static_cast<StateId>(i);
        std::size_t m = geometric(rng, o.extra_action_geom);
        if (p.actions[s].empty()) m = std::max<std::size_t>(m, 1);
        for (std::size_t j = 0; j < m; ++j) {
            Distribution d;
            fill_action(d, first, size, rng, o.fill);
            p.actions[s].push_back(std::move(d));
        }
    }
}

void check_probability(double x, const char* name, bool open_low, bool open_high) {
    const bool ok = (open_low ? x > 0.0 : x >= 0.0) && (open_high ? x < 1.0 : x <= 1.0);
    if (!ok) throw std::invalid_argument(std::string(name) + " out of range");
}

}  // namespace

std::size_t fill_action(Distribution& dist, StateId first, std::size_t count, Rng& rng,
                        const FillOptions& options) {
    if (count == 0) throw std::invalid_argument("fill_action needs at least one target");
    const Distribution original = dist;
    for (int attempt = 0;; ++attempt) {
        Distribution d = original;
        double mass = probability_mass(d);
        while (mass < 1.0 && d.size() < count &&
               (options.max_transitions == 0 || d.size() < options.max_transitions)) {
            const StateId t = pick_fresh(d, first, count, rng);
            const double inc = increment(rng, options.min_prob);
            d.push_back({t, inc});
            mass += inc;
        }
        if (d.empty()) throw std::invalid_argument("fill_action produced no entries");
        // Decrease or increase the most recent entry so the sum is exactly 1.
        double head = 0.0;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) head += d[i].prob;
        d.back().prob = 1.0 - head;
        if (!options.strict || d.back().prob >= options.min_prob || attempt == 99) {
            const std::size_t added = d.size() - original.size();
            dist = std::move(d);
            return added;
        }
    }
}

void GenParams::validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    check_probability(minimizer_prob, "minimizer_prob", false, false);
    check_probability(extra_action_geom, "extra_action_geom", true, true);
    check_probability(min_prob, "min_prob", false, false);
}

void TreeParams::validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    check_probability(minimizer_prob, "minimizer_prob", false, false);
    check_probability(extra_action_geom, "extra_action_geom", true, true);
    check_probability(min_prob, "min_prob", false, false);
}

void SccChainParams::validate() const {
    if (scc_size_min < 1 || scc_size_min > scc_size_max || scc_size_max > n)
        throw std::invalid_argument("need 1 <= scc_size_min <= scc_size_max <= n");
    check_probability(minimizer_prob, "minimizer_prob", false, false);
    check_probability(extra_action_geom, "extra_action_geom", true, true);
    check_probability(min_prob, "min_prob", false, true);
}

SsgModel generate_random(const GenParams& params) {
    params.validate();
    Rng rng(params.seed);
    Pending p(params.n);
    const BlockOptions o{params.minimizer_prob, params.extra_action_geom,
                         FillOptions{params.min_prob, params.max_transitions_per_action, params.strict}, true};
    random_block(p, 0, params.n, rng, o);
    return p.build(0, {static_cast<StateId>(params.n - 1)});
}

SsgModel generate_tree(const TreeParams& params) {
    params.validate();
    Rng rng(params.seed);
    const std::size_t n = params.n;
    const FillOptions fill{params.min_prob, 0, false};
    Pending p(n);
    for (std::size_t s = 0; s < n; ++s)
        p.owner[s] = rng.bernoulli(params.minimizer_prob) ? Player::Minimizer : Player::Maximizer;

    std::size_t next = 1;
    for (std::size_t v = 0; v < n && next < n; ++v) {
        const std::size_t children = std::min(params.k, n - next);
        const std::size_t base = next;
        next += children;
        for (std::size_t i = 0; i < params.k; ++i) {
            const auto child = static_cast<StateId>(base + i % children);
            Distribution d{{child, increment(rng, params.min_prob)}};
            if (d[0].prob < 1.0) fill_action(d, 0, n, rng, fill);
            p.actions[v].push_back(std::move(d));
        }
    }
    // Backward pass over the leaves, the goal excluded.
    for (std::size_t s = n - 1; s-- > 0;) {
        if (!p.actions[s].empty()) continue;
        const std::size_t m = std::clamp<std::size_t>(geometric(rng, params.extra_action_geom), 1, params.k);
        for (std::size_t j = 0; j < m; ++j) {
            Distribution d;
            fill_action(d, 0, n, rng, fill);
            p.actions[s].push_back(std::move(d));
        }
    }
    return p.build(0, {static_cast<StateId>(n - 1)});
}

SsgModel generate_scc_chain(const SccChainParams& params) {
    params.validate();
    Rng rng(params.seed);
    std::vector<std::size_t> sizes;
    std::size_t total = 0;
    while (total < params.n) {
        sizes.push_back(static_cast<std::size_t>(rng.between(params.scc_size_min, params.scc_size_max)));
        total += sizes.back();
    }
    const auto goal = static_cast<StateId>(total);
    const auto sink = static_cast<StateId>(total + 1);
    Pending p(total + 2);
    const BlockOptions o{params.minimizer_prob, params.extra_action_geom, FillOptions{params.min_prob, 0, false},
                         false};

    StateId first = 0;
    StateId previous_first = 0;
    std::size_t previous_size = 0;
    for (std::size_t size : sizes) {
        random_block(p, first, size, rng, o);

        // Make the block one SCC by closing a cycle through its components.
        ModelBuilder b(size);
        for (std::size_t i = 0; i < size; ++i) {
            for (const auto& d : p.actions[first + i]) {
                Distribution local;
                for (const auto& t : d) local.push_back({t.target - first, t.prob});
                b.add_action(static_cast<StateId>(i), "", local);
            }
        }
        const auto scc = scc_decomposition(b.build());
        const std::size_t r = scc.components.size();
        if (r > 1) {
            for (std::size_t c = 0; c < r; ++c) {
                const StateId from = first + scc.components[c].front();
                const StateId to = first + scc.components[(c + 1) % r].front();
                p.actions[from].push_back({{to, 1.0}});
            }
        }
        if (previous_size != 0) {
            const auto from = static_cast<StateId>(previous_first + rng.below(previous_size));
            p.actions[from].push_back({{first, 1.0}});
        }
        previous_first = first;
        previous_size = size;
        first += static_cast<StateId>(size);
    }
    const auto exit_state = static_cast<StateId>(previous_first + rng.below(previous_size));
    const double to_goal = params.min_prob + (1.0 - 2.0 * params.min_prob) * rng.uniform_oc();
    Distribution d{{goal, to_goal}, {sink, 1.0 - to_goal}};
    p.actions[exit_state].push_back(std::move(d));
    p.actions[sink].push_back({{sink, 1.0}});
    return p.build(0, {goal});
}

HandcraftedKind parse_handcrafted_kind(const std::string& name) {
    for (auto k : {HandcraftedKind::TviChain, HandcraftedKind::OviEasy, HandcraftedKind::OviHard,
                   HandcraftedKind::SimpleScc})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown handcrafted model '" + name + "'");
}

std::string to_string(HandcraftedKind kind) {
    switch (kind) {
        case HandcraftedKind::TviChain: return "tvi-chain";
        case HandcraftedKind::OviEasy: return "ovi-easy";
        case HandcraftedKind::OviHard: return "ovi-hard";
        case HandcraftedKind::SimpleScc: return "simple-scc";
    }
    return "unknown";
}

namespace {

SsgModel tvi_chain(std::size_t n) {
    const auto t = static_cast<StateId>(n), z = static_cast<StateId>(n + 1);
    ModelBuilder b(n + 2);
    for (StateId s = 0; s + 1 < n; ++s) b.add_action(s, "a", {{s, 0.5}, {s + 1, 0.5}});
    b.add_action(static_cast<StateId>(n - 1), "a", {{t, 0.6}, {z, 0.4}});
    b.add_action(t, "a", {{t, 1.0}});
    b.add_action(z, "a", {{z, 1.0}});
    b.add_goal(t);
    return b.build();
}

SsgModel ovi_chain(std::size_t n, bool with_safe_action) {
    const auto goal = static_cast<StateId>(n), sink = static_cast<StateId>(n + 1);
    ModelBuilder b(n + 2);
    for (StateId s = 0; s + 1 < n; ++s) {
        if (with_safe_action) b.add_action(s, "half", {{goal, 0.5}, {sink, 0.5}});
        b.add_action(s, "stay", {{s, 0.99}, {s + 1, 0.01}});
    }
    const auto last = static_cast<StateId>(n - 1);
    if (with_safe_action) b.add_action(last, "half", {{goal, 0.5}, {sink, 0.5}});
    b.add_action(last, "end", {{goal, 0.49}, {sink, 0.51}});
    b.add_action(goal, "loop", {{goal, 1.0}});
    b.add_action(sink, "loop", {{sink, 1.0}});
    b.add_goal(goal);
    return b.build();
}

// m binary trees over n states. Inner nodes pick a child, leaves return to
// their own root or move on to the next root; the last tree's leaves reach
// the goal and the sink instead.
SsgModel simple_scc(std::size_t n, std::size_t m) {
    if (m < 1 || m > n) throw std::invalid_argument("simple-scc needs 1 <= m <= n");
    const auto goal = static_cast<StateId>(n), sink = static_cast<StateId>(n + 1);
    ModelBuilder b(n + 2);
    std::vector<StateId> roots;
    std::vector<std::size_t> sizes;
    StateId first = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sizes.push_back(n / m + (i < n % m ? 1 : 0));
        roots.push_back(first);
        first += static_cast<StateId>(sizes.back());
    }
    for (std::size_t i = 0; i < m; ++i) {
        const StateId root = roots[i];
        const std::size_t size = sizes[i];
        for (std::size_t j = 0; j < size; ++j) {
            const auto s = static_cast<StateId>(root + j);
            const auto depth = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(j + 1))));
            b.set_owner(s, depth % 2 == 0 ? Player::Maximizer : Player::Minimizer);
            std::size_t kids = 0;
            for (std::size_t c = 2 * j + 1; c <= 2 * j + 2 && c < size; ++c, ++kids)
                b.add_action(s, "child" + std::to_string(kids), {{static_cast<StateId>(root + c), 1.0}});
            if (kids != 0) continue;
            if (i + 1 < m)
                b.add_action(s, "leaf", {{root, 0.5}, {roots[i + 1], 0.5}});
            else
                b.add_action(s, "leaf", {{root, 0.5}, {goal, 0.3}, {sink, 0.2}});
        }
    }
    b.add_action(goal, "loop", {{goal, 1.0}});
    b.add_action(sink, "loop", {{sink, 1.0}});
    b.add_goal(goal);
    return b.build();
}

}  // namespace

SsgModel handcrafted(HandcraftedKind kind, std::size_t n, std::size_t m) {
    if (n < 1) throw std::invalid_argument("handcrafted models need n >= 1");
    switch (kind) {
        case HandcraftedKind::TviChain: return tvi_chain(n);
        case HandcraftedKind::OviEasy: return ovi_chain(n, true);
        case HandcraftedKind::OviHard: return ovi_chain(n, false);
        case HandcraftedKind::SimpleScc: return simple_scc(n, m);
    }
    throw std::invalid_argument("unknown handcrafted kind");
}

}  // namespace ssg
