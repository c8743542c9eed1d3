#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "oel/planner.hpp"
#include "oel/rng.hpp"
#include "oracles.hpp"

using namespace oel;
using oracles::make_latent_store;

namespace {

const Heuristic kZeroHeuristic = [](const Latent&, const Latent&) { return 0.0; };

TripletStore random_store(Rng& rng, int T, int m) {
    std::vector<std::pair<Latent, Latent>> pairs;
    for (int t = 0; t < T; ++t) {
        Latent pre(m), post(m);
        for (int j = 0; j < m; ++j) {
            pre[j] = static_cast<float>(rng.uniform(-1.0, 1.0));
            post[j] = static_cast<float>(rng.uniform(-1.0, 1.0));
        }
        pairs.emplace_back(std::move(pre), std::move(post));
    }
    return make_latent_store(pairs);
}

Latent random_latent(Rng& rng, int m) {
    Latent v(m);
    for (double& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
    return v;
}

/// Symbolic plan execution: walk matching triplets and confirm the final
/// state is goal-equivalent at the plan's level.
bool plan_is_valid(const Plan& p, const Latent& start, const Latent& goal,
                   const TripletStore& store, const ThresholdTable& table) {
    if (p.predicted_states.empty() || p.predicted_states.front() != start) return false;
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
        const Latent& from = p.predicted_states[i];
        const Latent& to = p.predicted_states[i + 1];
        bool matched = false;
        for (std::size_t t = 0; t < store.size(); ++t)
            if (store[t].action == p.actions[i] && *store[t].post_latent == to &&
                table.same_state(from, *store[t].pre_latent, p.level))
                matched = true;
        if (!matched) return false;
    }
    return table.same_state(p.predicted_states.back(), goal, p.level);
}

}  // namespace

TEST_CASE("no successors when the state matches no pre latent") {
    const TripletStore store = make_latent_store({{{0.0, 0.0}, {0.1, 0.1}}});
    const ThresholdTable table = ThresholdTable::build(store, 4);
    CHECK(successors({5.0, 5.0}, 1, store, table).empty());
}

TEST_CASE("an exact pre match yields that triplet's action and post latent") {
    const TripletStore store = make_latent_store(
        {{{0.0, 0.0}, {0.1, 0.1}}, {{2.0, 2.0}, {0.3, 0.3}}, {{-2.0, -2.0}, {0.5, 0.5}}});
    const ThresholdTable table = ThresholdTable::build(store, 4);
    const auto succ = successors(*store[1].pre_latent, 1, store, table);
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].triplet_index == 1);
    CHECK(*succ[0].action == store[1].action);
    CHECK(*succ[0].post_latent == *store[1].post_latent);
}

TEST_CASE("successor sets grow with the abstraction level") {
    Rng rng(31);
    const TripletStore store = random_store(rng, 60, 3);
    const ThresholdTable table = ThresholdTable::build(store, 15);
    for (int trial = 0; trial < 20; ++trial) {
        const Latent q = random_latent(rng, 3);
        std::set<std::size_t> previous;
        for (int level = 1; level <= 15; ++level) {
            std::set<std::size_t> current;
            for (const Successor& s : successors(q, level, store, table))
                current.insert(s.triplet_index);
            for (std::size_t t : previous) REQUIRE(current.count(t) == 1);
            previous = std::move(current);
        }
    }
}

TEST_CASE("compute_max_depth floors the remaining budget") {
    CHECK(compute_max_depth(4000) == 4);
    CHECK(compute_max_depth(0) == 0);
    CHECK(compute_max_depth(999) == 0);
    CHECK(compute_max_depth(10000) == 10);
}

TEST_CASE("a goal-equivalent start gives the empty plan at level 1") {
    const TripletStore store = make_latent_store({{{0.0}, {1.0}}});
    const ThresholdTable table = ThresholdTable::build(store, 4);
    const auto p = plan({0.5}, {0.5}, store, table, 3);
    REQUIRE(p.has_value());
    CHECK(p->level == 1);
    CHECK(p->actions.empty());
}

TEST_CASE("a single matching triplet gives a one-action plan") {
    // The second triplet has zero diff, so the level-1 threshold is 0 and the
    // start is not already goal-equivalent.
    const TripletStore store = make_latent_store({{{0.0}, {1.0}}, {{5.0}, {5.0}}});
    const ThresholdTable table = ThresholdTable::build(store, 4);
    const auto p = plan({0.0}, {1.0}, store, table, 3);
    REQUIRE(p.has_value());
    REQUIRE(p->actions.size() == 1);
    CHECK(p->actions[0] == store[0].action);
    CHECK(p->level == 1);
    CHECK(p->predicted_states.back() == *store[0].post_latent);
}

TEST_CASE("an unreachable goal returns no plan") {
    const TripletStore store = make_latent_store({{{0.0}, {0.1}}});
    const ThresholdTable table = ThresholdTable::build(store, 4);
    CHECK_FALSE(plan({0.0}, {100.0}, store, table, 4).has_value());
}

TEST_CASE("zero-heuristic planning matches the BFS oracle level by level") {
    Rng rng(41);
    for (int instance = 0; instance < 60; ++instance) {
        const int T = rng.uniform_int(1, 60);
        const int m = rng.uniform_int(1, 4);
        const int L = rng.uniform_int(2, 12);
        const int depth = rng.uniform_int(0, 4);
        const TripletStore store = random_store(rng, T, m);
        const ThresholdTable table = ThresholdTable::build(store, L);
        const Latent start = random_latent(rng, m);
        const Latent goal = random_latent(rng, m);

        for (int level = 1; level <= L; ++level) {
            const auto expected =
                oracles::bfs_plan_length(start, goal, store, table, level, depth);
            const auto got = detail::astar_at_level(start, goal, level, store, table, depth,
                                                    kZeroHeuristic);
            REQUIRE(got.has_value() == expected.has_value());
            if (got)
                REQUIRE(static_cast<int>(got->actions.size()) == *expected);
        }

        // The ladder must find the first level at which a plan exists.
        const auto ladder = plan(start, goal, store, table, depth, kZeroHeuristic);
        int first_level = 0;
        for (int level = 1; level <= L && first_level == 0; ++level)
            if (oracles::bfs_plan_length(start, goal, store, table, level, depth)) first_level = level;
        if (first_level == 0) {
            REQUIRE_FALSE(ladder.has_value());
        } else {
            REQUIRE(ladder.has_value());
            REQUIRE(ladder->level == first_level);
        }
    }
}

TEST_CASE("manhattan-heuristic plans are valid and within the depth bound") {
    Rng rng(43);
    for (int instance = 0; instance < 40; ++instance) {
        const int T = rng.uniform_int(1, 80);
        const int m = rng.uniform_int(1, 4);
        const int depth = rng.uniform_int(0, 4);
        const TripletStore store = random_store(rng, T, m);
        const ThresholdTable table = ThresholdTable::build(store, 10);
        const Latent start = random_latent(rng, m);
        const Latent goal = random_latent(rng, m);

        const auto p = plan(start, goal, store, table, depth);
        const bool exists = [&] {
            for (int level = 1; level <= 10; ++level)
                if (oracles::bfs_plan_length(start, goal, store, table, level, depth)) return true;
            return false;
        }();
        REQUIRE(p.has_value() == exists);
        if (p) {
            REQUIRE(static_cast<int>(p->actions.size()) <= depth);
            REQUIRE(plan_is_valid(*p, start, goal, store, table));
            // Ladder minimality: nothing below the returned level works.
            for (int level = 1; level < p->level; ++level)
                REQUIRE_FALSE(
                    oracles::bfs_plan_length(start, goal, store, table, level, depth).has_value());
        }
    }
}

TEST_CASE("branching factor is nondecreasing in the abstraction level") {
    Rng rng(47);
    const TripletStore store = random_store(rng, 80, 3);
    const ThresholdTable table = ThresholdTable::build(store, 25);
    std::vector<Latent> samples;
    for (int i = 0; i < 10; ++i) samples.push_back(random_latent(rng, 3));
    for (const Latent& q : samples) {
        std::size_t previous = 0;
        for (int level = 1; level <= 25; ++level) {
            const std::size_t count = successors(q, level, store, table).size();
            REQUIRE(count >= previous);
            previous = count;
        }
    }
    const SearchDiagnostics diag = diagnostics(store, table, samples);
    for (std::size_t i = 1; i < diag.branching.size(); ++i)
        REQUIRE(diag.branching[i] >= diag.branching[i - 1]);
}

TEST_CASE("diagnostics count distinct states per level") {
    // Distinct diffs {0, 1, 2}: the level-1 threshold is 0, so the greedy
    // dedup sees exactly the distinct latent values.
    const TripletStore store =
        make_latent_store({{{0.0}, {0.0}}, {{5.0}, {6.0}}, {{10.0}, {12.0}}});
    const ThresholdTable table = ThresholdTable::build(store, 3);
    const SearchDiagnostics diag = diagnostics(store, table, {});
    CHECK(diag.distinct_states[0] == 5);  // {0, 5, 6, 10, 12}
    CHECK(diag.distinct_states[1] == 4);  // threshold 1 merges 5 and 6
    CHECK(diag.distinct_states[2] == 3);  // threshold 2 also merges 10 and 12
}

TEST_CASE("at a level whose thresholds dominate all distances there is one state") {
    // Max diff (100) exceeds every pairwise latent distance.
    const TripletStore store =
        make_latent_store({{{0.0}, {100.0}}, {{1.0}, {2.0}}, {{3.0}, {4.0}}});
    const ThresholdTable table = ThresholdTable::build(store, 5);
    const SearchDiagnostics diag = diagnostics(store, table, {});
    CHECK(diag.distinct_states.back() == 1);
}
