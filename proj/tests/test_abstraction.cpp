#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oel/abstraction.hpp"
#include "oel/rng.hpp"
#include "oracles.hpp"

using namespace oel;
using oracles::make_latent_store;

namespace {

/// Random encoded store with T triplets and m latents; values are f32-exact
/// by construction.
TripletStore random_store(Rng& rng, int T, int m) {
    std::vector<std::pair<Latent, Latent>> pairs;
    for (int t = 0; t < T; ++t) {
        Latent pre(m), post(m);
        for (int j = 0; j < m; ++j) {
            pre[j] = static_cast<float>(rng.uniform(-1.0, 1.0));
            // Occasionally a no-effect action: zero diff in every latent.
            post[j] = (rng.uniform() < 0.1) ? pre[j]
                                            : static_cast<double>(static_cast<float>(
                                                  pre[j] + rng.uniform(-0.5, 0.5)));
        }
        pairs.emplace_back(std::move(pre), std::move(post));
    }
    return make_latent_store(pairs);
}

}  // namespace

TEST_CASE("a single triplet makes every row equal to its diff vector") {
    const TripletStore store = make_latent_store({{{0.1, 0.4}, {0.3, 0.35}}});
    const ThresholdTable table = ThresholdTable::build(store, 5);
    const double d0 = std::abs((*store[0].pre_latent)[0] - (*store[0].post_latent)[0]);
    const double d1 = std::abs((*store[0].pre_latent)[1] - (*store[0].post_latent)[1]);
    for (int level = 1; level <= 5; ++level) {
        CHECK(table.threshold(level, 0) == d0);
        CHECK(table.threshold(level, 1) == d1);
    }
}

TEST_CASE("three diffs at three levels land on the sorted ranks") {
    // Diffs 0.5, 0.1, 0.9 in store order; sorted 0.1, 0.5, 0.9.
    const TripletStore store =
        make_latent_store({{{0.0}, {0.5}}, {{0.0}, {0.1}}, {{0.0}, {0.9}}});
    const ThresholdTable table = ThresholdTable::build(store, 3);
    CHECK(table.threshold(1, 0) == Catch::Approx(0.1).margin(1e-7));
    CHECK(table.threshold(2, 0) == Catch::Approx(0.5).margin(1e-7));
    CHECK(table.threshold(3, 0) == Catch::Approx(0.9).margin(1e-7));
}

TEST_CASE("row 1 is the per-latent minimum and row L the maximum") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const int T = rng.uniform_int(1, 60);
        const int m = rng.uniform_int(1, 5);
        const TripletStore store = random_store(rng, T, m);
        const ThresholdTable table = ThresholdTable::build(store, 17);
        for (int j = 0; j < m; ++j) {
            double lo = 1e300, hi = -1e300;
            for (std::size_t t = 0; t < store.size(); ++t) {
                const double d = std::abs((*store[t].pre_latent)[j] - (*store[t].post_latent)[j]);
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            REQUIRE(table.threshold(1, j) == lo);
            REQUIRE(table.threshold(17, j) == hi);
        }
    }
}

TEST_CASE("threshold columns are nondecreasing in level") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int T = rng.uniform_int(1, 200);
        const int m = rng.uniform_int(1, 7);
        const int L = (trial % 3 == 0) ? 2 : (trial % 3 == 1 ? 10 : 200);
        const ThresholdTable table = ThresholdTable::build(random_store(rng, T, m), L);
        for (int j = 0; j < m; ++j)
            for (int level = 2; level <= L; ++level)
                REQUIRE(table.threshold(level, j) >= table.threshold(level - 1, j));
    }
}

TEST_CASE("build rejects bad input") {
    CHECK_THROWS_AS(ThresholdTable::build(TripletStore{}, 10), ConfigError);
    const TripletStore store = make_latent_store({{{0.0}, {0.5}}});
    CHECK_THROWS_AS(ThresholdTable::build(store, 1), ConfigError);
}

TEST_CASE("same_state is reflexive at every level") {
    Rng rng(19);
    const TripletStore store = random_store(rng, 40, 3);
    const ThresholdTable table = ThresholdTable::build(store, 20);
    for (int level = 1; level <= 20; ++level) {
        const Latent a = {0.2, -0.4, 0.9};
        CHECK(table.same_state(a, a, level));
    }
}

TEST_CASE("one latent over threshold defeats the conjunction") {
    const TripletStore store = make_latent_store({{{0.0, 0.0}, {0.2, 0.3}}});
    const ThresholdTable table = ThresholdTable::build(store, 2);
    const double t0 = table.threshold(1, 0);
    const double t1 = table.threshold(1, 1);
    CHECK(table.same_state({0.0, 0.0}, {t0, t1}, 1));
    CHECK_FALSE(table.same_state({0.0, 0.0}, {t0 * 1.5, t1 * 0.5}, 1));
}

TEST_CASE("pairs inside the max thresholds flip from false to true up the ladder") {
    const TripletStore store =
        make_latent_store({{{0.0}, {0.05}}, {{0.0}, {0.5}}, {{0.0}, {1.0}}});
    const ThresholdTable table = ThresholdTable::build(store, 3);
    const Latent a = {0.0}, b = {0.75};
    CHECK_FALSE(table.same_state(a, b, 1));
    CHECK(table.same_state(a, b, 3));
}

TEST_CASE("same_state queries are monotone and symmetric in level") {
    Rng rng(23);
    const TripletStore store = random_store(rng, 100, 4);
    const ThresholdTable table = ThresholdTable::build(store, 30);
    for (int trial = 0; trial < 200; ++trial) {
        Latent a(4), b(4);
        for (int j = 0; j < 4; ++j) {
            a[j] = rng.uniform(-1.5, 1.5);
            b[j] = rng.uniform(-1.5, 1.5);
        }
        bool seen_true = false;
        for (int level = 1; level <= 30; ++level) {
            const bool same = table.same_state(a, b, level);
            CHECK(same == table.same_state(b, a, level));
            if (seen_true) REQUIRE(same);  // once same, same at all higher levels
            seen_true = seen_true || same;
        }
    }
}

TEST_CASE("level out of range is rejected") {
    const TripletStore store = make_latent_store({{{0.0}, {0.5}}});
    const ThresholdTable table = ThresholdTable::build(store, 4);
    CHECK_THROWS_AS(table.same_state({0.0}, {0.0}, 0), ConfigError);
    CHECK_THROWS_AS(table.same_state({0.0}, {0.0}, 5), ConfigError);
    CHECK_THROWS_AS(table.threshold(99, 0), ConfigError);
}
