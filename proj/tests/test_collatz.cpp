#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <thread>

#include "cshift/collatz.hpp"

using namespace cshift;

TEST_CASE("collatz_step basic values") {
    CHECK(collatz_step(1) == 4);
    CHECK(collatz_step(3) == 10);
    CHECK(collatz_step(0) == 0);
    CHECK(collatz_step(6) == 3);
}

TEST_CASE("collatz_step parity split") {
    for (std::uint64_t m = 1; m <= 5000; ++m) {
        CHECK(collatz_step(2 * m) == m);
        CHECK(collatz_step(2 * m + 1) == 6 * m + 4);
    }
}

TEST_CASE("collatz_step overflow is checked") {
    std::uint64_t big_odd = ((UINT64_MAX - 1) / 3 + 2) | 1;
    CHECK_THROWS_AS(collatz_step(big_odd), std::overflow_error);
    // largest safe odd value still works
    std::uint64_t safe_odd = ((UINT64_MAX - 1) / 3) | 1;
    if (safe_odd > (UINT64_MAX - 1) / 3) safe_odd -= 2;
    CHECK(collatz_step(safe_odd) == 3 * safe_odd + 1);
}

TEST_CASE("collatz_iter") {
    CHECK(collatz_iter(1, 3) == 1);
    CHECK(collatz_iter(6, 1) == 3);
    CHECK(collatz_iter(27, 111) == 1);
    CHECK(collatz_iter(5, 0) == 5);
    CHECK_THROWS_AS(collatz_iter(27, 50, 10), budget_exhausted);
}

TEST_CASE("orbit of 27: preperiod and max excursion via direct iteration") {
    // independent oracle: step until first {1,2,4}, tracking the max
    std::uint64_t v = 27, steps = 0, peak = 27;
    while (!in_known_cycle(v)) {
        v = collatz_step(v);
        ++steps;
        peak = std::max(peak, v);
    }
    CHECK(peak == 9232);

    auto rec = orbit_until_cycle(27);
    CHECK(rec.preperiod_K == steps);
    CHECK(rec.max_excursion == 9232);
    CHECK(collatz_iter(27, steps) == rec.prefix.back());
}

TEST_CASE("orbit_until_cycle shapes") {
    auto r1 = orbit_until_cycle(1);
    CHECK(r1.preperiod_K == 0);
    CHECK(r1.prefix == std::vector<std::uint64_t>{1});
    CHECK(r1.cycle == std::vector<std::uint64_t>{1, 4, 2});

    auto r6 = orbit_until_cycle(6);
    CHECK(r6.prefix == std::vector<std::uint64_t>{6, 3, 10, 5, 16, 8, 4});
    CHECK(r6.preperiod_K == 6);
    CHECK(r6.cycle == std::vector<std::uint64_t>{4, 2, 1});
    CHECK(r6.max_excursion == 16);

    CHECK_THROWS_AS(orbit_until_cycle(27, 5), budget_exhausted);
}

TEST_CASE("orbit record for start 0") {
    auto r0 = orbit_until_cycle(0);
    CHECK(r0.preperiod_K == 0);
    CHECK(r0.cycle == std::vector<std::uint64_t>{0});
    CHECK(iterate_via_orbit(r0, 12345) == 0);
}

TEST_CASE("iterate_via_orbit examples") {
    CHECK(iterate_via_orbit(orbit_until_cycle(1), 5) == 2);
    CHECK(iterate_via_orbit(orbit_until_cycle(6), 6) == 4);
    for (std::uint64_t m : {1ull, 2ull, 7ull, 27ull, 97ull})
        CHECK(iterate_via_orbit(orbit_until_cycle(m), 0) == m);
}

TEST_CASE("orbit lookup agrees with direct iteration for m <= 10^4, j <= 10^3") {
    for (std::uint64_t m = 1; m <= 10'000; ++m) {
        auto rec = orbit_until_cycle(m);  // also: every orbit reaches the cycle in budget
        std::uint64_t v = m;
        for (std::uint64_t j = 0; j <= 1000; ++j) {
            REQUIRE(rec.iterate(j) == v);
            v = collatz_step(v);
        }
    }
}

TEST_CASE("cycle positions have period 3") {
    for (std::uint64_t m : {1ull, 6ull, 27ull, 703ull}) {
        auto rec = orbit_until_cycle(m);
        for (std::uint64_t j = rec.preperiod_K; j < rec.preperiod_K + 30; ++j)
            CHECK(rec.iterate(j + 3) == rec.iterate(j));
    }
}

TEST_CASE("orbit cache: get-or-compute and concurrent access") {
    OrbitCache cache;
    const auto& a = cache.get(27);
    const auto& b = cache.get(27);
    CHECK(&a == &b);
    CHECK(cache.size() == 1);

    std::vector<std::thread> workers;
    for (int t = 0; t < 4; ++t)
        workers.emplace_back([&cache] {
            for (std::uint64_t m = 1; m <= 500; ++m) cache.get(m);
        });
    for (auto& w : workers) w.join();
    CHECK(cache.size() == 500);
    CHECK(cache.get(6).preperiod_K == 6);
}

TEST_CASE("orbit cache persistence round-trip") {
    std::string path = "orbit_cache_test.txt";
    {
        OrbitCache cache;
        cache.get(6);
        cache.get(27);
        cache.get(1);
        cache.save(path);
    }
    OrbitCache loaded;
    loaded.load(path);
    CHECK(loaded.size() == 3);
    CHECK(loaded.get(6).prefix == orbit_until_cycle(6).prefix);
    CHECK(loaded.get(27).max_excursion == 9232);
    CHECK(loaded.get(1).cycle == std::vector<std::uint64_t>{1, 4, 2});
    std::remove(path.c_str());

    OrbitCache cold;
    cold.load("no_such_cache_file.txt");  // missing file is a cold cache
    CHECK(cold.size() == 0);
}
