#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "pvfrag/spinchain.hpp"

using namespace pvfrag;

TEST_CASE("rank examples") {
    CHECK(rank(SpinConfig{1, {0, 0, 0}}) == 13);
    CHECK(rank(SpinConfig{1, {-1, -1}}) == 0);
    CHECK(rank(SpinConfig{2, {2, -2}}) == 4);
    CHECK(rank(SpinConfig{1, {1}}) == 2);
}

TEST_CASE("rank/unrank round trip, exhaustive") {
    for (int F : {1, 2}) {
        const int L = F == 1 ? 4 : 3;
        Rank dim = 1;
        for (int k = 0; k < L; ++k) dim *= 2 * F + 1;
        for (Rank r = 0; r < dim; ++r) {
            SpinConfig c = unrank(r, L, F);
            REQUIRE(valid(c));
            REQUIRE(rank(c) == r);
        }
    }
}

TEST_CASE("rank/unrank round trip, randomized long chains") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int F = 1 + static_cast<int>(rng() % 3);
        const int L = 5 + static_cast<int>(rng() % 15);
        SpinConfig c{F, {}};
        for (int k = 0; k < L; ++k)
            c.values.push_back(static_cast<int>(rng() % (2 * F + 1)) - F);
        CHECK(unrank(rank(c), L, F) == c);
    }
}

TEST_CASE("total spin and dipole") {
    SpinConfig c{1, {1, 0, -1, 1}};
    CHECK(total_spin(c) == 1);
    CHECK(dipole(c) == 0 * 1 + 2 * -1 + 3 * 1);
}

TEST_CASE("config parsing") {
    CHECK(parse_config("-1, 0 ,1", 1) == SpinConfig{1, {-1, 0, 1}});
    CHECK(format_config(SpinConfig{2, {2, -2, 0}}) == "2,-2,0");
    CHECK(parse_config(format_config(SpinConfig{1, {1, 1, -1}}), 1) ==
          SpinConfig{1, {1, 1, -1}});
    CHECK_THROWS_AS(parse_config("1,,0", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("2,0", 1), std::invalid_argument);
}

TEST_CASE("sector enumeration, small examples") {
    auto s0 = enumerate_sector({3, 1, 0, std::nullopt});
    CHECK(s0.size() == 7);
    CHECK(enumerate_sector({1, 1, 2, std::nullopt}).empty());
    for (const auto& c : s0) CHECK(total_spin(c) == 0);
    CHECK(std::is_sorted(s0.begin(), s0.end(), [](const SpinConfig& a, const SpinConfig& b) {
        return rank(a) < rank(b);
    }));
}

TEST_CASE("sector sizes sum to the full dimension") {
    for (auto [L, F] : {std::pair{6, 1}, std::pair{4, 2}}) {
        std::uint64_t total = 0, expect = 1;
        for (int k = 0; k < L; ++k) expect *= 2 * F + 1;
        for (int s = -F * L; s <= F * L; ++s) {
            SectorKey key{L, F, s, std::nullopt};
            auto basis = enumerate_sector(key);
            CHECK(basis.size() == count_sector(key));
            total += basis.size();
        }
        CHECK(total == expect);
    }
}

TEST_CASE("dipole-keyed sectors agree with brute-force filtering") {
    SectorKey key{7, 1, 0, 3};
    auto basis = enumerate_sector(key);
    std::vector<SpinConfig> brute;
    for (Rank r = 0; r < 2187; ++r) {
        SpinConfig c = unrank(r, 7, 1);
        if (total_spin(c) == 0 && dipole(c) == 3) brute.push_back(c);
    }
    CHECK(basis == brute);
    CHECK(count_sector(key) == brute.size());
}

TEST_CASE("meet-in-the-middle enumeration matches the direct scan") {
    for (auto key : {SectorKey{8, 1, 0, 5}, SectorKey{8, 1, -2, std::nullopt},
                     SectorKey{6, 2, 1, 4}}) {
        CHECK(enumerate_sector_mitm(key) == enumerate_sector(key));
    }
}

TEST_CASE("restricted alphabet enumeration") {
    auto basis = enumerate_sector({4, 1, 0, std::nullopt}, {-1, 1});
    CHECK(basis.size() == 6);
    for (const auto& c : basis)
        for (int v : c.values) CHECK(v != 0);
}
