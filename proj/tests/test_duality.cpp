#include <catch2/catch_amalgamated.hpp>

#include "pvfrag/duality.hpp"
#include "pvfrag/krylov.hpp"

using namespace pvfrag;

TEST_CASE("path construction") {
    CHECK(to_path(SpinConfig{1, {1, 0, -1, 1}}).heights == std::vector<int>{0, 1, 1, 0, 1});
    CHECK(to_path(SpinConfig{1, {0, 0}}).heights == std::vector<int>{0, 0, 0});
}

TEST_CASE("path round trip, exhaustive F=1 L=5") {
    for (Rank r = 0; r < 243; ++r) {
        SpinConfig c = unrank(r, 5, 1);
        CHECK(from_path(to_path(c)) == c);
    }
}

TEST_CASE("from_path rejects oversized steps") {
    CHECK_THROWS_AS(from_path(ChargePath{1, {0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(from_path(ChargePath{1, {1, 0}}), std::invalid_argument);
}

TEST_CASE("regional extrema, degenerate paths") {
    CHECK_THROWS_AS(regional_extrema(ChargePath{1, {0, 1}}, 1), std::invalid_argument);
    // a purely monotone path has no peak/valley alternation
    CHECK(regional_extrema(ChargePath{1, {0, 1, 2, 3}}, 4).empty());
    CHECK(regional_extrema(to_path(SpinConfig{1, {0, 0, 0}}), 2).empty());
}

TEST_CASE("regional extrema, alternating deep path") {
    SpinConfig c{1, {1, 1, -1, -1, -1, -1, 1, 1, 1, 1}};
    auto labels = regional_extrema(to_path(c), 3);
    REQUIRE(labels.size() == 3);
    CHECK(labels[0] == PVLabel{PVKind::Peak, 3, 2});
    CHECK(labels[1] == PVLabel{PVKind::Valley, 11, -2});
    CHECK(labels[2] == PVLabel{PVKind::Peak, 19, 2});
}

TEST_CASE("label sequence is constant across a Krylov class") {
    SpinConfig c{1, {1, 1, -1, -1, -1, -1, 1, 1, 1, -1, 0, 0}};
    auto model = build_model("h3_1");
    auto [members, dim] = class_of(model, c);
    REQUIRE(dim > 1);
    auto ref = pv_signature(regional_extrema(to_path(c), 3));
    for (const auto& m : members)
        CHECK(pv_signature(regional_extrema(to_path(m), 3)) == ref);
}

TEST_CASE("core membership and basis") {
    CHECK(core_membership(SpinConfig{1, {1, -1, 1, 0}}));
    CHECK_FALSE(core_membership(SpinConfig{1, {-1, 1}}));
    CHECK_FALSE(core_membership(SpinConfig{1, {1, 1}}));
    CHECK(core_membership(SpinConfig{2, {1, 1, -2}}));

    auto b1 = core_basis(1, 1);
    REQUIRE(b1.size() == 2);
    CHECK(b1[0].values == std::vector<int>{0});
    CHECK(b1[1].values == std::vector<int>{1});
    for (int L = 1; L <= 6; ++L)
        CHECK(core_basis(L, 1).size() == (std::size_t{1} << L));
    CHECK(core_basis(2, 2).size() == 9);
    for (const auto& c : core_basis(5, 2)) CHECK(core_membership(c));
}

TEST_CASE("charge strings") {
    CHECK(to_charge_string(SpinConfig{1, {1, -1}}) == std::vector<int>{1, -1});
    CHECK(to_charge_string(SpinConfig{2, {1, 1, -1}}) == std::vector<int>{0, 2, 0});
    CHECK_THROWS_AS(to_charge_string(SpinConfig{1, {-1, 1}}), std::invalid_argument);
    CHECK(render_charge(1) == "↑");
    CHECK(render_charge(-1) == "↓");
    CHECK(render_charge(2) == "1");
    CHECK(render_charge(-4) == "-2");
    CHECK(render_charge(3) == "3/2");
    CHECK(render_charge_string({1, -1, 0}) == "↑,↓,0");
}

TEST_CASE("spin-2 region decomposition") {
    auto rd = region_decomposition(SpinConfig{2, {2, -2, -1, 0, 1, 0, 1, 2, 0, -2}});
    CHECK(region_spins(rd) == std::vector<int>{2, -3, 4, -2});
    CHECK(rd.separatorZeros == std::vector<int>{3, 8});
    CHECK(rd.regions[2].first == 4);
    CHECK(rd.regions[2].last == 7);

    auto zeros = region_decomposition(SpinConfig{2, {0, 0, 0}});
    CHECK(zeros.regions.empty());
    CHECK(zeros.separatorZeros.size() == 3);

    auto single = region_decomposition(SpinConfig{2, {2, 2}});
    CHECK(region_spins(single) == std::vector<int>{4});

    CHECK_THROWS_AS(region_decomposition(SpinConfig{1, {1, 0}}), std::invalid_argument);
}
