#include <complex>
#include <cstdio>
#include <fstream>

#include <catch2/catch_amalgamated.hpp>

#include "pvfrag/models.hpp"

using namespace pvfrag;

static bool has_transition(const ModelSpec& m, std::vector<int> in, std::vector<int> out) {
    for (const auto& op : m.operators)
        for (const auto& t : op.transitions)
            if (t.in == in && t.out == out) return true;
    return false;
}

static std::size_t transition_count(const ModelSpec& m) {
    std::size_t n = 0;
    for (const auto& op : m.operators) n += op.transitions.size();
    return n;
}

TEST_CASE("model library sizes") {
    CHECK(transition_count(build_model("tjz1")) == 4);
    CHECK(transition_count(build_model("h3_1")) == 8);
    CHECK(transition_count(build_model("h4_1")) == 32);
    CHECK(transition_count(build_model("motzkin")) == 6);
    CHECK(transition_count(build_model("tjz2")) == 8);
    CHECK(transition_count(build_model("h3_2_raw")) == 96);
    CHECK(transition_count(build_model("h_em")) == 4);
    CHECK(transition_count(build_model("h3_prime")) == 6);
    CHECK(transition_count(build_model("fredkin")) == 4);
    CHECK_THROWS_AS(build_model("nope"), std::invalid_argument);
    CHECK_THROWS_AS(build_model("h_em", {{"alpha", 0.0}}), std::invalid_argument);
    for (const auto& name : model_names()) CHECK_NOTHROW(build_model(name));
}

TEST_CASE("specific matrix elements") {
    CHECK(has_transition(build_model("h3_1"), {0, 1, 0}, {1, -1, 1}));
    CHECK(has_transition(build_model("tjz2"), {0, 2}, {1, 1}));
    CHECK_FALSE(has_transition(build_model("tjz2"), {0, 0}, {1, -1}));
    CHECK(has_transition(build_model("h3_prime"), {1, -1, 1}, {0, 1, 0}));
    CHECK_FALSE(has_transition(build_model("h_em"), {1, -1, 1}, {0, 1, 0}));
}

TEST_CASE("window prefix extrema") {
    CHECK(window_prefix_extrema({1, -1}) == std::pair{1, 0});
    CHECK(window_prefix_extrema({0, 0}) == std::pair{0, 0});
    CHECK(window_prefix_extrema({-1, 2, -2}) == std::pair{1, -1});
}

TEST_CASE("peak-valley checker verdicts") {
    for (const char* name : {"tjz1", "h3_1", "tjz2", "h3_2", "h_em", "h3_prime"})
        CHECK(pv_check(build_model(name)).passed);
    for (const char* name : {"motzkin", "h4_1", "h3_2_raw", "fredkin"})
        CHECK_FALSE(pv_check(build_model(name)).passed);
}

TEST_CASE("reported violations include the known witnesses") {
    auto find = [](const PVReport& r, std::vector<int> in, std::vector<int> out) {
        for (const auto& v : r.violations)
            if (v.transition.in == in && v.transition.out == out) return true;
        return false;
    };
    auto rm = pv_check(build_model("motzkin"));
    REQUIRE(find(rm, {1, -1}, {0, 0}));
    for (const auto& v : rm.violations)
        if (v.transition.in == std::vector<int>{1, -1}) {
            CHECK(v.inExtrema == std::pair{1, 0});
            CHECK(v.outExtrema == std::pair{0, 0});
        }
    auto rh = pv_check(build_model("h4_1"));
    CHECK(find(rh, {0, 1, 1, -1}, {1, 0, 0, 0}));
}

TEST_CASE("spin-2 window filter characterizes h3_2") {
    auto raw = build_model("h3_2_raw");
    auto filtered = build_model("h3_2");
    std::size_t kept = 0;
    for (const auto& t : raw.operators[0].transitions) {
        const bool ok = spin2_projector_filter(t);
        if (ok) ++kept;
        CHECK(has_transition(filtered, t.in, t.out) == ok);
    }
    CHECK(kept == transition_count(filtered));
    CHECK(spin2_window_ok({1, 0, 2}));
    CHECK_FALSE(spin2_window_ok({-1, 0, 2}));
    CHECK(spin2_window_ok({-1, 1, 2}));
}

TEST_CASE("modular projector equals the explicit root-of-unity average") {
    for (int F : {1, 2}) {
        const int mod = 2 * F + 1;
        for (long long d = -9; d <= 9; ++d) {
            std::complex<double> sum = 0.0;
            for (int k = 0; k < mod; ++k)
                sum += std::exp(std::complex<double>(0, 2.0 * M_PI * k * d / mod));
            const int explicitValue = std::abs(sum / double(mod) - 1.0) < 1e-12 ? 1 : 0;
            CHECK(modular_projector(d, 0, F) == explicitValue);
        }
    }
}

TEST_CASE("pair-spin projector selects |m| = F") {
    for (int F = 1; F <= 5; ++F)
        for (int m = -2 * F; m <= 2 * F; ++m)
            CHECK(pair_spin_projector(F, m) == (std::abs(m) == F ? 1 : 0));
    CHECK_THROWS_AS(pair_spin_projector(6, 0), std::invalid_argument);
}

TEST_CASE("dipole conservation is per model") {
    CHECK(conserves_dipole(build_model("h3_1")));
    CHECK(conserves_dipole(build_model("h4_1")));
    CHECK(conserves_dipole(build_model("h_em")));
    CHECK(conserves_dipole(build_model("h3_prime")));
    CHECK(conserves_dipole(build_model("h3_2")));
    CHECK_FALSE(conserves_dipole(build_model("tjz1")));
    CHECK_FALSE(conserves_dipole(build_model("motzkin")));
}

TEST_CASE("try_apply") {
    SpinConfig c{1, {0, 1, 0}};
    Transition t{{0, 1, 0}, {1, -1, 1}, 1.0};
    auto out = try_apply(c, t, 0);
    REQUIRE(out);
    CHECK(out->values == std::vector<int>{1, -1, 1});
    CHECK_FALSE(try_apply(c, t, 1));
    CHECK_FALSE(try_apply(c, t, -1));
}

TEST_CASE("model files load with automatic reversal closure") {
    const std::string path = "test_model_tmp.json";
    {
        std::ofstream f(path);
        f << R"({"F": 1, "transitions": [
            {"in": [-1,1,-1], "out": [0,-1,0]},
            {"in": [0,1,0],  "out": [1,-1,1], "coeff": 0.5}]})";
    }
    auto m = load_model_file(path);
    std::remove(path.c_str());
    CHECK(m.F == 1);
    CHECK(transition_count(m) == 4);
    CHECK(has_transition(m, {0, -1, 0}, {-1, 1, -1}));
    for (const auto& t : m.operators[0].transitions)
        if (t.in == std::vector<int>{1, -1, 1}) CHECK(t.coeff == 0.5);
    CHECK_THROWS_AS(load_model_file("does_not_exist.json"), std::runtime_error);
}

TEST_CASE("canonical model string ignores names and ordering") {
    auto a = build_model("h3_1");
    auto b = a;
    b.name = "renamed";
    std::reverse(b.operators[0].transitions.begin(), b.operators[0].transitions.end());
    CHECK(canonical_model_string(a) == canonical_model_string(b));
    CHECK(canonical_model_string(a) != canonical_model_string(build_model("h_em")));
}

TEST_CASE("coupling strength does not change the transition graph") {
    auto a1 = build_model("h_em", {{"alpha", 1.0}});
    auto a2 = build_model("h_em", {{"alpha", 2.5}});
    REQUIRE(a1.operators[0].transitions.size() == a2.operators[0].transitions.size());
    for (std::size_t i = 0; i < a1.operators[0].transitions.size(); ++i) {
        CHECK(a1.operators[0].transitions[i].in == a2.operators[0].transitions[i].in);
        CHECK(a1.operators[0].transitions[i].out == a2.operators[0].transitions[i].out);
    }
}
