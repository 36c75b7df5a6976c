#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "generators.hpp"
#include "rmdp/model_io.hpp"

using namespace rmdp;
using namespace testing_support;

namespace {

FiniteRMDP self_loop(double p) {
    FiniteRMDP m;
    m.alphabet = {"G"};
    m.state_names = {"s"};
    m.action_names = {"a"};
    m.disturbance_names = {"d"};
    m.labels = {LabelSet{}};
    m.init = FiniteDistribution::dirac(0);
    m.resize_kernel();
    m.next_mut(0, 0, 0) = {{0}, {p}};
    return m;
}

// Two states: state 0 unlabeled, state 1 labeled G; kernel from 0 given by `d`.
FiniteRMDP two_state(const FiniteDistribution& d) {
    FiniteRMDP m;
    m.alphabet = {"G"};
    m.state_names = {"a", "b"};
    m.action_names = {"u"};
    m.disturbance_names = {"v"};
    m.labels = {LabelSet{}, LabelSet{1}};
    m.init = FiniteDistribution::dirac(0);
    m.resize_kernel();
    m.next_mut(0, 0, 0) = d;
    m.next_mut(1, 0, 0) = FiniteDistribution::dirac(1);
    return m;
}

}  // namespace

TEST_CASE("validate_model accepts a one-state self-loop") { CHECK(validate_model(self_loop(1.0)).ok()); }

TEST_CASE("validate_model reports a row that does not sum to one") {
    const auto r = validate_model(self_loop(0.9));
    REQUIRE(r.problems.size() == 1);
    CHECK(r.problems.front().find("row sums 0.9") != std::string::npos);
}

TEST_CASE("validate_model lists missing kernel entries and duplicate support") {
    auto m = two_state(FiniteDistribution::dirac(1));
    m.next_mut(1, 0, 0) = {};
    auto r = validate_model(m);
    REQUIRE(r.problems.size() == 1);
    CHECK(r.problems.front().find("missing entry") != std::string::npos);

    m.next_mut(1, 0, 0) = {{1, 1}, {0.5, 0.5}};
    r = validate_model(m);
    REQUIRE_FALSE(r.ok());
    CHECK(r.problems.front().find("duplicate") != std::string::npos);
}

TEST_CASE("bundled two-player example is valid") {
    CHECK(validate_model(load_bundled("fig2_m1.json")).ok());
    CHECK(validate_model(load_bundled("fig2_m2.json")).ok());
}

TEST_CASE("one_step_label_distribution pushes the kernel through the labeling") {
    SUBCASE("dirac") {
        const auto m = two_state(FiniteDistribution::dirac(1));
        const auto d = one_step_label_distribution(m, 0, 0, 0);
        REQUIRE(d.size() == 1);
        CHECK(d.at(LabelSet{1}) == 1.0);
    }
    SUBCASE("even split") {
        const auto m = two_state({{0, 1}, {0.5, 0.5}});
        const auto d = one_step_label_distribution(m, 0, 0, 0);
        REQUIRE(d.size() == 2);
        CHECK(d.at(LabelSet{1}) == 0.5);
        CHECK(d.at(LabelSet{}) == 0.5);
    }
    SUBCASE("two-player example successors are single colors") {
        const auto m = load_bundled("fig2_m1.json");
        for (int u = 0; u < m.num_actions(); ++u)
            for (int v = 0; v < m.num_disturbances(); ++v) {
                const auto d = one_step_label_distribution(m, 0, u, v);
                REQUIRE(d.size() == 1);
                CHECK(d.begin()->second == 1.0);
                CHECK(d.begin()->first == m.labels[m.next(0, u, v).support.front()]);
            }
    }
    SUBCASE("unknown ids") {
        const auto m = two_state(FiniteDistribution::dirac(1));
        CHECK_THROWS_AS(one_step_label_distribution(m, 2, 0, 0), DomainError);
        CHECK_THROWS_AS(one_step_label_distribution(m, 0, 1, 0), DomainError);
    }
}

TEST_CASE("one_step_label_distribution sums to one on random models") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = random_rmdp(rng, uniform_int(rng, 1, 7), uniform_int(rng, 1, 3), uniform_int(rng, 1, 3), 5);
        REQUIRE(validate_model(m).ok());
        for (int x = 0; x < m.num_states(); ++x)
            for (int u = 0; u < m.num_actions(); ++u)
                for (int v = 0; v < m.num_disturbances(); ++v) {
                    double total = 0.0;
                    for (const auto& [l, p] : one_step_label_distribution(m, x, u, v)) total += p;
                    CHECK(std::abs(total - 1.0) <= 1e-12);
                }
    }
}

TEST_CASE("simulate_finite") {
    const auto single = MarkovPolicy::deterministic({0, 0});
    const auto nature = MarkovAdversary::deterministic({0, 0});

    SUBCASE("all-dirac chain has one path") {
        const auto m = two_state(FiniteDistribution::dirac(1));
        const auto p1 = simulate_finite(m, single, nature, 4, 1);
        const auto p2 = simulate_finite(m, single, nature, 4, 999);
        CHECK(p1 == std::vector<int>{0, 1, 1, 1, 1});
        CHECK(p1 == p2);
    }
    SUBCASE("same seed, same path") {
        Rng rng(3);
        const auto m = random_rmdp(rng, 6, 2, 2, 4);
        const auto mu = MarkovPolicy::stationary(std::vector<FiniteDistribution>(6, {{0, 1}, {0.5, 0.5}}));
        const auto tau = MarkovAdversary::stationary(std::vector<FiniteDistribution>(6, {{0, 1}, {0.3, 0.7}}));
        CHECK(simulate_finite(m, mu, tau, 20, 77) == simulate_finite(m, mu, tau, 20, 77));
        CHECK(simulate_finite(m, mu, tau, 20, 77).size() == 21);
    }
    SUBCASE("coin flip frequency") {
        const auto m = two_state({{0, 1}, {0.5, 0.5}});
        int heads = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) heads += simulate_finite(m, single, nature, 1, mix_seed(5, i))[1];
        CHECK(std::abs(static_cast<double>(heads) / n - 0.5) < 0.01);
    }
    SUBCASE("horizon mismatch") {
        const auto m = two_state(FiniteDistribution::dirac(1));
        MarkovPolicy finite;
        finite.horizon = 2;
        finite.steps.assign(2, {FiniteDistribution::dirac(0), FiniteDistribution::dirac(0)});
        CHECK_NOTHROW(simulate_finite(m, finite, nature, 2, 0));
        CHECK_THROWS_AS(simulate_finite(m, finite, nature, 3, 0), DomainError);
    }
}

TEST_CASE("single disturbance makes the adversary irrelevant") {
    Rng rng(8);
    const auto m = random_rmdp(rng, 5, 2, 1, 3);
    const auto mu = MarkovPolicy::stationary(std::vector<FiniteDistribution>(5, {{0, 1}, {0.4, 0.6}}));
    const auto tau = MarkovAdversary::deterministic(std::vector<int>(5, 0));
    const auto tau2 = MarkovAdversary::stationary(std::vector<FiniteDistribution>(5, FiniteDistribution::dirac(0)));
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        CHECK(simulate_finite(m, mu, tau, 10, seed) == simulate_finite(m, mu, tau2, 10, seed));
}

TEST_CASE("state relations") {
    const StateRelation r(3, 2, {{0, 0}, {1, 1}, {2, 1}, {1, 1}});
    CHECK(r.pairs().size() == 3);
    CHECK(r.single_valued());
    CHECK(r.partner(2) == 1);
    CHECK(r.preimage(1) == std::vector<int>{1, 2});
    CHECK(r.inverse().contains(1, 2));
    CHECK_FALSE(r.inverse().single_valued());
    CHECK_THROWS_AS(StateRelation(2, 2, {{0, 2}}), DomainError);
    const auto c = r.compose(StateRelation::identity(2));
    CHECK(c.pairs() == r.pairs());
}

TEST_CASE("model JSON round trip is bit exact") {
    Rng rng(21);
    const auto dir = std::filesystem::temp_directory_path() / "rmdp_test_finite_model";
    std::filesystem::create_directories(dir);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_rmdp(rng, uniform_int(rng, 1, 6), 2, 2, 4);
        write_model(m, dir / "m.json");
        const auto back = read_model(dir / "m.json");
        CHECK(back.kernel == m.kernel);
        CHECK(back.init == m.init);
        CHECK(back.labels == m.labels);
        CHECK(back.state_names == m.state_names);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("model JSON rejects unknown names") {
    auto j = model_to_json(two_state(FiniteDistribution::dirac(1)));
    j["kernel"][0]["x"] = "nowhere";
    CHECK_THROWS_AS(model_from_json(j), ParseError);
}
