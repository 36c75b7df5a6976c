#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "generators.hpp"
#include "rmdp/dynamics.hpp"

using namespace rmdp;
using namespace testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

// theta may be reported unwrapped by reach boxes.
bool theta_inside(double theta, double lo, double hi) {
    for (int k = -2; k <= 2; ++k) {
        const double t = theta + 2.0 * kPi * k;
        if (lo <= t && t <= hi) return true;
    }
    return false;
}

bool inside(const Box& b, const Eigen::VectorXd& p) {
    for (int d = 0; d < 4; ++d) {
        if (d == kTheta) {
            if (!theta_inside(p[d], b.lo[d], b.hi[d])) return false;
        } else if (p[d] < b.lo[d] || p[d] > b.hi[d]) {
            return false;
        }
    }
    return true;
}

Box random_cell(Rng& rng) {
    Eigen::Vector4d lo, hi;
    const double widths[4] = {uniform_real(rng, 0.0, 1.0), uniform_real(rng, 0.0, 1.0), uniform_real(rng, 0.0, 2.0),
                              uniform_real(rng, 0.0, 2.0)};
    lo << uniform_real(rng, -3, 3), uniform_real(rng, -3, 3), uniform_real(rng, -kPi, kPi - widths[2]),
        uniform_real(rng, -3, 3 - widths[3]);
    for (int d = 0; d < 4; ++d) hi[d] = lo[d] + widths[d];
    return {lo, hi};
}

Eigen::VectorXd sample_in(Rng& rng, const Box& b) {
    Eigen::VectorXd p(b.dim());
    for (Eigen::Index d = 0; d < b.dim(); ++d) p[d] = uniform_real(rng, b.lo[d], std::nextafter(b.hi[d], b.hi[d] + 1));
    return p;
}

Eigen::Vector2d random_input(Rng& rng, const DubinsParams& p) {
    return {uniform_real(rng, p.steer_lo, p.steer_hi), uniform_real(rng, p.accel_lo, p.accel_hi)};
}

}  // namespace

TEST_CASE("step_mean") {
    const DubinsParams params;
    SUBCASE("zero velocity is a fixed point") {
        const StateVec s(0.3, -1.2, 0.7, 0.0);
        const auto n = step_mean(params, s, {0.0, 0.0}, {0.85, 1.0});
        CHECK(n == s);
    }
    SUBCASE("straight ahead") {
        const auto n = step_mean(params, {0.5, 0.25, 0.0, 2.0}, {0.0, 0.0}, {0.85, 1.0});
        CHECK(n[kX] == doctest::Approx(1.5));
        CHECK(n[kY] == 0.25);
    }
    SUBCASE("hand-computed step") {
        const auto n = step_mean(params, {0.0, 0.0, 0.0, 2.0}, {kPi / 4, 1.0}, {0.85, 0.85});
        CHECK(n[kX] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(n[kY] == doctest::Approx(0.0));
        CHECK(n[kTheta] == doctest::Approx(0.5 * 0.85 * kPi / 4).epsilon(1e-15));
        CHECK(n[kTheta] == doctest::Approx(0.3338).epsilon(1e-3));
        CHECK(n[kV] == doctest::Approx(2.2).epsilon(1e-15));
    }
    SUBCASE("speed clamp") {
        const auto n = step_mean(params, {0.0, 0.0, 0.0, 3.0}, {0.0, 5.0}, {0.85, 0.9});
        CHECK(n[kV] == 3.0);
        DubinsParams free = params;
        free.clamp = ClampPolicy::none;
        CHECK(step_mean(free, {0.0, 0.0, 0.0, 3.0}, {0.0, 5.0}, {0.85, 0.9})[kV] == doctest::Approx(5.2));
    }
    SUBCASE("theta wraps into [-pi, pi)") {
        const auto n = step_mean(params, {0.0, 0.0, kPi - 0.01, 0.0}, {kPi / 2, 0.0}, {0.9, 0.9});
        CHECK(n[kTheta] < 0.0);
        CHECK(n[kTheta] >= -kPi);
    }
    SUBCASE("out-of-bounds inputs") {
        CHECK_THROWS_AS(step_mean(params, StateVec::Zero(), {2.0, 0.0}, {0.85, 0.85}), DomainError);
        CHECK_THROWS_AS(step_mean(params, StateVec::Zero(), {0.0, 6.0}, {0.85, 0.85}), DomainError);
    }
}

TEST_CASE("noise reading") {
    DubinsParams p;
    CHECK(p.noise_sigma() == doctest::Approx(std::sqrt(0.1)));
    p.noise_reading = NoiseReading::std_dev;
    CHECK(p.noise_sigma() == doctest::Approx(0.1));
    p.noise = 0.0;
    CHECK_THROWS_AS(DubinsSystem{p}, DomainError);
}

TEST_CASE("step_sample") {
    const DubinsSystem sys{DubinsParams{}};
    const Eigen::Vector4d s(0.0, 0.0, 0.2, 1.5);
    const Eigen::Vector2d u(0.3, -1.0), p(0.85, 0.85);
    const Eigen::VectorXd mean = sys.mean(s, u, p);

    SUBCASE("determinism per seed") { CHECK(step_sample(sys, s, u, p, 42) == step_sample(sys, s, u, p, 42)); }

    SUBCASE("noise enters theta only") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto n = step_sample(sys, s, u, p, seed);
            CHECK(n[kX] == mean[kX]);
            CHECK(n[kY] == mean[kY]);
            CHECK(n[kV] == mean[kV]);
        }
    }

    SUBCASE("small noise tends to the mean") {
        DubinsParams tiny;
        tiny.noise = 1e-24;
        const DubinsSystem quiet(tiny);
        CHECK((step_sample(quiet, s, u, p, 7) - quiet.mean(s, u, p)).norm() < 1e-10);
    }

    SUBCASE("theta residual std and Gaussian shape") {
        const int n = 100000;
        const double sd = 0.5 * std::sqrt(0.1);
        std::mt19937_64 eng(2024);
        std::vector<double> r(static_cast<std::size_t>(n));
        double sum = 0.0, sq = 0.0;
        for (auto& x : r) {
            x = step_sample(sys, s, u, p, eng)[kTheta] - mean[kTheta];
            sum += x;
            sq += x * x;
        }
        const double mu = sum / n;
        const double var = sq / n - mu * mu;
        CHECK(std::abs(std::sqrt(var) / sd - 1.0) < 0.02);

        std::sort(r.begin(), r.end());
        const boost::math::normal_distribution<double> ref(0.0, sd);
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = boost::math::cdf(ref, r[i]);
            d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
        }
        // Asymptotic Kolmogorov critical value at level 0.01.
        CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("interval helpers") {
    const auto c = cos_range({-0.1, 0.1});
    CHECK(c.hi == 1.0);
    CHECK(c.lo == doctest::Approx(std::cos(0.1)));
    const auto s = sin_range({kPi / 4, 3 * kPi / 4});
    CHECK(s.hi == 1.0);
    CHECK(s.lo == doctest::Approx(std::sin(kPi / 4)));
    CHECK(cos_range({3.0, 3.3}).lo == -1.0);
    CHECK(sin_range({-2.0, -1.0}).lo == -1.0);
    const auto prod = Interval{-1, 2} * Interval{-3, 0.5};
    CHECK(prod.lo == -6.0);
    CHECK(prod.hi == 3.0);
}

TEST_CASE("reach_box") {
    const DubinsParams params;
    SUBCASE("point cell and point parameters collapse to the mean") {
        const Eigen::Vector4d s(0.1, 0.2, 0.3, 1.2);
        const Eigen::Vector2d u(0.4, 1.0), p(0.83, 0.87);
        const Box r = reach_box(params, Box::point(s), u, Box::point(p));
        const auto m = step_mean(params, s, u, p);
        for (int d = 0; d < 4; ++d) {
            CHECK(r.lo[d] == doctest::Approx(m[d]).epsilon(1e-11));
            CHECK(r.hi[d] == doctest::Approx(m[d]).epsilon(1e-11));
        }
    }
    SUBCASE("x increment over a heading interval around zero") {
        const Box cell(Eigen::Vector4d(0.0, 0.0, -0.1, 1.0), Eigen::Vector4d(0.0, 0.0, 0.1, 2.0));
        const Box r = reach_box(params, cell, {0.0, 0.0}, params.parameter_box());
        CHECK(r.lo[kX] == doctest::Approx(0.5 * 1.0 * std::cos(0.1)).epsilon(1e-10));
        CHECK(r.hi[kX] == doctest::Approx(0.5 * 2.0).epsilon(1e-10));
        Rng rng(5);
        for (int i = 0; i < 2000; ++i) {
            const auto s = sample_in(rng, cell);
            CHECK(inside(r, step_mean(params, s, {0.0, 0.0}, sample_in(rng, params.parameter_box()))));
        }
    }
    SUBCASE("Monte Carlo containment on random cells") {
        Rng rng(77);
        const Box pbox = params.parameter_box();
        long violations = 0;
        for (int inst = 0; inst < 20; ++inst) {
            const Box cell = random_cell(rng);
            const auto u = random_input(rng, params);
            const Box r = reach_box(params, cell, u, pbox);
            for (int i = 0; i < 10000; ++i)
                if (!inside(r, step_mean(params, sample_in(rng, cell), u, sample_in(rng, pbox)))) ++violations;
        }
        CHECK(violations == 0);
    }
    SUBCASE("halving a cell never enlarges the reach box") {
        Rng rng(91);
        const Box pbox = params.parameter_box();
        for (int inst = 0; inst < 200; ++inst) {
            const Box cell = random_cell(rng);
            const auto u = random_input(rng, params);
            const Box big = reach_box(params, cell, u, pbox);
            Eigen::Vector4d lo = cell.lo, hi = cell.hi;
            for (int d = 0; d < 4; ++d) {
                if (uniform_int(rng, 0, 1) == 0)
                    hi[d] = 0.5 * (cell.lo[d] + cell.hi[d]);
                else
                    lo[d] = 0.5 * (cell.lo[d] + cell.hi[d]);
            }
            const Box small = reach_box(params, Box(lo, hi), u, pbox);
            CHECK(big.contains(small));
        }
    }
    SUBCASE("heading interval wider than a full turn") {
        const Box cell(Eigen::Vector4d(0, 0, -4, 0), Eigen::Vector4d(0, 0, 3, 0));
        CHECK_THROWS_AS(reach_box(params, cell, {0.0, 0.0}, params.parameter_box()), DomainError);
    }
}
