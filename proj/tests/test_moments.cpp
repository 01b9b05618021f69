#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sosbound/moments.hpp"
#include "sosbound/quadrature.hpp"
#include "sosbound/registry.hpp"
#include "test_support.hpp"

using namespace sosbound;
using Eigen::VectorXd;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("box lebesgue: int t^2 over [-1,1]") {
    MomentOracle o(DomainSpec::box(1), MeasureSpec::lebesgue());
    CHECK(o.moment({2}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(o.moment({0}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("ball mass equals the normalization constant") {
    MomentOracle o(DomainSpec::ball(2), MeasureSpec::ball_jacobi(0.0));
    CHECK(o.moment({0, 0}) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(normalization_constant(2, 0.0).value == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("chebyshev second moment equals pi/2 (quadrature oracle)") {
    // Substitute t = sin(theta): the integrand becomes sin^2(theta) on
    // [-pi/2, pi/2], integrated here by Gauss-Legendre as the oracle.
    const Rule1D& rule = gauss_legendre(60);
    double oracle = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i) {
        const double th = 0.5 * kPi * rule.nodes[i];
        oracle += 0.5 * kPi * rule.weights[i] * std::sin(th) * std::sin(th);
    }
    CHECK(oracle == doctest::Approx(kPi / 2).epsilon(1e-13));

    MomentOracle o(DomainSpec::box(1), MeasureSpec::chebyshev());
    CHECK(o.moment({2}) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("standard simplex moment and monte-carlo cross-check") {
    MomentOracle o(domain_by_name("simplex2"), MeasureSpec::lebesgue());
    CHECK(o.moment({1, 0}) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    auto mc = testsup::mc_integral(domain_by_name("simplex2"),
                                   [](const VectorXd& x) { return x[0]; }, 400000, 99);
    CHECK(std::abs(mc.mean - 1.0 / 6.0) <= 4.0 * mc.std_error);
}

TEST_CASE("octagon mass is its area") {
    MomentOracle o(domain_by_name("octagon"), MeasureSpec::lebesgue());
    CHECK(o.moment({0, 0}) ==
          doctest::Approx(testsup::shoelace(octagon_vertices())).epsilon(1e-13));
    CHECK(o.moment({0, 0}) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("normalization constants") {
    CHECK(normalization_constant(1, 0.0).value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(normalization_constant(3, 1.0).value ==
          doctest::Approx(8.0 * kPi / 15.0).epsilon(1e-13));
    CHECK_THROWS_AS(normalization_constant(2, -1.0), std::invalid_argument);

    // Monte-Carlo cross-check of C_{3,1}: the (1-|x|^2) weight over the ball.
    DomainSpec b3 = DomainSpec::ball(3);
    auto mc = testsup::mc_integral(
        b3, [](const VectorXd& x) { return 1.0 - x.squaredNorm(); }, 1000000, 4242);
    CHECK(std::abs(mc.mean - 8.0 * kPi / 15.0) <= 4.0 * mc.std_error);
}

TEST_CASE("ball-to-interval reduction identity") {
    auto p00 = reduce_ball_to_interval(2, 0.0, 0);
    CHECK(p00.lhs == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(p00.rhs == doctest::Approx(kPi).epsilon(1e-13));

    // Polar oracle for n=2, lambda=0, k=2: int rho^3 drho * int cos^2 = pi/4.
    auto p2 = reduce_ball_to_interval(2, 0.0, 2);
    CHECK(p2.lhs == doctest::Approx(kPi / 4).epsilon(1e-13));
    CHECK(p2.rhs == doctest::Approx(kPi / 4).epsilon(1e-13));

    auto p34 = reduce_ball_to_interval(3, 1.0, 4);
    CHECK(std::abs(p34.lhs - p34.rhs) <= 1e-10 * std::abs(p34.rhs));

    for (int n : {2, 3})
        for (double lam : {0.0, 1.0, 2.5})
            for (int k = 0; k <= 8; ++k) {
                auto p = reduce_ball_to_interval(n, lam, k);
                INFO("n=" << n << " lambda=" << lam << " k=" << k);
                if (k % 2 == 1) {
                    CHECK(p.lhs == 0.0);
                    CHECK(p.rhs == 0.0);
                } else {
                    CHECK(std::abs(p.lhs - p.rhs) <= 1e-10 * std::abs(p.rhs));
                }
            }
}

TEST_CASE("odd moments vanish exactly on symmetric (domain, measure) pairs") {
    MomentOracle box(DomainSpec::box(2), MeasureSpec::chebyshev());
    MomentOracle ball(DomainSpec::ball(2), MeasureSpec::ball_jacobi(1.5));
    for (int a = 0; a <= 7; ++a)
        for (int b = 0; b <= 7; ++b) {
            if (a % 2 == 0 && b % 2 == 0) continue;
            CHECK(box.moment({a, b}) == 0.0);
            CHECK(ball.moment({a, b}) == 0.0);
        }
}

TEST_CASE("box lebesgue moments strictly decrease in each exponent step of 2") {
    MomentOracle o(DomainSpec::box(2), MeasureSpec::lebesgue());
    for (int a = 0; a <= 10; a += 2)
        for (int b = 0; b <= 10; b += 2) {
            CHECK(o.moment({a + 2, b}) < o.moment({a, b}));
            CHECK(o.moment({a, b + 2}) < o.moment({a, b}));
        }
}

TEST_CASE("closed forms match seeded monte-carlo within 4 sigma") {
    struct Cell {
        DomainSpec d;
        MeasureSpec m;
        uint64_t seed;
    };
    const std::vector<Cell> cells = {
        {DomainSpec::box(2), MeasureSpec::lebesgue(), 11},
        {DomainSpec::ball(2), MeasureSpec::ball_jacobi(1.0), 12},
        {domain_by_name("simplex2"), MeasureSpec::lebesgue(), 13},
        {domain_by_name("octagon"), MeasureSpec::lebesgue(), 14},
    };
    const std::vector<std::vector<int>> alphas = {{0, 0}, {2, 0}, {1, 1}, {2, 2}, {4, 0}, {3, 1}};
    for (const auto& cell : cells) {
        MomentOracle o(cell.d, cell.m);
        for (const auto& alpha : alphas) {
            auto weighted = [&](const VectorXd& x) {
                double v = std::pow(x[0], alpha[0]) * std::pow(x[1], alpha[1]);
                if (cell.m.kind == MeasureKind::BallJacobi)
                    v *= std::pow(1.0 - x.squaredNorm(), cell.m.lambda);
                return v;
            };
            auto mc = testsup::mc_integral(cell.d, weighted, 400000, cell.seed);
            INFO(cell.d.describe() << " alpha=(" << alpha[0] << "," << alpha[1] << ")");
            CHECK(std::abs(mc.mean - o.moment(alpha)) <= 4.0 * mc.std_error + 1e-12);
        }
    }
}

TEST_CASE("chebyshev moments match arcsine importance sampling within 4 sigma") {
    // x = cos(pi U) has density (1/pi)(1-x^2)^{-1/2}; uniform box sampling
    // would have infinite variance against this weight.
    MomentOracle o(DomainSpec::box(2), MeasureSpec::chebyshev());
    auto g = testsup::rng(31337);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int N = 500000;
    for (const std::vector<int>& alpha : {std::vector<int>{0, 0}, {2, 0}, {2, 2}, {4, 2}}) {
        double sum = 0.0, sum2 = 0.0;
        for (int s = 0; s < N; ++s) {
            const double x = std::cos(kPi * u(g));
            const double y = std::cos(kPi * u(g));
            const double v = std::pow(x, alpha[0]) * std::pow(y, alpha[1]);
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / N;
        const double se = std::sqrt(std::max(sum2 / N - mean * mean, 0.0) / N);
        INFO("alpha=(" << alpha[0] << "," << alpha[1] << ")");
        CHECK(std::abs(kPi * kPi * mean - o.moment(alpha)) <= 4.0 * kPi * kPi * se + 1e-12);
    }
}

TEST_CASE("incompatible pairs are rejected") {
    CHECK_THROWS_AS(MomentOracle(DomainSpec::ball(2), MeasureSpec::chebyshev()),
                    std::invalid_argument);
    CHECK_THROWS_AS(MomentOracle(domain_by_name("octagon"), MeasureSpec::box_jacobi(0.5)),
                    std::invalid_argument);
}

TEST_CASE("shifted ball moments (recentred domains) against monte-carlo") {
    VectorXd c(2);
    c << 0.2, -0.1;
    DomainSpec shifted = DomainSpec::ball(c, 0.6);
    MomentOracle o(shifted, MeasureSpec::lebesgue());
    CHECK(o.moment({0, 0}) == doctest::Approx(kPi * 0.36).epsilon(1e-13));
    auto mc = testsup::mc_integral(
        shifted, [](const VectorXd& x) { return x[0] * x[0] * x[1]; }, 500000, 77);
    CHECK(std::abs(mc.mean - o.moment({2, 1})) <= 4.0 * mc.std_error + 1e-12);
}
