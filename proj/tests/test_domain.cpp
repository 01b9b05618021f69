#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "sosbound/domain.hpp"
#include "sosbound/registry.hpp"
#include "test_support.hpp"

using namespace sosbound;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
    VectorXd v(2);
    v << a, b;
    return v;
}

// Boundary samples for the Assumption-4.1 check: all vertices plus random
// edge points (or sphere points for balls).
std::vector<VectorXd> boundary_points(const DomainSpec& d, int count, uint64_t seed) {
    auto g = testsup::rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<VectorXd> pts;
    if (d.kind() == DomainKind::Ball) {
        for (int i = 0; i < count; ++i) {
            const double th = 2.0 * std::numbers::pi * u(g);
            pts.push_back(d.ball_center() + d.ball_radius() * vec2(std::cos(th), std::sin(th)));
        }
        return pts;
    }
    const auto& v = d.vertices();
    const size_t m = v.size();
    for (const auto& p : v) pts.push_back(p);
    std::uniform_int_distribution<size_t> pick(0, m - 1);
    while (static_cast<int>(pts.size()) < count) {
        const size_t i = pick(g);
        const double t = u(g);
        pts.push_back(v[i] + t * (v[(i + 1) % m] - v[i]));
    }
    return pts;
}

// Monte-Carlo lower confidence check of
//   vol(B_delta(x) cap K) >= eta delta^n vol(B^n).
void check_interior_cone(const DomainSpec& set, const ConeConstants& cc, uint64_t seed) {
    const int N = 20000;
    auto g = testsup::rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& x : boundary_points(set, 20, seed * 7 + 1)) {
        for (double delta : {cc.epsilon_k, cc.epsilon_k / 2.0}) {
            int inside = 0;
            for (int s = 0; s < N; ++s) {
                VectorXd dir(2);
                dir << normal(g), normal(g);
                dir.normalize();
                const double rho = delta * std::sqrt(u(g));
                if (set.contains(x + rho * dir)) ++inside;
            }
            const double p = double(inside) / N;
            const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / N);
            INFO("delta=" << delta << " p=" << p << " eta=" << cc.eta_k);
            CHECK(p >= cc.eta_k - 3.0 * se);
        }
    }
}

}  // namespace

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(DomainSpec::polygon({vec2(0, 0), vec2(0, 1), vec2(1, 0)}),
                    std::invalid_argument);  // clockwise
    CHECK_THROWS_AS(DomainSpec::simplex({vec2(0, 0), vec2(1, 0), vec2(2, 0)}),
                    std::invalid_argument);  // degenerate
    CHECK_THROWS_AS(DomainSpec::polygon({vec2(0, 0), vec2(1, 0),
                                         vec2(0.5, -0.2), vec2(0, 1)}),
                    std::invalid_argument);  // reflex vertex
    CHECK_THROWS_AS(MeasureSpec::box_jacobi(-1.0), std::invalid_argument);
}

TEST_CASE("measure compatibility") {
    CHECK(measure_compatible(DomainSpec::box(2), MeasureSpec::chebyshev()));
    CHECK_FALSE(measure_compatible(DomainSpec::ball(2), MeasureSpec::chebyshev()));
    CHECK_FALSE(measure_compatible(DomainSpec::box(2), MeasureSpec::ball_jacobi(1.0)));
    CHECK(measure_compatible(domain_by_name("octagon"), MeasureSpec::lebesgue()));
}

TEST_CASE("affine_map: simplex under identity and scaling") {
    DomainSpec s = domain_by_name("simplex2");
    DomainSpec same = affine_map(s, MatrixXd::Identity(2, 2), VectorXd::Zero(2));
    for (size_t i = 0; i < 3; ++i) CHECK((same.vertices()[i] - s.vertices()[i]).norm() == 0.0);

    DomainSpec doubled = affine_map(s, 2.0 * MatrixXd::Identity(2, 2), VectorXd::Zero(2));
    CHECK((doubled.vertices()[1] - vec2(2, 0)).norm() == 0.0);
    CHECK((doubled.vertices()[2] - vec2(0, 2)).norm() == 0.0);
}

TEST_CASE("affine_map: octagon scaled by one half") {
    DomainSpec oct = domain_by_name("octagon");
    DomainSpec half = affine_map(oct, 0.5 * MatrixXd::Identity(2, 2), VectorXd::Zero(2));
    CHECK(testsup::shoelace(half.vertices()) ==
          doctest::Approx(2.0 * std::sqrt(2.0) / 4.0).epsilon(1e-12));
    CHECK(half.volume() == doctest::Approx(testsup::shoelace(half.vertices())).epsilon(1e-12));
}

TEST_CASE("affine_map: orientation-reversing maps keep polygons CCW") {
    MatrixXd flip(2, 2);
    flip << -1.0, 0.0, 0.0, 1.0;
    DomainSpec img = affine_map(domain_by_name("octagon"), flip, VectorXd::Zero(2));
    CHECK(img.volume() > 0.0);
}

TEST_CASE("affine_map: unsupported images throw") {
    CHECK_THROWS_AS(affine_map(DomainSpec::box(3), 2.0 * MatrixXd::Identity(3, 3),
                               VectorXd::Zero(3)),
                    std::invalid_argument);
    MatrixXd stretch(2, 2);
    stretch << 2.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(affine_map(DomainSpec::ball(2), stretch, VectorXd::Zero(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(affine_map(DomainSpec::box(2), MatrixXd::Zero(2, 2), VectorXd::Zero(2)),
                    std::invalid_argument);
}

TEST_CASE("triangulate: square, octagon, triangle") {
    DomainSpec square =
        DomainSpec::polygon({vec2(-1, -1), vec2(1, -1), vec2(1, 1), vec2(-1, 1)});
    auto tris = triangulate(square);
    CHECK(tris.size() == 2);
    double total = 0.0;
    for (const auto& t : tris) total += t.volume();
    CHECK(total == doctest::Approx(4.0).epsilon(1e-12));

    auto oct_tris = triangulate(domain_by_name("octagon"));
    CHECK(oct_tris.size() == 6);
    total = 0.0;
    for (const auto& t : oct_tris) total += t.volume();
    // area of the regular octagon inscribed in the unit circle:
    // (1/2) * 8 * sin(pi/4), cross-checked by shoelace
    CHECK(total == doctest::Approx(0.5 * 8.0 * std::sin(std::numbers::pi / 4)).epsilon(1e-12));
    CHECK(total == doctest::Approx(testsup::shoelace(octagon_vertices())).epsilon(1e-12));

    DomainSpec tri = DomainSpec::polygon({vec2(0, 0), vec2(1, 0), vec2(0, 1)});
    CHECK(triangulate(tri).size() == 1);
}

TEST_CASE("triangulate: collinear fan triangle is rejected") {
    // the vertex on the first edge makes the first fan triangle degenerate
    DomainSpec poly = DomainSpec::polygon(
        {vec2(-1, -1), vec2(0, -1), vec2(1, -1), vec2(1, 1), vec2(-1, 1)});
    CHECK_THROWS_AS(triangulate(poly), std::invalid_argument);
}

TEST_CASE("triangulate: fan triangles are interior-disjoint") {
    DomainSpec oct = domain_by_name("octagon");
    auto tris = triangulate(oct);
    for (const auto& x : testsup::domain_samples(oct, 10000, 17)) {
        int strictly_inside = 0;
        for (const auto& t : tris)
            if (t.contains(x, -1e-9)) ++strictly_inside;
        CHECK(strictly_inside <= 1);
    }
}

TEST_CASE("monte-carlo volume matches analytic volume within 1%") {
    for (const auto& name : domain_names()) {
        DomainSpec d = domain_by_name(name);
        auto mc = testsup::mc_integral(d, [](const VectorXd&) { return 1.0; }, 1000000, 555);
        INFO(name);
        CHECK(std::abs(mc.mean - d.volume()) <= 0.01 * d.volume());
    }
}

TEST_CASE("cone constants: ball") {
    ConeConstants cc = cone_constants(DomainSpec::ball(2));
    CHECK(cc.epsilon_k == doctest::Approx(1.0));
    // A boundary disk fraction is 0.391 at delta = 1, so the naive 1/2 is
    // not a valid eta; the inscribed-cone value 1/3 is.
    CHECK(cc.eta_k == doctest::Approx(1.0 / 3.0));
    check_interior_cone(DomainSpec::ball(2), cc, 2024);
}

TEST_CASE("cone constants: scaled box") {
    ConeConstants cc = cone_constants(DomainSpec::box(2));
    CHECK(cc.epsilon_k == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(cc.eta_k == doctest::Approx(0.25));
    const double s = 1.0 / std::sqrt(2.0);
    DomainSpec scaled = DomainSpec::polygon({vec2(-s, -s), vec2(s, -s), vec2(s, s), vec2(-s, s)});
    check_interior_cone(scaled, cc, 2025);
}

TEST_CASE("cone constants: octagon eta from the 135-degree interior angle") {
    ConeConstants cc = cone_constants(domain_by_name("octagon"));
    CHECK(cc.eta_k == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(cc.epsilon_k == doctest::Approx(2.0 * std::sin(std::numbers::pi / 8)).epsilon(1e-12));
    check_interior_cone(domain_by_name("octagon"), cc, 2026);
}

TEST_CASE("cone constants: simplex2 and interval") {
    ConeConstants tri = cone_constants(domain_by_name("simplex2"));
    CHECK(tri.eta_k == doctest::Approx(0.125).epsilon(1e-12));  // 45-degree corners
    check_interior_cone(domain_by_name("simplex2"), tri, 2027);

    ConeConstants seg = cone_constants(domain_by_name("interval01"));
    CHECK(seg.epsilon_k == doctest::Approx(0.5));
    CHECK(seg.eta_k == doctest::Approx(0.5));
}

TEST_CASE("json round trip and octagon preset") {
    DomainSpec oct = domain_by_name("octagon");
    DomainSpec back = DomainSpec::from_json(oct.to_json());
    CHECK(back.vertices().size() == 8);
    CHECK(back.volume() == doctest::Approx(oct.volume()).epsilon(1e-15));

    DomainSpec ball = DomainSpec::from_json(DomainSpec::ball(2).to_json());
    CHECK(ball.is_unit_ball());
}
