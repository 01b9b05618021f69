#include "sosbound/estimators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace sosbound {

namespace {

// Up to `count` deterministic samples of the domain (bounding-box rejection
// with a fixed seed).
std::vector<Eigen::VectorXd> sample_domain(const DomainSpec& d, int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto [lo, hi] = d.bounding_box();
    const int n = d.n_vars();
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(count);
    Eigen::VectorXd x(n);
    int attempts = 0;
    const int max_attempts = count * 50;
    while (static_cast<int>(pts.size()) < count && attempts++ < max_attempts) {
        for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
        if (d.contains(x)) pts.push_back(x);
    }
    return pts;
}

void certify_upper(const std::function<double(const Eigen::VectorXd&)>& g, const Polynomial& f,
                   const Eigen::VectorXd& a, const DomainSpec& domain, const char* what) {
    const double fa = f.evaluate(a);
    if (std::abs(g(a) - fa) > 1e-9 * std::max(1.0, std::abs(fa)))
        throw std::logic_error(std::string(what) + ": estimator not exact at the anchor");
    for (const auto& x : sample_domain(domain, 10000, 0xC0FFEEu))
        if (g(x) < f.evaluate(x) - 1e-7)
            throw std::invalid_argument(std::string(what) +
                                        ": grid certificate failed (g < f on the domain)");
}

}  // namespace

EstimatorReport quadratic_estimator(const Polynomial& f, const Eigen::VectorXd& a, double gamma,
                                    const DomainSpec& certify_on) {
    if (gamma < 0.0) throw std::invalid_argument("quadratic_estimator: gamma must be >= 0");
    const int n = f.n_vars();
    if (a.size() != n) throw std::invalid_argument("quadratic_estimator: dimension mismatch");

    Eigen::VectorXd grad = f.gradient_at(a);
    Polynomial g = Polynomial::constant(n, f.evaluate(a));
    for (int i = 0; i < n; ++i) {
        Polynomial xi_m_ai = Polynomial::variable(n, i) - Polynomial::constant(n, a[i]);
        g = g + xi_m_ai * grad[i];
        g = g + xi_m_ai * xi_m_ai * gamma;
    }
    certify_upper([&](const Eigen::VectorXd& x) { return g.evaluate(x); }, f, a, certify_on,
                  "quadratic_estimator");
    return {g, a, EstimatorKind::QuadraticTaylor, certify_on};
}

EstimatorReport linear_estimator_on_ball(const Polynomial& f, const Eigen::VectorXd& a,
                                         const Eigen::VectorXd& c, double rho, double gamma,
                                         double lambda) {
    const int n = f.n_vars();
    if (a.size() != n || c.size() != n)
        throw std::invalid_argument("linear_estimator_on_ball: dimension mismatch");
    if (lambda < 0.0) throw std::invalid_argument("linear_estimator_on_ball: lambda must be >= 0");
    if (std::abs((a - c).norm() - rho) > 1e-8 * std::max(1.0, rho))
        throw std::invalid_argument("linear_estimator_on_ball: a is not on the ball boundary");
    Eigen::VectorXd grad = f.gradient_at(a);
    if ((grad - lambda * (c - a)).norm() > 1e-8 * (1.0 + grad.norm()))
        throw std::invalid_argument(
            "linear_estimator_on_ball: gradient not aligned with the inward normal");

    // h(x) = f(a) + (lambda + 2 gamma)(rho^2 + <x - c, c - a>)
    const double k = lambda + 2.0 * gamma;
    Polynomial h = Polynomial::constant(n, f.evaluate(a) + k * (rho * rho - c.dot(c - a)));
    for (int i = 0; i < n; ++i)
        if (c[i] - a[i] != 0.0)
            h.add_term(Polynomial::variable(n, i).terms().begin()->first, k * (c[i] - a[i]));

    DomainSpec ball = DomainSpec::ball(c, rho);
    certify_upper([&](const Eigen::VectorXd& x) { return h.evaluate(x); }, f, a, ball,
                  "linear_estimator_on_ball");
    return {h, a, EstimatorKind::LinearOnBall, ball};
}

std::function<double(const Eigen::VectorXd&)> lipschitz_estimator(const Polynomial& f,
                                                                  const Eigen::VectorXd& a,
                                                                  double beta,
                                                                  const DomainSpec& certify_on) {
    if (beta < 0.0) throw std::invalid_argument("lipschitz_estimator: beta must be >= 0");
    const double fa = f.evaluate(a);
    Eigen::VectorXd anchor = a;
    auto g = [fa, beta, anchor](const Eigen::VectorXd& x) { return fa + beta * (x - anchor).norm(); };
    certify_upper(g, f, a, certify_on, "lipschitz_estimator");
    return g;
}

AffineMapRecord AffineMapRecord::inverse() const {
    Eigen::MatrixXd Uinv = U.inverse();
    return {Uinv, -(Uinv * c)};
}

RecentredProblem recentre(const Polynomial& f, const DomainSpec& d, const Eigen::VectorXd& a) {
    if (!d.contains(a)) throw std::invalid_argument("recentre: anchor outside the domain");
    const int n = d.n_vars();
    const double scale = 1.0 + d.farthest_distance(a);

    AffineMapRecord map{Eigen::MatrixXd::Identity(n, n) / scale, -a / scale};
    DomainSpec mapped = affine_map(d, map.U, map.c);
    // f_tilde(y) = f(scale * y + a) - f(a)
    Polynomial ft = f.compose_affine(Eigen::MatrixXd::Identity(n, n) * scale, a) -
                    Polynomial::constant(n, f.evaluate(a));
    return {std::move(ft), std::move(mapped), std::move(map), scale};
}

}  // namespace sosbound
