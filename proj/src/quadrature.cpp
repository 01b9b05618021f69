#include "sosbound/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sosbound {

namespace {

Rule1D build_gauss_legendre(int m) {
    Rule1D rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        // Newton iteration on P_m from the Chebyshev-angle initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= m; ++k) {
            double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = m * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[m - 1 - i] = x;
        rule.weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

std::mutex rule_mutex;
std::map<int, Rule1D> rule_cache;

int nodes_for_degree(int degree) { return degree / 2 + 1; }

constexpr int kMaxDegree = 400;

using Integrand = std::function<double(const Eigen::VectorXd&)>;

double integrate_box(int n, int degree, const Integrand& fn) {
    const Rule1D& rule = gauss_legendre(nodes_for_degree(degree));
    const int m = static_cast<int>(rule.nodes.size());
    std::vector<int> idx(n, 0);
    Eigen::VectorXd x(n);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            x[i] = rule.nodes[idx[i]];
            w *= rule.weights[idx[i]];
        }
        total += w * fn(x);
        int d = 0;
        while (d < n && ++idx[d] == m) idx[d++] = 0;
        if (d == n) break;
    }
    return total;
}

double integrate_interval(double a, double b, int degree, const Integrand& fn) {
    const Rule1D& rule = gauss_legendre(nodes_for_degree(degree));
    double total = 0.0;
    Eigen::VectorXd x(1);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < rule.nodes.size(); ++i) {
        x[0] = mid + half * rule.nodes[i];
        total += rule.weights[i] * fn(x);
    }
    return half * total;
}

// Polar rule on a 2-D disk: uniform angles (exact for trigonometric degree
// <= n_angles - 1) times a radial Gauss rule on [0, R] absorbing the rho
// Jacobian (degree + 1 in rho).
double integrate_disk(const Eigen::VectorXd& center, double R, int degree, const Integrand& fn) {
    const int n_angles = degree + 1;
    const Rule1D& radial = gauss_legendre(nodes_for_degree(degree + 1));
    double total = 0.0;
    Eigen::VectorXd x(2);
    for (int i = 0; i < radial.nodes.size(); ++i) {
        const double rho = 0.5 * R * (radial.nodes[i] + 1.0);
        const double wr = 0.5 * R * radial.weights[i] * rho;
        double ring = 0.0;
        for (int k = 0; k < n_angles; ++k) {
            const double th = 2.0 * std::numbers::pi * k / n_angles;
            x[0] = center[0] + rho * std::cos(th);
            x[1] = center[1] + rho * std::sin(th);
            ring += fn(x);
        }
        total += wr * ring * 2.0 * std::numbers::pi / n_angles;
    }
    return total;
}

// Duffy-collapsed tensor rule on a triangle: x(u,w) = v0 + u[(v1-v0) + w(v2-v1)]
// with Jacobian u |det[v1-v0, v2-v0]|. A degree-d integrand in x has degree
// <= d+1 in u and <= d in w.
double integrate_triangle(const Eigen::VectorXd& v0, const Eigen::VectorXd& v1,
                          const Eigen::VectorXd& v2, int degree, const Integrand& fn) {
    const Rule1D& ru = gauss_legendre(nodes_for_degree(degree + 1));
    const Rule1D& rw = gauss_legendre(nodes_for_degree(degree));
    const double det = std::abs((v1[0] - v0[0]) * (v2[1] - v0[1]) - (v2[0] - v0[0]) * (v1[1] - v0[1]));
    Eigen::VectorXd x(2);
    double total = 0.0;
    for (int i = 0; i < ru.nodes.size(); ++i) {
        const double u = 0.5 * (ru.nodes[i] + 1.0);
        const double wu = 0.5 * ru.weights[i];
        for (int j = 0; j < rw.nodes.size(); ++j) {
            const double w = 0.5 * (rw.nodes[j] + 1.0);
            const double ww = 0.5 * rw.weights[j];
            x = v0 + u * ((v1 - v0) + w * (v2 - v1));
            total += wu * ww * u * det * fn(x);
        }
    }
    return total;
}

}  // namespace

const Rule1D& gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: m must be >= 1");
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto it = rule_cache.find(m);
    if (it == rule_cache.end()) it = rule_cache.emplace(m, build_gauss_legendre(m)).first;
    return it->second;
}

double integrate_domain(const DomainSpec& d, int degree,
                        const std::function<double(const Eigen::VectorXd&)>& fn) {
    if (degree < 0) degree = 0;
    if (degree > kMaxDegree)
        throw std::invalid_argument("integrate_domain: degree exceeds quadrature budget (400)");
    switch (d.kind()) {
        case DomainKind::Box:
            return integrate_box(d.n_vars(), degree, fn);
        case DomainKind::Ball: {
            if (d.n_vars() == 1) {
                double c = d.ball_center()[0], R = d.ball_radius();
                return integrate_interval(c - R, c + R, degree, fn);
            }
            if (d.n_vars() == 2) return integrate_disk(d.ball_center(), d.ball_radius(), degree, fn);
            throw std::invalid_argument("integrate_domain: ball quadrature supports n <= 2");
        }
        case DomainKind::Simplex: {
            const auto& v = d.vertices();
            if (d.n_vars() == 1) {
                double a = v[0][0], b = v[1][0];
                if (a > b) std::swap(a, b);
                return integrate_interval(a, b, degree, fn);
            }
            if (d.n_vars() == 2) return integrate_triangle(v[0], v[1], v[2], degree, fn);
            throw std::invalid_argument("integrate_domain: simplex quadrature supports n <= 2");
        }
        case DomainKind::Polygon: {
            double total = 0.0;
            for (const auto& tri : triangulate(d)) {
                const auto& v = tri.vertices();
                total += integrate_triangle(v[0], v[1], v[2], degree, fn);
            }
            return total;
        }
    }
    throw std::logic_error("integrate_domain: unreachable");
}

}  // namespace sosbound
