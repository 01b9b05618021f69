#pragma once

// Shared oracles for the test suites. Everything here is implementation-
// independent: finite differences, Monte-Carlo integration, shoelace areas,
// plain least squares.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "sosbound/domain.hpp"
#include "sosbound/polynomial.hpp"

namespace testsup {

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::VectorXd random_point(std::mt19937_64& g, int n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = u(g);
    return x;
}

inline sosbound::Polynomial random_polynomial(std::mt19937_64& g, int n, int max_degree,
                                              double coef_bound) {
    std::uniform_real_distribution<double> u(-coef_bound, coef_bound);
    std::uniform_int_distribution<int> e(0, max_degree);
    sosbound::Polynomial p(n);
    for (int t = 0; t < 8; ++t) {
        std::vector<int> exps(n);
        int total = 0;
        for (int i = 0; i < n; ++i) {
            exps[i] = e(g);
            total += exps[i];
        }
        if (total > max_degree) continue;
        p.add_term(exps, u(g));
    }
    return p;
}

// Central finite differences.
inline Eigen::VectorXd fd_gradient(const sosbound::Polynomial& p, const Eigen::VectorXd& x,
                                   double h = 1e-5) {
    const int n = p.n_vars();
    Eigen::VectorXd gvec(n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        gvec[i] = (p.evaluate(xp) - p.evaluate(xm)) / (2.0 * h);
    }
    return gvec;
}

inline Eigen::MatrixXd fd_hessian(const sosbound::Polynomial& p, const Eigen::VectorXd& x,
                                  double h = 1e-5) {
    const int n = p.n_vars();
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += h; xpp[j] += h;
            xpm[i] += h; xpm[j] -= h;
            xmp[i] -= h; xmp[j] += h;
            xmm[i] -= h; xmm[j] -= h;
            H(i, j) = (p.evaluate(xpp) - p.evaluate(xpm) - p.evaluate(xmp) + p.evaluate(xmm)) /
                      (4.0 * h * h);
        }
    return H;
}

inline double shoelace(const std::vector<Eigen::VectorXd>& v) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * s;
}

struct MonteCarlo {
    double mean = 0.0;
    double std_error = 0.0;
};

// E-hat of fn over uniform samples of the domain's bounding box, times the
// box volume: a 4-sigma oracle for integrals against the Lebesgue measure.
inline MonteCarlo mc_integral(const sosbound::DomainSpec& d,
                              const std::function<double(const Eigen::VectorXd&)>& fn,
                              size_t samples, uint64_t seed) {
    auto g = rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto [lo, hi] = d.bounding_box();
    const int n = d.n_vars();
    double box_vol = 1.0;
    for (int i = 0; i < n; ++i) box_vol *= hi[i] - lo[i];
    double sum = 0.0, sum2 = 0.0;
    Eigen::VectorXd x(n);
    for (size_t s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(g);
        const double v = d.contains(x) ? fn(x) : 0.0;
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / samples;
    const double var = std::max(sum2 / samples - mean * mean, 0.0);
    return {box_vol * mean, box_vol * std::sqrt(var / samples)};
}

// Least squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t m = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

// Uniform samples of the domain itself (bounding-box rejection).
inline std::vector<Eigen::VectorXd> domain_samples(const sosbound::DomainSpec& d, int count,
                                                   uint64_t seed) {
    auto g = rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto [lo, hi] = d.bounding_box();
    std::vector<Eigen::VectorXd> pts;
    Eigen::VectorXd x(d.n_vars());
    while (static_cast<int>(pts.size()) < count) {
        for (int i = 0; i < d.n_vars(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(g);
        if (d.contains(x)) pts.push_back(x);
    }
    return pts;
}

}  // namespace testsup
