#include "sosbound/needles.hpp"

#include <cmath>
#include <stdexcept>

#include "sosbound/moments.hpp"
#include "sosbound/quadrature.hpp"

namespace sosbound {

double chebyshev(int r, double t) {
    if (r < 0) throw std::invalid_argument("chebyshev: r must be >= 0");
    if (std::abs(t) <= 1.0) return std::cos(r * std::acos(t));
    const double a = std::abs(t);
    const double s = std::sqrt(a * a - 1.0);
    const double v = 0.5 * (std::pow(a + s, r) + std::pow(a - s, r));
    return (t < 0.0 && r % 2 == 1) ? -v : v;
}

double chebyshev_recurrence(int r, double t) {
    if (r < 0) throw std::invalid_argument("chebyshev_recurrence: r must be >= 0");
    if (r == 0) return 1.0;
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= r; ++k) {
        double p2 = 2.0 * t * p1 - p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double chebyshev_log(int r, double t) {
    if (t < 1.0) throw std::invalid_argument("chebyshev_log: t must be >= 1");
    // T_r(t) = (u^r + u^-r)/2 with u = t + sqrt(t^2-1) >= 1.
    const double u = t + std::sqrt(t * t - 1.0);
    const double lu = std::log(u);
    return r * lu + std::log1p(std::exp(-2.0 * r * lu)) - std::log(2.0);
}

NeedleSpec::NeedleSpec(int r_, double h_, NeedleVariant variant_)
    : r(r_), h(h_), variant(variant_) {
    if (r < 1) throw std::invalid_argument("NeedleSpec: r must be >= 1");
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("NeedleSpec: h must be in (0,1)");
}

namespace {

// Squared ratio T_m(z)^2 / T_m(z0)^2 with z0 > 1, computed in the log
// domain. |z| <= 1 keeps the numerator as a plain cosine.
double cheb_ratio_sq_log(int m, double z, double z0) {
    const double log_denom = chebyshev_log(m, z0);
    if (std::abs(z) <= 1.0) {
        const double c = std::cos(m * std::acos(z));
        return c * c * std::exp(-2.0 * log_denom);
    }
    const double log_num = chebyshev_log(m, std::abs(z));
    return std::exp(2.0 * (log_num - log_denom));
}

double cheb_ratio_sq_direct(int m, double z, double z0) {
    const double num = chebyshev(m, z);
    const double den = chebyshev(m, z0);
    const double q = num / den;
    return q * q;
}

void needle_args(const NeedleSpec& s, double t, int& m, double& z, double& z0) {
    if (s.variant == NeedleVariant::Needle) {
        m = s.r;
        z = 1.0 + s.h * s.h - t * t;
        z0 = 1.0 + s.h * s.h;
    } else {
        m = 2 * s.r;
        z = (2.0 + s.h - 2.0 * t) / (2.0 - s.h);
        z0 = (2.0 + s.h) / (2.0 - s.h);
    }
}

}  // namespace

double needle_eval_direct(const NeedleSpec& s, double t) {
    int m;
    double z, z0;
    needle_args(s, t, m, z, z0);
    return cheb_ratio_sq_direct(m, z, z0);
}

double needle_eval_log(const NeedleSpec& s, double t) {
    int m;
    double z, z0;
    needle_args(s, t, m, z, z0);
    return cheb_ratio_sq_log(m, z, z0);
}

double needle_eval(const NeedleSpec& s, double t) {
    return s.r > 25 ? needle_eval_log(s, t) : needle_eval_direct(s, t);
}

double lambda_lower(int r, double t) {
    if (t < 0.0) throw std::invalid_argument("lambda_lower: t must be >= 0");
    return std::max(1.0 - 2.0 * double(r) * double(r) * t, 0.0);
}

MultiNeedleSpec MultiNeedleSpec::make(int r, double h, const Eigen::VectorXd& v) {
    if (r < 1) throw std::invalid_argument("MultiNeedleSpec: r must be >= 1");
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("MultiNeedleSpec: h must be in (0,1)");
    const int n = static_cast<int>(v.size());
    if (n < 1 || std::abs(v.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("MultiNeedleSpec: v must be a unit vector");

    MultiNeedleSpec m;
    m.r = r;
    m.h = h;
    m.v = v;
    m.W.resize(n, n - 1);
    if (n > 1) {
        // Householder reflection sending e1 to v; its trailing columns span
        // the orthogonal complement of v.
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n);
        e1[0] = 1.0;
        Eigen::VectorXd u = e1 - v;
        Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
        if (u.norm() > 1e-12) H -= 2.0 * (u * u.transpose()) / u.squaredNorm();
        m.W = H.rightCols(n - 1);
    }
    Eigen::MatrixXd frame(n, n);
    frame.col(0) = m.v;
    if (n > 1) frame.rightCols(n - 1) = m.W;
    if (!(frame.transpose() * frame).isIdentity(1e-12))
        throw std::logic_error("MultiNeedleSpec: frame not orthonormal");
    return m;
}

double multineedle_eval(const MultiNeedleSpec& m, const Eigen::VectorXd& x) {
    if (x.size() != m.v.size())
        throw std::invalid_argument("multineedle_eval: dimension mismatch");
    NeedleSpec half(m.r, m.h * m.h, NeedleVariant::HalfNeedle);
    double value = needle_eval(half, m.v.dot(x));
    NeedleSpec full(m.r, m.h, NeedleVariant::Needle);
    for (int j = 0; j < m.W.cols(); ++j) value *= needle_eval(full, m.W.col(j).dot(x));
    return value;
}

Schedule h_schedule(ScheduleKind kind, int n, int r, double beta,
                    std::optional<ConeConstants> cone) {
    if (r < 2) throw std::invalid_argument("h_schedule: r must be >= 2");
    if (n < 1) throw std::invalid_argument("h_schedule: n must be >= 1");
    const double logr = std::log(double(r));
    Schedule out;
    switch (kind) {
        case ScheduleKind::InteriorCone:
            if (beta < 1.0) throw std::invalid_argument("h_schedule: beta must be >= 1");
            out.h_raw = 2.0 * (2.0 * n + beta) * logr / r;
            break;
        case ScheduleKind::ConvexUnivariate: {
            const double b = 8.0 * logr / r;
            out.h_raw = b * b;
            break;
        }
        case ScheduleKind::ConvexMultivariate:
            out.h_raw = (8.0 * n + 4.0) * logr / r;
            break;
    }
    const double cap = cone ? cone->epsilon_k : 1.0;
    const double floor = 1.0 / (64.0 * double(r) * double(r));
    out.in_regime = out.h_raw <= cap;
    out.h = std::min(out.h_raw, cap * (1.0 - 1e-12));
    out.h = std::max(out.h, std::min(floor * (1.0 + 1e-12), cap * 0.5));
    if (out.h >= 1.0) out.h = 1.0 - 1e-12;
    return out;
}

IntegralPair integrate_against(const std::function<double(const Eigen::VectorXd&)>& density,
                               int density_degree, const Polynomial& f, const MomentOracle& o) {
    if (o.measure().kind != MeasureKind::Lebesgue)
        throw std::invalid_argument("integrate_against: Lebesgue measure only");
    if (f.n_vars() != o.domain().n_vars())
        throw std::invalid_argument("integrate_against: dimension mismatch");
    const int deg = density_degree + f.degree();
    IntegralPair out;
    out.numerator = integrate_domain(o.domain(), deg,
                                     [&](const Eigen::VectorXd& x) { return density(x) * f.evaluate(x); });
    out.mass = integrate_domain(o.domain(), density_degree, density);
    return out;
}

IntegralPair integrate_against(const NeedleSpec& s, const Polynomial& f, const MomentOracle& o) {
    // Radial composition nu_r^h(|x|): even in t, so a polynomial in x.
    return integrate_against(
        [&](const Eigen::VectorXd& x) { return needle_eval(s, x.norm()); }, s.degree(), f, o);
}

IntegralPair integrate_against(const MultiNeedleSpec& m, const Polynomial& f,
                               const MomentOracle& o) {
    return integrate_against(
        [&](const Eigen::VectorXd& x) { return multineedle_eval(m, x); }, m.degree(), f, o);
}

}  // namespace sosbound
