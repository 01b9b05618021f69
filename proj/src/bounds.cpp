#include "sosbound/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace sosbound {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// In-place lower Cholesky of a row-major symmetric matrix. Returns false on
// a non-positive pivot.
bool cholesky(std::vector<BigFloat>& a, int n) {
    for (int j = 0; j < n; ++j) {
        BigFloat s = a[j * n + j];
        for (int k = 0; k < j; ++k) s -= a[j * n + k] * a[j * n + k];
        if (s <= 0) return false;
        const BigFloat d = sqrt(s);
        a[j * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
            BigFloat t = a[i * n + j];
            for (int k = 0; k < j; ++k) t -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = t / d;
        }
        for (int k = j + 1; k < n; ++k) a[j * n + k] = 0;
    }
    return true;
}

// X := L^{-1} X for lower-triangular L (forward substitution on each column).
void solve_lower(const std::vector<BigFloat>& L, std::vector<BigFloat>& X, int n, int cols) {
    for (int c = 0; c < cols; ++c) {
        for (int i = 0; i < n; ++i) {
            BigFloat t = X[i * cols + c];
            for (int k = 0; k < i; ++k) t -= L[i * n + k] * X[k * cols + c];
            X[i * cols + c] = t / L[i * n + i];
        }
    }
}

// x := L^{-T} x (back substitution).
void solve_lower_transpose(const std::vector<BigFloat>& L, std::vector<BigFloat>& x, int n) {
    for (int i = n - 1; i >= 0; --i) {
        BigFloat t = x[i];
        for (int k = i + 1; k < n; ++k) t -= L[k * n + i] * x[k];
        x[i] = t / L[i * n + i];
    }
}

std::vector<BigFloat> assemble_matrix(const Polynomial& f, const MomentOracle& o,
                                      const std::vector<std::vector<int>>& basis) {
    const int side = static_cast<int>(basis.size());
    const int n = o.domain().n_vars();
    std::vector<BigFloat> M(static_cast<size_t>(side) * side);
    std::vector<int> exp(n);
    for (int i = 0; i < side; ++i) {
        for (int j = i; j < side; ++j) {
            BigFloat entry = 0;
            for (const auto& [ge, gc] : f.terms()) {
                for (int k = 0; k < n; ++k) exp[k] = basis[i][k] + basis[j][k] + ge[k];
                entry += BigFloat(gc) * o.moment_big(exp);
            }
            M[i * side + j] = entry;
            M[j * side + i] = entry;
        }
    }
    return M;
}

struct SolveOutput {
    double value;
    double residual;
    Eigen::VectorXd coeffs;
    std::vector<BigFloat> coeffs_big;
};

// Shared core: L is the Cholesky factor of B; M is the f-moment matrix.
SolveOutput solve_with_factor(const std::vector<BigFloat>& L, const std::vector<BigFloat>& M,
                              const std::vector<BigFloat>& B, int side) {
    // C = L^-1 M L^-T, symmetrized against round-off.
    std::vector<BigFloat> C = M;
    solve_lower(L, C, side, side);
    // C := (L^-1 (L^-1 M)^T)^T; transpose in place, solve, transpose back is
    // equivalent to solving on the right because the result is symmetric.
    std::vector<BigFloat> Ct(static_cast<size_t>(side) * side);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) Ct[j * side + i] = C[i * side + j];
    solve_lower(L, Ct, side, side);

    Eigen::MatrixXd Cd(side, side);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            Cd(i, j) = ((Ct[i * side + j] + Ct[j * side + i]) / 2).convert_to<double>();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Cd);
    if (es.info() != Eigen::Success) throw NumericalError("solve: eigensolver failed");
    const double value = es.eigenvalues()[0];
    Eigen::VectorXd y = es.eigenvectors().col(0);

    // Map back: v = L^-T y, then renormalize to unit mu-mass v^T B v = 1.
    std::vector<BigFloat> v(side);
    for (int i = 0; i < side; ++i) v[i] = BigFloat(y[i]);
    solve_lower_transpose(L, v, side);
    BigFloat mass = 0;
    for (int i = 0; i < side; ++i) {
        BigFloat row = 0;
        for (int j = 0; j < side; ++j) row += B[i * side + j] * v[j];
        mass += v[i] * row;
    }
    if (mass <= 0) throw NumericalError("solve: nonpositive density mass");
    const BigFloat scale = sqrt(mass);
    for (auto& vi : v) vi /= scale;

    // Residual ||Mv - value Bv|| / ||v|| in extended precision.
    BigFloat res2 = 0, vnorm2 = 0;
    const BigFloat lam(value);
    for (int i = 0; i < side; ++i) {
        BigFloat mi = 0, bi = 0;
        for (int j = 0; j < side; ++j) {
            mi += M[i * side + j] * v[j];
            bi += B[i * side + j] * v[j];
        }
        const BigFloat ri = mi - lam * bi;
        res2 += ri * ri;
        vnorm2 += v[i] * v[i];
    }
    const double residual = sqrt(res2 / vnorm2).convert_to<double>();
    if (residual > 1e-6)
        throw NumericalError("solve: residual above 1e-6; raise --precision-bits");

    Eigen::VectorXd coeffs(side);
    for (int i = 0; i < side; ++i) coeffs[i] = v[i].convert_to<double>();
    return {value, residual, std::move(coeffs), std::move(v)};
}

}  // namespace

std::vector<std::vector<int>> monomial_basis(int n_vars, int r) {
    std::vector<std::vector<int>> basis;
    std::vector<int> e(n_vars, 0);
    for (int d = 0; d <= r; ++d) {
        // lexicographic within fixed total degree
        std::fill(e.begin(), e.end(), 0);
        e[0] = d;
        while (true) {
            basis.push_back(e);
            // next composition of d
            int i = n_vars - 2;
            while (i >= 0 && e[i] == 0) --i;
            if (i < 0) break;
            --e[i];
            int rest = d;
            for (int k = 0; k <= i; ++k) rest -= e[k];
            e[i + 1] = rest;
            for (int k = i + 2; k < n_vars; ++k) e[k] = 0;
        }
    }
    return basis;
}

MomentMatrixPair assemble(const Polynomial& f, const MomentOracle& o, int r) {
    if (r < 0) throw std::invalid_argument("assemble: r must be >= 0");
    if (f.n_vars() != o.domain().n_vars())
        throw std::invalid_argument("assemble: polynomial/oracle dimension mismatch");
    PrecisionScope scope(o.precision_bits());
    MomentMatrixPair pair;
    pair.r = r;
    pair.precision_bits = o.precision_bits();
    pair.basis = monomial_basis(f.n_vars(), r);
    pair.side = static_cast<int>(pair.basis.size());
    pair.M = assemble_matrix(f, o, pair.basis);
    pair.B = assemble_matrix(Polynomial::constant(f.n_vars(), 1.0), o, pair.basis);
    return pair;
}

BoundResult solve(const MomentMatrixPair& pair) {
    PrecisionScope scope(pair.precision_bits);
    const auto t0 = Clock::now();
    std::vector<BigFloat> L = pair.B;
    if (!cholesky(L, pair.side))
        throw NumericalError("solve: Cholesky of B failed (moment/basis inconsistency "
                             "or insufficient precision)");
    SolveOutput out = solve_with_factor(L, pair.M, pair.B, pair.side);
    BoundResult res;
    res.r = pair.r;
    res.value = out.value;
    res.residual = out.residual;
    res.density_coeffs = std::move(out.coeffs);
    res.density_big = std::move(out.coeffs_big);
    res.basis = pair.basis;
    res.solve_ms = ms_since(t0);
    return res;
}

std::vector<double> BoundSeries::errors() const {
    std::vector<double> e;
    e.reserve(results.size());
    for (const auto& b : results) e.push_back(b.value - f_min);
    return e;
}

const BoundResult& BoundSeries::at_r(int r) const {
    for (const auto& b : results)
        if (b.r == r) return b;
    throw std::out_of_range("BoundSeries::at_r: no such r");
}

struct EigenBoundEngine::GramFactor {
    std::vector<std::vector<int>> basis;
    std::vector<BigFloat> B;
    std::vector<BigFloat> L;
    int side = 0;
    double build_ms = 0.0;
};

EigenBoundEngine::EigenBoundEngine(DomainSpec d, MeasureSpec m, unsigned precision_bits)
    : oracle_(std::move(d), m, precision_bits) {}

std::shared_ptr<const EigenBoundEngine::GramFactor> EigenBoundEngine::factor(int r) {
    auto it = factors_.find(r);
    if (it != factors_.end()) return it->second;
    PrecisionScope scope(oracle_.precision_bits());
    const auto t0 = Clock::now();
    auto gf = std::make_shared<GramFactor>();
    gf->basis = monomial_basis(oracle_.domain().n_vars(), r);
    gf->side = static_cast<int>(gf->basis.size());
    gf->B = assemble_matrix(Polynomial::constant(oracle_.domain().n_vars(), 1.0), oracle_, gf->basis);
    gf->L = gf->B;
    if (!cholesky(gf->L, gf->side))
        throw NumericalError("EigenBoundEngine: Gram Cholesky failed; raise --precision-bits");
    gf->build_ms = ms_since(t0);
    factors_.emplace(r, gf);
    return gf;
}

BoundResult EigenBoundEngine::solve_for(const Polynomial& f, int r) {
    PrecisionScope scope(oracle_.precision_bits());
    auto t0 = Clock::now();
    auto gf = factor(r);
    std::vector<BigFloat> M = assemble_matrix(f, oracle_, gf->basis);
    const double assemble_ms = ms_since(t0);

    t0 = Clock::now();
    SolveOutput out = solve_with_factor(gf->L, M, gf->B, gf->side);
    BoundResult res;
    res.r = r;
    res.value = out.value;
    res.residual = out.residual;
    res.density_coeffs = std::move(out.coeffs);
    res.density_big = std::move(out.coeffs_big);
    res.basis = gf->basis;
    res.assemble_ms = assemble_ms;
    res.solve_ms = ms_since(t0);
    return res;
}

BoundSeries EigenBoundEngine::series(const Polynomial& f, int r_max, double f_min) {
    if (r_max < 1) throw std::invalid_argument("series: r_max must be >= 1");
    BoundSeries s;
    s.f_min = f_min;
    for (int r = 1; r <= r_max; ++r) s.results.push_back(solve_for(f, r));
    return s;
}

BoundSeries upper_bound_series(const Polynomial& f, const DomainSpec& d, const MeasureSpec& m,
                               int r_max, double f_min, unsigned precision_bits) {
    EigenBoundEngine engine(d, m, precision_bits);
    return engine.series(f, r_max, f_min);
}

NeedleBoundResult needle_bound(const Polynomial& f, const DomainSpec& d, int r,
                               NeedleRegime regime, double beta) {
    const int n = d.n_vars();
    if (f.n_vars() != n) throw std::invalid_argument("needle_bound: dimension mismatch");
    Eigen::VectorXd origin = Eigen::VectorXd::Zero(n);
    if (!d.contains(origin))
        throw std::invalid_argument("needle_bound: domain not recentred (origin outside)");
    if (d.farthest_distance(origin) > 1.0 + 1e-9)
        throw std::invalid_argument("needle_bound: domain not inside the unit ball; recentre first");
    if (std::abs(f.evaluate(origin)) > 1e-9)
        throw std::invalid_argument("needle_bound: f(0) != 0; recentre first");

    const ConeConstants cone = cone_constants(d);
    const MomentOracle oracle(d, MeasureSpec::lebesgue(), 64);

    NeedleRegime effective = regime;
    Eigen::VectorXd grad = f.gradient_at(origin);
    if (regime == NeedleRegime::ConvexBody && grad.norm() < 1e-12) {
        effective = NeedleRegime::InteriorCone;
        beta = 2.0;  // Taylor upper estimator with vanishing gradient
    }

    NeedleBoundResult out;
    if (effective == NeedleRegime::InteriorCone) {
        Schedule sched = h_schedule(ScheduleKind::InteriorCone, n, r, beta, cone);
        NeedleSpec spec(r, sched.h, NeedleVariant::Needle);
        IntegralPair p = integrate_against(spec, f, oracle);
        out.value = p.numerator / p.mass;
        out.h = sched.h;
        out.in_regime = sched.in_regime;
        out.density_degree = spec.degree();
        return out;
    }

    if (n == 1) {
        Schedule sched = h_schedule(ScheduleKind::ConvexUnivariate, n, r, beta, cone);
        NeedleSpec spec(r, sched.h, NeedleVariant::HalfNeedle);
        const double dir = grad[0] > 0 ? 1.0 : -1.0;
        IntegralPair p = integrate_against(
            [&](const Eigen::VectorXd& x) { return needle_eval(spec, dir * x[0]); }, spec.degree(),
            f, oracle);
        out.value = p.numerator / p.mass;
        out.h = sched.h;
        out.in_regime = sched.in_regime;
        out.density_degree = spec.degree();
        return out;
    }

    Schedule sched = h_schedule(ScheduleKind::ConvexMultivariate, n, r, beta, cone);
    MultiNeedleSpec multi = MultiNeedleSpec::make(r, sched.h, grad.normalized());
    IntegralPair p = integrate_against(multi, f, oracle);
    out.value = p.numerator / p.mass;
    out.h = sched.h;
    out.in_regime = sched.in_regime;
    out.density_degree = multi.degree();
    return out;
}

RateFit rate_fit(const std::vector<std::pair<int, double>>& errors, int r_lo, int r_hi) {
    if (r_lo > r_hi) throw std::invalid_argument("rate_fit: empty window");
    std::vector<double> xs, ys;
    for (const auto& [r, e] : errors) {
        if (r < r_lo || r > r_hi) continue;
        if (e <= 0.0) throw ConvergedExactly("rate_fit: non-positive error in window");
        xs.push_back(std::log(double(r)));
        ys.push_back(std::log(e));
    }
    const size_t m = xs.size();
    if (m < 2) throw std::invalid_argument("rate_fit: window must contain >= 2 points");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    double ssr = 0;
    for (size_t i = 0; i < m; ++i) {
        const double resid = ys[i] - my - fit.slope * (xs[i] - mx);
        ssr += resid * resid;
    }
    fit.stderr_ = m > 2 ? std::sqrt(ssr / double(m - 2) / sxx) : 0.0;
    return fit;
}

RateFit rate_fit(const BoundSeries& series, int r_lo, int r_hi) {
    std::vector<std::pair<int, double>> errors;
    for (const auto& b : series.results) errors.emplace_back(b.r, b.value - series.f_min);
    return rate_fit(errors, r_lo, r_hi);
}

}  // namespace sosbound
