#pragma once

#include <Eigen/Dense>
#include <optional>

#include "sosbound/domain.hpp"
#include "sosbound/polynomial.hpp"

namespace sosbound {

class MomentOracle;

// Chebyshev polynomial of the first kind, by the explicit branch formula
// cos(r arccos t) on [-1,1] and the hyperbolic branch outside.
double chebyshev(int r, double t);

// Same values through the three-term recurrence (validation path).
double chebyshev_recurrence(int r, double t);

// log T_r(t) for t >= 1, stable for arguments where T_r overflows double.
double chebyshev_log(int r, double t);

enum class NeedleVariant { Needle, HalfNeedle };

// nu_r^h(t) = T_r^2(1+h^2-t^2) / T_r^2(1+h^2)              (Needle)
// kappa_r^h(t) = T_{2r}^2((2+h-2t)/(2-h)) / T_{2r}^2((2+h)/(2-h))  (HalfNeedle)
// Degree-4r squares that approximate the Dirac delta at 0 on [-1,1] / [0,1].
struct NeedleSpec {
    int r = 1;
    double h = 0.5;
    NeedleVariant variant = NeedleVariant::Needle;

    NeedleSpec() = default;
    NeedleSpec(int r_, double h_, NeedleVariant variant_);
    int degree() const { return 4 * r; }
};

double needle_eval(const NeedleSpec& s, double t);

// Forced evaluation paths; needle_eval switches to the log-domain form for
// r > 25, where T_r at the normalization argument outgrows double range.
double needle_eval_direct(const NeedleSpec& s, double t);
double needle_eval_log(const NeedleSpec& s, double t);

// Lower envelope max(1 - 2 r^2 t, 0) certifying needle mass near 0
// (Markov-inequality argument); Lambda_{4r} <= nu_r^h and <= kappa_r^h.
double lambda_lower(int r, double t);

// sigma_r^h(x) = kappa_r^{h^2}(<x,v>) * prod_j nu_r^h(<x,w_j>) with
// {v, w_1..w_{n-1}} orthonormal; degree 4nr, nonnegative everywhere.
struct MultiNeedleSpec {
    int r;
    double h;
    Eigen::VectorXd v;  // unit gradient direction
    Eigen::MatrixXd W;  // n x (n-1) orthonormal completion of v

    // Deterministic completion of v via a Householder reflection.
    static MultiNeedleSpec make(int r, double h, const Eigen::VectorXd& v);
    int degree() const { return 4 * static_cast<int>(v.size()) * r; }
};

double multineedle_eval(const MultiNeedleSpec& m, const Eigen::VectorXd& x);

enum class ScheduleKind { InteriorCone, ConvexUnivariate, ConvexMultivariate };

struct Schedule {
    double h = 0.0;        // clamped value, usable as a needle width
    double h_raw = 0.0;    // the cited formula value
    bool in_regime = true; // false when h_raw exceeds epsilon_K (or 1)
};

// h(r) choices from the convergence analysis:
//   InteriorCone(beta):   2(2n+beta) log r / r
//   ConvexUnivariate:     (8 log r / r)^2
//   ConvexMultivariate:   (8n+4) log r / r
// When cone constants are supplied the value is clamped to
// (1/(64 r^2), epsilon_K) and flagged out-of-regime if the raw value
// exceeds epsilon_K. Requires r >= 2.
Schedule h_schedule(ScheduleKind kind, int n, int r, double beta = 1.0,
                    std::optional<ConeConstants> cone = std::nullopt);

struct IntegralPair {
    double numerator = 0.0;  // int_K q(x) f(x) dx
    double mass = 0.0;       // int_K q(x) dx
};

// Quadrature of a density (a polynomial of the given total degree, supplied
// as an evaluator) against f over the oracle's domain, exact for the
// integrand degree. Lebesgue measure only; degree budget 400.
IntegralPair integrate_against(const std::function<double(const Eigen::VectorXd&)>& density,
                               int density_degree, const Polynomial& f, const MomentOracle& o);

IntegralPair integrate_against(const NeedleSpec& s, const Polynomial& f, const MomentOracle& o);
IntegralPair integrate_against(const MultiNeedleSpec& m, const Polynomial& f,
                               const MomentOracle& o);

}  // namespace sosbound
