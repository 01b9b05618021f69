#pragma once

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sosbound/bigfloat.hpp"
#include "sosbound/domain.hpp"
#include "sosbound/moments.hpp"
#include "sosbound/needles.hpp"
#include "sosbound/polynomial.hpp"

namespace sosbound {

// Raised when the numerics give out (Cholesky breakdown, residual blow-up).
// Signals basis/moment inconsistency or insufficient working precision, not
// a user error.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Monomial exponent vectors of total degree <= r, graded lexicographic.
std::vector<std::vector<int>> monomial_basis(int n_vars, int r);

// M(a,b) = int p_a p_b f dmu and B(a,b) = int p_a p_b dmu in the monomial
// basis, assembled in extended precision. B is the Gram matrix of the basis
// and is positive definite.
struct MomentMatrixPair {
    std::vector<BigFloat> M;  // row-major, side x side
    std::vector<BigFloat> B;
    std::vector<std::vector<int>> basis;
    int side = 0;
    int r = 0;
    unsigned precision_bits = 256;
};

MomentMatrixPair assemble(const Polynomial& f, const MomentOracle& o, int r);

struct BoundResult {
    int r = 0;
    double value = 0.0;     // f^(r), the smallest generalized eigenvalue
    double residual = 0.0;  // ||Mv - value Bv|| / ||v|| in extended precision
    Eigen::VectorXd density_coeffs;       // eigenvector, unit mu-mass (double view)
    std::vector<BigFloat> density_big;    // same, full precision
    std::vector<std::vector<int>> basis;
    double assemble_ms = 0.0;
    double solve_ms = 0.0;
};

// Smallest eigenvalue of M v = lambda B v: extended-precision Cholesky
// B = L L^T, symmetric congruence C = L^-1 M L^-T, double symmetric
// eigensolve on C, eigenvector mapped back and renormalized to unit mass.
BoundResult solve(const MomentMatrixPair& pair);

struct BoundSeries {
    std::vector<BoundResult> results;  // r = 1..r_max
    double f_min = 0.0;

    std::vector<double> errors() const;  // f^(r) - f_min
    const BoundResult& at_r(int r) const;
};

BoundSeries upper_bound_series(const Polynomial& f, const DomainSpec& d, const MeasureSpec& m,
                               int r_max, double f_min, unsigned precision_bits = 256);

// Shares the per-r Gram Cholesky factors across polynomials on the same
// (domain, measure), which is where nearly all the assembly time goes.
class EigenBoundEngine {
public:
    EigenBoundEngine(DomainSpec d, MeasureSpec m, unsigned precision_bits = 256);

    const MomentOracle& oracle() const { return oracle_; }
    BoundResult solve_for(const Polynomial& f, int r);
    BoundSeries series(const Polynomial& f, int r_max, double f_min);

private:
    struct GramFactor;
    std::shared_ptr<const GramFactor> factor(int r);

    MomentOracle oracle_;
    std::map<int, std::shared_ptr<const GramFactor>> factors_;
};

enum class NeedleRegime { InteriorCone, ConvexBody };

struct NeedleBoundResult {
    double value = 0.0;  // (int q f dx) / (int q dx), a feasible upper bound
    double h = 0.0;
    int density_degree = 0;
    bool in_regime = true;
};

// Feasible upper bound from the explicit needle densities, on a recentred
// problem (minimizer at the origin, K inside the unit ball, f(0) = 0,
// Lebesgue measure). InteriorCone uses the radial needle nu_r^h(|x|) with
// exponent beta; ConvexBody uses the boundary needle sigma_r^h, falling
// back to InteriorCone(beta=2) when the gradient vanishes at the origin.
NeedleBoundResult needle_bound(const Polynomial& f, const DomainSpec& d, int r,
                               NeedleRegime regime, double beta = 1.0);

struct RateFit {
    double slope = 0.0;
    double stderr_ = 0.0;
};

class ConvergedExactly : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Least-squares slope of log E^(r) against log r over r in [r_lo, r_hi].
// Throws ConvergedExactly when an error in the window is <= 0.
RateFit rate_fit(const BoundSeries& series, int r_lo, int r_hi);
RateFit rate_fit(const std::vector<std::pair<int, double>>& errors, int r_lo, int r_hi);

}  // namespace sosbound
