#pragma once

#include <Eigen/Dense>
#include <functional>

#include "sosbound/domain.hpp"
#include "sosbound/polynomial.hpp"

namespace sosbound {

enum class EstimatorKind { QuadraticTaylor, LinearOnBall, Lipschitz };

// An upper estimator g of f, exact at the anchor: g(anchor) = f(anchor) and
// g >= f on certified_on. Validity is certified on a dense sample (a guard
// against implementation errors, not a proof).
struct EstimatorReport {
    Polynomial g;
    Eigen::VectorXd anchor;
    EstimatorKind kind;
    DomainSpec certified_on;
};

// g(x) = f(a) + <grad f(a), x-a> + gamma ||x-a||^2, separable in the shifted
// coordinates. Requires gamma >= the grid-estimated Hessian constant.
EstimatorReport quadratic_estimator(const Polynomial& f, const Eigen::VectorXd& a, double gamma,
                                    const DomainSpec& certify_on);

// Linear upper estimator on the ball B_rho(c) at a boundary point a where
// the gradient lies in the normal cone: grad f(a) = lambda (c - a).
// h(x) = f(a) + (lambda + 2 gamma)(rho^2 + <x-c, c-a>).
EstimatorReport linear_estimator_on_ball(const Polynomial& f, const Eigen::VectorXd& a,
                                         const Eigen::VectorXd& c, double rho, double gamma,
                                         double lambda);

// x -> f(a) + beta ||x-a||; not a polynomial, used for needle-bound analysis
// only and never fed to the eigen engine.
std::function<double(const Eigen::VectorXd&)> lipschitz_estimator(const Polynomial& f,
                                                                  const Eigen::VectorXd& a,
                                                                  double beta,
                                                                  const DomainSpec& certify_on);

struct AffineMapRecord {
    Eigen::MatrixXd U;
    Eigen::VectorXd c;

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return U * x + c; }
    AffineMapRecord inverse() const;
};

struct RecentredProblem {
    Polynomial f;          // f(phi^{-1}(y)) - f(a); zero minimum at the origin
    DomainSpec domain;     // phi(K), contained in the unit ball
    AffineMapRecord map;   // phi: y = (x - a) / scale
    double scale = 1.0;
};

// Affine change of variables sending a to the origin and shrinking the
// domain into the unit ball, with scale = 1 + max distance from a to the
// set. Bounds are invariant under the transport.
RecentredProblem recentre(const Polynomial& f, const DomainSpec& d, const Eigen::VectorXd& a);

}  // namespace sosbound
