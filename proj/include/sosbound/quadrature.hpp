#pragma once

#include <Eigen/Dense>
#include <functional>

#include "sosbound/domain.hpp"

namespace sosbound {

struct Rule1D {
    Eigen::VectorXd nodes;    // on [-1, 1]
    Eigen::VectorXd weights;  // positive, sum to 2
};

// Gauss-Legendre rule with m nodes, exact for degree <= 2m-1. Tables are
// built once and shared read-only.
const Rule1D& gauss_legendre(int m);

// Integral over the domain of an integrand that is a polynomial of total
// degree <= degree, with Lebesgue measure. Positive-weight rules throughout:
//   box      -> tensor Gauss-Legendre
//   ball     -> radial Gauss rule x uniform angular grid (n <= 2)
//   simplex  -> interval rule (1-D) or Duffy-transformed tensor rule (2-D)
//   polygon  -> sum over the fan triangulation
// Throws when degree exceeds the 400-degree quadrature budget.
double integrate_domain(const DomainSpec& d, int degree,
                        const std::function<double(const Eigen::VectorXd&)>& fn);

}  // namespace sosbound
