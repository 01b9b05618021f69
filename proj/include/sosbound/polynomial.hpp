#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sosbound {

// Sparse multivariate polynomial with double coefficients. Exponent vectors
// are dense (length n_vars); terms with zero coefficient are never stored.
// Immutable once built through the arithmetic API; safe for concurrent reads.
class Polynomial {
public:
    using Exponents = std::vector<int>;
    using TermMap = std::map<Exponents, double>;

    explicit Polynomial(int n_vars);

    static Polynomial constant(int n_vars, double c);
    static Polynomial variable(int n_vars, int index);
    static Polynomial monomial(int n_vars, const Exponents& exps, double coef);

    int n_vars() const { return n_vars_; }
    int degree() const;  // max total degree, 0 for the zero polynomial
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double coefficient(const Exponents& exps) const;
    void add_term(const Exponents& exps, double coef);

    double evaluate(const Eigen::VectorXd& x) const;

    Polynomial derivative(int var) const;
    std::vector<Polynomial> gradient() const;
    std::vector<std::vector<Polynomial>> hessian() const;

    Eigen::VectorXd gradient_at(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian_at(const Eigen::VectorXd& x) const;

    // q(x) = p(Ux + c). U must be invertible (pivoted LU, pivot tolerance
    // 1e-12); degree is preserved.
    Polynomial compose_affine(const Eigen::MatrixXd& U, const Eigen::VectorXd& c) const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(double s) const;
    Polynomial operator-() const;
    Polynomial pow(int k) const;

    std::string to_string() const;

    nlohmann::json to_json() const;
    static Polynomial from_json(const nlohmann::json& j);

private:
    int n_vars_;
    TermMap terms_;
};

struct SmoothnessConstants {
    double beta = 0.0;   // max gradient norm over the sampled set
    double gamma = 0.0;  // half of max Hessian spectral norm
};

class DomainSpec;

// Grid maximization of ||grad f|| and 0.5*||hess f|| over a bounded domain.
// A lower approximation of the true maxima, non-decreasing in grid_density.
SmoothnessConstants smoothness_constants(const Polynomial& p, const DomainSpec& domain,
                                         int grid_density);

}  // namespace sosbound
