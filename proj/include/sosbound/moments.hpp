#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "sosbound/bigfloat.hpp"
#include "sosbound/domain.hpp"

namespace sosbound {

// Closed-form moment oracle: integral of x^alpha over (domain, measure).
// All arithmetic runs in extended precision (precision_bits, >= 53); values
// are rounded to double only at the public `moment` boundary.
//
//   Box  x BoxJacobi(lambda):  products of Beta integrals on [-1,1]
//   Ball x BallJacobi(lambda): even-multi-index Gamma formula
//   Simplex x Lebesgue:        Dirichlet formula transported through the
//                              vertex map by polynomial expansion
//   Polygon x Lebesgue:        sum over the fan triangulation
//
// Lebesgue on box/ball is the lambda = 0 case of the Jacobi formulas.
// The oracle is immutable; the internal table cache is guarded by a mutex
// so concurrent lookups behave like a cache-free implementation.
class MomentOracle {
public:
    MomentOracle(DomainSpec domain, MeasureSpec measure, unsigned precision_bits = 256);

    const DomainSpec& domain() const { return domain_; }
    const MeasureSpec& measure() const { return measure_; }
    unsigned precision_bits() const { return precision_bits_; }

    double moment(const std::vector<int>& alpha) const;
    BigFloat moment_big(const std::vector<int>& alpha) const;
    BigFloat mass_big() const { return moment_big(std::vector<int>(domain_.n_vars(), 0)); }

private:
    BigFloat compute(const std::vector<int>& alpha) const;
    BigFloat interval_jacobi(int k, double lambda) const;
    BigFloat unit_ball_jacobi(const std::vector<int>& alpha, double lambda) const;
    BigFloat shifted_ball(const std::vector<int>& alpha) const;
    void ensure_vertex_tables(int degree) const;

    DomainSpec domain_;
    MeasureSpec measure_;
    unsigned precision_bits_;

    mutable std::mutex mu_;
    mutable std::unordered_map<uint64_t, BigFloat> cache_;
    // Full table for simplex/polygon kinds, keyed like cache_, built to
    // table_degree_ in one pass and extended on demand.
    mutable int table_degree_ = -1;
};

struct NormalizationConstant {
    int n = 0;
    double lambda = 0.0;
    double value = 0.0;  // pi^{n/2} Gamma(lambda+1) / Gamma(lambda+1+n/2)
};

NormalizationConstant normalization_constant(int n, double lambda);

// Both sides of the ball-to-interval reduction
//   int_{B^n} x1^k w_lambda dx  =  C_{n-1,lambda} int_{-1}^{1} t^k w_{lambda+(n-1)/2} dt
// computed through the two independent closed-form paths.
struct BallIntervalPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

BallIntervalPair reduce_ball_to_interval(int n, double lambda, int k);

}  // namespace sosbound
