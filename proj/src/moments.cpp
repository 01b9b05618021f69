#include "sosbound/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace sosbound {

namespace {

uint64_t pack_exponents(const std::vector<int>& alpha) {
    uint64_t key = 0;
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < 0 || alpha[i] > 255)
            throw std::invalid_argument("MomentOracle: exponent out of range");
        key |= uint64_t(alpha[i]) << (8 * i);
    }
    return key;
}

// Dense-in-u polynomial used for transporting Dirichlet moments through the
// simplex vertex map.
using UPoly = std::unordered_map<uint64_t, BigFloat>;

UPoly mul_linear(const UPoly& p, const BigFloat& c0, const std::vector<BigFloat>& cv) {
    UPoly out;
    out.reserve(p.size() * (cv.size() + 1));
    for (const auto& [key, coef] : p) {
        if (!c0.is_zero()) out[key] += c0 * coef;
        for (size_t j = 0; j < cv.size(); ++j) {
            if (cv[j].is_zero()) continue;
            out[key + (uint64_t(1) << (8 * j))] += cv[j] * coef;
        }
    }
    return out;
}

}  // namespace

MomentOracle::MomentOracle(DomainSpec domain, MeasureSpec measure, unsigned precision_bits)
    : domain_(std::move(domain)), measure_(measure), precision_bits_(std::max(53u, precision_bits)) {
    if (!measure_compatible(domain_, measure_))
        throw std::invalid_argument("MomentOracle: incompatible (domain, measure) pair");
    if ((domain_.kind() == DomainKind::Simplex || domain_.kind() == DomainKind::Polygon) &&
        measure_.kind != MeasureKind::Lebesgue)
        throw std::invalid_argument("MomentOracle: simplex/polygon support Lebesgue only");
    if (domain_.kind() == DomainKind::Ball && !domain_.is_unit_ball() &&
        measure_.kind != MeasureKind::Lebesgue)
        throw std::invalid_argument("MomentOracle: weighted measures need the unit ball");
}

double MomentOracle::moment(const std::vector<int>& alpha) const {
    return moment_big(alpha).convert_to<double>();
}

BigFloat MomentOracle::moment_big(const std::vector<int>& alpha) const {
    if (static_cast<int>(alpha.size()) != domain_.n_vars())
        throw std::invalid_argument("MomentOracle::moment: exponent length mismatch");
    PrecisionScope scope(precision_bits_);
    const uint64_t key = pack_exponents(alpha);

    if (domain_.kind() == DomainKind::Simplex || domain_.kind() == DomainKind::Polygon) {
        int deg = 0;
        for (int a : alpha) deg += a;
        std::lock_guard<std::mutex> lock(mu_);
        ensure_vertex_tables(deg);
        return cache_.at(key);
    }

    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    BigFloat v = compute(alpha);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(v)).first->second;
}

BigFloat MomentOracle::compute(const std::vector<int>& alpha) const {
    const double lambda = measure_.kind == MeasureKind::Lebesgue ? 0.0 : measure_.lambda;
    switch (domain_.kind()) {
        case DomainKind::Box: {
            BigFloat prod = 1;
            for (int k : alpha) {
                if (k % 2 != 0) return BigFloat(0);
                prod *= interval_jacobi(k, lambda);
            }
            return prod;
        }
        case DomainKind::Ball:
            if (domain_.is_unit_ball()) return unit_ball_jacobi(alpha, lambda);
            return shifted_ball(alpha);
        default:
            throw std::logic_error("MomentOracle::compute: unreachable");
    }
}

// int_{-1}^{1} t^k (1 - t^2)^lambda dt
BigFloat MomentOracle::interval_jacobi(int k, double lambda) const {
    if (k % 2 != 0) return BigFloat(0);
    const int m = k / 2;
    BigFloat lam(lambda);
    return bf_gamma(BigFloat(m) + BigFloat(1) / 2) * bf_gamma(lam + 1) /
           bf_gamma(BigFloat(m) + lam + BigFloat(3) / 2);
}

// int_{B^n} x^alpha (1 - |x|^2)^lambda dx, zero unless every alpha_i is even
BigFloat MomentOracle::unit_ball_jacobi(const std::vector<int>& alpha, double lambda) const {
    int half_sum = 0;
    BigFloat num = bf_gamma(BigFloat(lambda) + 1);
    for (int a : alpha) {
        if (a % 2 != 0) return BigFloat(0);
        num *= bf_gamma(BigFloat(a / 2) + BigFloat(1) / 2);
        half_sum += a / 2;
    }
    const int n = domain_.n_vars();
    return num / bf_gamma(BigFloat(half_sum) + BigFloat(n) / 2 + BigFloat(lambda) + 1);
}

// Lebesgue moments of a translated/scaled ball via binomial expansion over
// unit-ball moments.
BigFloat MomentOracle::shifted_ball(const std::vector<int>& alpha) const {
    const int n = domain_.n_vars();
    const Eigen::VectorXd& c = domain_.ball_center();
    const BigFloat R(domain_.ball_radius());

    std::vector<std::vector<BigFloat>> binom_terms(n);
    for (int i = 0; i < n; ++i) {
        // (c_i + R u)^{a_i} coefficients of u^b
        const int a = alpha[i];
        binom_terms[i].resize(a + 1);
        BigFloat choose = 1;
        for (int b = 0; b <= a; ++b) {
            if (b > 0) choose = choose * (a - b + 1) / b;
            binom_terms[i][b] = choose * mp::pow(BigFloat(c[i]), a - b) * mp::pow(R, b);
        }
    }

    BigFloat total = 0;
    std::vector<int> beta(n, 0);
    while (true) {
        BigFloat coef = 1;
        for (int i = 0; i < n; ++i) coef *= binom_terms[i][beta[i]];
        if (!coef.is_zero()) total += coef * unit_ball_jacobi(beta, 0.0);
        int d = 0;
        while (d < n && ++beta[d] > alpha[d]) beta[d++] = 0;
        if (d == n) break;
    }
    return total * mp::pow(R, n);
}

// Builds the full moment table of a simplex/polygon up to `degree` by
// scanning all x^alpha as products of powers of the linear vertex-map
// forms, integrating each against the standard-simplex Dirichlet moments.
void MomentOracle::ensure_vertex_tables(int degree) const {
    if (degree <= table_degree_) return;
    const int n = domain_.n_vars();
    const int target = std::max(degree, table_degree_ + 4);
    cache_.clear();

    std::vector<DomainSpec> pieces;
    if (domain_.kind() == DomainKind::Simplex)
        pieces.push_back(domain_);
    else
        pieces = triangulate(domain_);

    // Dirichlet moments of the standard simplex: u^gamma integrates to
    // (prod gamma_i!) / (|gamma| + n)!.
    std::vector<BigFloat> factorial(target + n + 1);
    factorial[0] = 1;
    for (int i = 1; i <= target + n; ++i) factorial[i] = factorial[i - 1] * i;
    auto dirichlet = [&](const std::vector<int>& gamma) {
        BigFloat num = 1;
        int total = 0;
        for (int g : gamma) {
            num *= factorial[g];
            total += g;
        }
        return num / factorial[total + n];
    };

    for (const auto& piece : pieces) {
        const auto& verts = piece.vertices();
        Eigen::MatrixXd V(n, n);
        for (int j = 0; j < n; ++j) V.col(j) = verts[j + 1] - verts[0];
        BigFloat det;
        if (n == 1)
            det = BigFloat(V(0, 0));
        else if (n == 2)
            det = BigFloat(V(0, 0)) * BigFloat(V(1, 1)) - BigFloat(V(0, 1)) * BigFloat(V(1, 0));
        else
            det = BigFloat(V.determinant());
        BigFloat jac = mp::abs(det);

        // Linear forms x_i = l_i(u) in exact lifted coordinates.
        std::vector<BigFloat> lin0(n);
        std::vector<std::vector<BigFloat>> linv(n, std::vector<BigFloat>(n));
        for (int i = 0; i < n; ++i) {
            lin0[i] = BigFloat(verts[0][i]);
            for (int j = 0; j < n; ++j) linv[i][j] = BigFloat(V(i, j));
        }

        std::vector<int> alpha(n, 0);
        auto integrate = [&](const UPoly& poly) {
            BigFloat sum = 0;
            std::vector<int> gamma(n);
            for (const auto& [key, coef] : poly) {
                for (int j = 0; j < n; ++j) gamma[j] = int((key >> (8 * j)) & 0xff);
                sum += coef * dirichlet(gamma);
            }
            cache_[pack_exponents(alpha)] += jac * sum;
        };

        // Depth-first over alpha, multiplying in one linear factor per step.
        auto scan = [&](auto&& self, int dim, int budget, const UPoly& prefix) -> void {
            if (dim == n) {
                integrate(prefix);
                return;
            }
            UPoly cur = prefix;
            for (int e = 0; e <= budget; ++e) {
                if (e > 0) cur = mul_linear(cur, lin0[dim], linv[dim]);
                alpha[dim] = e;
                self(self, dim + 1, budget - e, cur);
            }
            alpha[dim] = 0;
        };
        UPoly one;
        one[0] = BigFloat(1);
        scan(scan, 0, target, one);
    }
    table_degree_ = target;
}

NormalizationConstant normalization_constant(int n, double lambda) {
    if (n < 1) throw std::invalid_argument("normalization_constant: n must be >= 1");
    if (lambda <= -1.0) throw std::invalid_argument("normalization_constant: lambda must be > -1");
    PrecisionScope scope(256);
    BigFloat value = mp::pow(bf_pi(), BigFloat(n) / 2) * bf_gamma(BigFloat(lambda) + 1) /
                     bf_gamma(BigFloat(lambda) + 1 + BigFloat(n) / 2);
    return {n, lambda, value.convert_to<double>()};
}

BallIntervalPair reduce_ball_to_interval(int n, double lambda, int k) {
    if (n < 2) throw std::invalid_argument("reduce_ball_to_interval: n must be >= 2");
    if (k < 0) throw std::invalid_argument("reduce_ball_to_interval: k must be >= 0");

    MomentOracle ball(DomainSpec::ball(n), MeasureSpec::ball_jacobi(lambda));
    std::vector<int> alpha(n, 0);
    alpha[0] = k;
    const double lhs = ball.moment(alpha);

    MomentOracle interval(DomainSpec::box(1), MeasureSpec::box_jacobi(lambda + (n - 1) / 2.0));
    PrecisionScope scope(256);
    BigFloat c = mp::pow(bf_pi(), BigFloat(n - 1) / 2) * bf_gamma(BigFloat(lambda) + 1) /
                 bf_gamma(BigFloat(lambda) + 1 + BigFloat(n - 1) / 2);
    const double rhs = (c * interval.moment_big({k})).convert_to<double>();
    return {lhs, rhs};
}

}  // namespace sosbound
