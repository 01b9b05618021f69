#include "sosbound/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sosbound/domain.hpp"

namespace sosbound {

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    while (k > 0) {
        if (k & 1) r *= x;
        x *= x;
        k >>= 1;
    }
    return r;
}

int total_degree(const Polynomial::Exponents& e) {
    int d = 0;
    for (int v : e) d += v;
    return d;
}

}  // namespace

Polynomial::Polynomial(int n_vars) : n_vars_(n_vars) {
    if (n_vars < 1 || n_vars > 8)
        throw std::invalid_argument("Polynomial: n_vars must be in [1, 8]");
}

Polynomial Polynomial::constant(int n_vars, double c) {
    Polynomial p(n_vars);
    p.add_term(Exponents(n_vars, 0), c);
    return p;
}

Polynomial Polynomial::variable(int n_vars, int index) {
    if (index < 0 || index >= n_vars)
        throw std::invalid_argument("Polynomial::variable: index out of range");
    Exponents e(n_vars, 0);
    e[index] = 1;
    return monomial(n_vars, e, 1.0);
}

Polynomial Polynomial::monomial(int n_vars, const Exponents& exps, double coef) {
    Polynomial p(n_vars);
    p.add_term(exps, coef);
    return p;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

double Polynomial::coefficient(const Exponents& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponents& exps, double coef) {
    if (static_cast<int>(exps.size()) != n_vars_)
        throw std::invalid_argument("Polynomial::add_term: exponent length mismatch");
    for (int e : exps)
        if (e < 0) throw std::invalid_argument("Polynomial::add_term: negative exponent");
    auto it = terms_.find(exps);
    double v = (it == terms_.end() ? 0.0 : it->second) + coef;
    if (v == 0.0) {
        if (it != terms_.end()) terms_.erase(it);
    } else {
        terms_[exps] = v;
    }
}

double Polynomial::evaluate(const Eigen::VectorXd& x) const {
    if (x.size() != n_vars_)
        throw std::invalid_argument("Polynomial::evaluate: dimension mismatch");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int i = 0; i < n_vars_; ++i)
            if (e[i] > 0) t *= ipow(x[i], e[i]);
        sum += t;
    }
    return sum;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= n_vars_)
        throw std::invalid_argument("Polynomial::derivative: index out of range");
    Polynomial d(n_vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents de = e;
        de[var] -= 1;
        d.add_term(de, c * e[var]);
    }
    return d;
}

std::vector<Polynomial> Polynomial::gradient() const {
    std::vector<Polynomial> g;
    g.reserve(n_vars_);
    for (int i = 0; i < n_vars_; ++i) g.push_back(derivative(i));
    return g;
}

std::vector<std::vector<Polynomial>> Polynomial::hessian() const {
    std::vector<std::vector<Polynomial>> h;
    h.reserve(n_vars_);
    for (int i = 0; i < n_vars_; ++i) {
        std::vector<Polynomial> row;
        row.reserve(n_vars_);
        Polynomial di = derivative(i);
        for (int j = 0; j < n_vars_; ++j) row.push_back(di.derivative(j));
        h.push_back(std::move(row));
    }
    return h;
}

Eigen::VectorXd Polynomial::gradient_at(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(n_vars_);
    for (int i = 0; i < n_vars_; ++i) g[i] = derivative(i).evaluate(x);
    return g;
}

Eigen::MatrixXd Polynomial::hessian_at(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd h(n_vars_, n_vars_);
    auto hp = hessian();
    for (int i = 0; i < n_vars_; ++i)
        for (int j = 0; j < n_vars_; ++j) h(i, j) = hp[i][j].evaluate(x);
    return h;
}

Polynomial Polynomial::compose_affine(const Eigen::MatrixXd& U, const Eigen::VectorXd& c) const {
    if (U.rows() != n_vars_ || U.cols() != n_vars_ || c.size() != n_vars_)
        throw std::invalid_argument("compose_affine: shape mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(U);
    double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (min_pivot <= 1e-12)
        throw std::invalid_argument("compose_affine: singular map (pivot below 1e-12)");

    // x_i -> row_i(U) . x + c_i as degree-1 polynomials, substituted per term.
    std::vector<Polynomial> sub;
    sub.reserve(n_vars_);
    for (int i = 0; i < n_vars_; ++i) {
        Polynomial li = Polynomial::constant(n_vars_, c[i]);
        for (int j = 0; j < n_vars_; ++j)
            if (U(i, j) != 0.0) li.add_term(Polynomial::variable(n_vars_, j).terms().begin()->first, U(i, j));
        sub.push_back(std::move(li));
    }

    // Cache powers of each substituted variable up to its maximum exponent.
    std::vector<int> max_exp(n_vars_, 0);
    for (const auto& [e, coef] : terms_)
        for (int i = 0; i < n_vars_; ++i) max_exp[i] = std::max(max_exp[i], e[i]);
    std::vector<std::vector<Polynomial>> powers(n_vars_);
    for (int i = 0; i < n_vars_; ++i) {
        powers[i].push_back(Polynomial::constant(n_vars_, 1.0));
        for (int k = 1; k <= max_exp[i]; ++k) powers[i].push_back(powers[i].back() * sub[i]);
    }

    Polynomial out(n_vars_);
    for (const auto& [e, coef] : terms_) {
        Polynomial t = Polynomial::constant(n_vars_, coef);
        for (int i = 0; i < n_vars_; ++i)
            if (e[i] > 0) t = t * powers[i][e[i]];
        out = out + t;
    }
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    if (rhs.n_vars_ != n_vars_) throw std::invalid_argument("Polynomial: n_vars mismatch");
    Polynomial out = *this;
    for (const auto& [e, c] : rhs.terms_) out.add_term(e, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    if (rhs.n_vars_ != n_vars_) throw std::invalid_argument("Polynomial: n_vars mismatch");
    Polynomial out = *this;
    for (const auto& [e, c] : rhs.terms_) out.add_term(e, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (rhs.n_vars_ != n_vars_) throw std::invalid_argument("Polynomial: n_vars mismatch");
    Polynomial out(n_vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            Exponents e(n_vars_);
            for (int i = 0; i < n_vars_; ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::operator*(double s) const {
    Polynomial out(n_vars_);
    if (s == 0.0) return out;
    for (const auto& [e, c] : terms_) out.add_term(e, c * s);
    return out;
}

Polynomial Polynomial::operator-() const { return *this * -1.0; }

Polynomial Polynomial::pow(int k) const {
    if (k < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
    Polynomial out = Polynomial::constant(n_vars_, 1.0);
    Polynomial base = *this;
    while (k > 0) {
        if (k & 1) out = out * base;
        base = base * base;
        k >>= 1;
    }
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (int i = 0; i < n_vars_; ++i)
            if (e[i] > 0) os << "*x" << (i + 1) << "^" << e[i];
    }
    return os.str();
}

nlohmann::json Polynomial::to_json() const {
    nlohmann::json j;
    j["n"] = n_vars_;
    j["terms"] = nlohmann::json::array();
    for (const auto& [e, c] : terms_)
        j["terms"].push_back({{"exp", e}, {"coef", c}});
    return j;
}

Polynomial Polynomial::from_json(const nlohmann::json& j) {
    Polynomial p(j.at("n").get<int>());
    for (const auto& t : j.at("terms"))
        p.add_term(t.at("exp").get<Exponents>(), t.at("coef").get<double>());
    return p;
}

SmoothnessConstants smoothness_constants(const Polynomial& p, const DomainSpec& domain,
                                         int grid_density) {
    if (grid_density < 2)
        throw std::invalid_argument("smoothness_constants: grid_density must be >= 2");
    if (p.n_vars() != domain.n_vars())
        throw std::invalid_argument("smoothness_constants: dimension mismatch");

    const int n = p.n_vars();
    auto [lo, hi] = domain.bounding_box();
    auto grad = p.gradient();
    auto hess = p.hessian();

    SmoothnessConstants out;
    std::vector<int> idx(n, 0);
    Eigen::VectorXd x(n);
    Eigen::VectorXd g(n);
    Eigen::MatrixXd h(n, n);
    while (true) {
        for (int i = 0; i < n; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / double(grid_density - 1);
        if (domain.contains(x)) {
            for (int i = 0; i < n; ++i) g[i] = grad[i].evaluate(x);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) h(i, j) = hess[i][j].evaluate(x);
            out.beta = std::max(out.beta, g.norm());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
            out.gamma = std::max(out.gamma, 0.5 * es.eigenvalues().cwiseAbs().maxCoeff());
        }
        int d = 0;
        while (d < n && ++idx[d] == grid_density) idx[d++] = 0;
        if (d == n) break;
    }
    return out;
}

}  // namespace sosbound
