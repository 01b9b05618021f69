#include "sosbound/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sosbound {

namespace {

double cross2(const Eigen::VectorXd& o, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double shoelace_area(const std::vector<Eigen::VectorXd>& v) {
    double s = 0.0;
    const size_t m = v.size();
    for (size_t i = 0; i < m; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % m];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * s;
}

double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

Eigen::MatrixXd simplex_edge_matrix(const std::vector<Eigen::VectorXd>& v) {
    const int n = static_cast<int>(v.size()) - 1;
    Eigen::MatrixXd V(n, n);
    for (int j = 0; j < n; ++j) V.col(j) = v[j + 1] - v[0];
    return V;
}

}  // namespace

DomainSpec DomainSpec::box(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("DomainSpec::box: n out of range");
    DomainSpec d;
    d.kind_ = DomainKind::Box;
    d.n_ = n;
    return d;
}

DomainSpec DomainSpec::ball(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("DomainSpec::ball: n out of range");
    return ball(Eigen::VectorXd::Zero(n), 1.0);
}

DomainSpec DomainSpec::ball(const Eigen::VectorXd& center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("DomainSpec::ball: radius must be positive");
    DomainSpec d;
    d.kind_ = DomainKind::Ball;
    d.n_ = static_cast<int>(center.size());
    d.ball_center_ = center;
    d.ball_radius_ = radius;
    return d;
}

DomainSpec DomainSpec::simplex(std::vector<Eigen::VectorXd> vertices) {
    if (vertices.empty()) throw std::invalid_argument("DomainSpec::simplex: empty vertex list");
    const int n = static_cast<int>(vertices[0].size());
    if (static_cast<int>(vertices.size()) != n + 1)
        throw std::invalid_argument("DomainSpec::simplex: need n+1 vertices");
    for (const auto& v : vertices)
        if (v.size() != n) throw std::invalid_argument("DomainSpec::simplex: mixed dimensions");
    DomainSpec d;
    d.kind_ = DomainKind::Simplex;
    d.n_ = n;
    d.vertices_ = std::move(vertices);
    Eigen::MatrixXd V = simplex_edge_matrix(d.vertices_);
    if (std::abs(V.determinant()) <= 1e-10)
        throw std::invalid_argument("DomainSpec::simplex: vertices affinely dependent");
    return d;
}

DomainSpec DomainSpec::polygon(std::vector<Eigen::VectorXd> vertices) {
    if (vertices.size() < 3) throw std::invalid_argument("DomainSpec::polygon: need >= 3 vertices");
    for (const auto& v : vertices)
        if (v.size() != 2) throw std::invalid_argument("DomainSpec::polygon: vertices must be 2-D");
    if (shoelace_area(vertices) <= 0.0)
        throw std::invalid_argument("DomainSpec::polygon: vertices must be in CCW order");
    const size_t m = vertices.size();
    for (size_t i = 0; i < m; ++i) {
        double c = cross2(vertices[i], vertices[(i + 1) % m], vertices[(i + 2) % m]);
        if (c < -1e-12) throw std::invalid_argument("DomainSpec::polygon: not convex");
    }
    DomainSpec d;
    d.kind_ = DomainKind::Polygon;
    d.n_ = 2;
    d.vertices_ = std::move(vertices);
    return d;
}

bool DomainSpec::is_unit_ball() const {
    return kind_ == DomainKind::Ball && ball_radius_ == 1.0 && ball_center_.isZero(0.0);
}

bool DomainSpec::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != n_) return false;
    switch (kind_) {
        case DomainKind::Box:
            return x.cwiseAbs().maxCoeff() <= 1.0 + tol;
        case DomainKind::Ball:
            return (x - ball_center_).norm() <= ball_radius_ + tol;
        case DomainKind::Simplex: {
            Eigen::MatrixXd V = simplex_edge_matrix(vertices_);
            Eigen::VectorXd u = V.partialPivLu().solve(x - vertices_[0]);
            if (u.minCoeff() < -tol) return false;
            return u.sum() <= 1.0 + tol;
        }
        case DomainKind::Polygon: {
            const size_t m = vertices_.size();
            for (size_t i = 0; i < m; ++i) {
                const auto& p = vertices_[i];
                const auto& q = vertices_[(i + 1) % m];
                double edge = (q - p).norm();
                if (cross2(p, q, x) < -tol * std::max(1.0, edge)) return false;
            }
            return true;
        }
    }
    return false;
}

double DomainSpec::volume() const {
    switch (kind_) {
        case DomainKind::Box:
            return std::pow(2.0, n_);
        case DomainKind::Ball:
            return unit_ball_volume(n_) * std::pow(ball_radius_, n_);
        case DomainKind::Simplex: {
            Eigen::MatrixXd V = simplex_edge_matrix(vertices_);
            double f = 1.0;
            for (int i = 2; i <= n_; ++i) f *= i;
            return std::abs(V.determinant()) / f;
        }
        case DomainKind::Polygon:
            return shoelace_area(vertices_);
    }
    return 0.0;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> DomainSpec::bounding_box() const {
    Eigen::VectorXd lo(n_), hi(n_);
    switch (kind_) {
        case DomainKind::Box:
            lo.setConstant(-1.0);
            hi.setConstant(1.0);
            break;
        case DomainKind::Ball:
            lo = ball_center_.array() - ball_radius_;
            hi = ball_center_.array() + ball_radius_;
            break;
        default:
            lo = vertices_[0];
            hi = vertices_[0];
            for (const auto& v : vertices_) {
                lo = lo.cwiseMin(v);
                hi = hi.cwiseMax(v);
            }
            break;
    }
    return {lo, hi};
}

double DomainSpec::farthest_distance(const Eigen::VectorXd& a) const {
    switch (kind_) {
        case DomainKind::Box: {
            double s = 0.0;
            for (int i = 0; i < n_; ++i) {
                double d = std::max(std::abs(a[i] - 1.0), std::abs(a[i] + 1.0));
                s += d * d;
            }
            return std::sqrt(s);
        }
        case DomainKind::Ball:
            return (a - ball_center_).norm() + ball_radius_;
        default: {
            double best = 0.0;
            for (const auto& v : vertices_) best = std::max(best, (v - a).norm());
            return best;
        }
    }
}

std::string DomainSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case DomainKind::Box: os << "box" << n_; break;
        case DomainKind::Ball:
            os << "ball" << n_;
            if (!is_unit_ball()) os << "(r=" << ball_radius_ << ")";
            break;
        case DomainKind::Simplex: os << "simplex" << n_; break;
        case DomainKind::Polygon: os << "polygon[" << vertices_.size() << "]"; break;
    }
    return os.str();
}

nlohmann::json DomainSpec::to_json() const {
    nlohmann::json j;
    switch (kind_) {
        case DomainKind::Box:
            j["kind"] = "box";
            j["n"] = n_;
            break;
        case DomainKind::Ball:
            j["kind"] = "ball";
            j["n"] = n_;
            if (!is_unit_ball()) {
                j["center"] = std::vector<double>(ball_center_.data(), ball_center_.data() + n_);
                j["radius"] = ball_radius_;
            }
            break;
        case DomainKind::Simplex:
        case DomainKind::Polygon: {
            j["kind"] = kind_ == DomainKind::Simplex ? "simplex" : "polygon";
            auto arr = nlohmann::json::array();
            for (const auto& v : vertices_)
                arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
            j["vertices"] = arr;
            break;
        }
    }
    return j;
}

DomainSpec DomainSpec::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "box") return box(j.at("n").get<int>());
    if (kind == "ball") {
        if (j.contains("center")) {
            auto c = j.at("center").get<std::vector<double>>();
            return ball(Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()),
                        j.at("radius").get<double>());
        }
        return ball(j.at("n").get<int>());
    }
    if (kind == "simplex" || kind == "polygon") {
        std::vector<Eigen::VectorXd> verts;
        for (const auto& row : j.at("vertices")) {
            auto v = row.get<std::vector<double>>();
            verts.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
        }
        return kind == "simplex" ? simplex(std::move(verts)) : polygon(std::move(verts));
    }
    throw std::invalid_argument("DomainSpec::from_json: unknown kind '" + kind + "'");
}

MeasureSpec MeasureSpec::box_jacobi(double lambda) {
    if (lambda <= -1.0) throw std::invalid_argument("MeasureSpec: lambda must be > -1");
    return {MeasureKind::BoxJacobi, lambda};
}

MeasureSpec MeasureSpec::ball_jacobi(double lambda) {
    if (lambda <= -1.0) throw std::invalid_argument("MeasureSpec: lambda must be > -1");
    return {MeasureKind::BallJacobi, lambda};
}

std::string MeasureSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
        case MeasureKind::Lebesgue: os << "lebesgue"; break;
        case MeasureKind::BoxJacobi:
            os << (lambda == -0.5 ? "chebyshev" : "box-jacobi");
            if (lambda != -0.5) os << "(" << lambda << ")";
            break;
        case MeasureKind::BallJacobi: os << "ball-jacobi(" << lambda << ")"; break;
    }
    return os.str();
}

bool measure_compatible(const DomainSpec& d, const MeasureSpec& m) {
    switch (m.kind) {
        case MeasureKind::Lebesgue: return true;
        case MeasureKind::BoxJacobi: return d.kind() == DomainKind::Box;
        case MeasureKind::BallJacobi: return d.kind() == DomainKind::Ball && d.is_unit_ball();
    }
    return false;
}

namespace {

// Fraction of the ball covered by the set at a worst-case boundary point,
// from the inscribed-cone geometry. For n >= 2, the small-delta vertex
// fraction is not valid up to delta = epsilon (the boundary curves away),
// so a cone of half-angle pi/3 is used: every ray within pi/3 of the
// inward normal stays inside a ball of diameter 2cos(pi/3) = 1.
double ball_corner_fraction(int n) {
    switch (n) {
        case 1: return 0.5;
        case 2: return 1.0 / 3.0;            // sector fraction (pi/3)/pi
        case 3: return 0.25;                 // spherical cap (1-cos(pi/3))/2
        default:
            throw std::invalid_argument("cone_constants: ball supported for n <= 3");
    }
}

ConeConstants polygon_cone_constants(const std::vector<Eigen::VectorXd>& v) {
    const size_t m = v.size();
    double min_angle = std::numbers::pi;
    double min_edge = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i) {
        const auto& prev = v[(i + m - 1) % m];
        const auto& cur = v[i];
        const auto& next = v[(i + 1) % m];
        Eigen::VectorXd e1 = prev - cur, e2 = next - cur;
        double ang = std::acos(std::clamp(e1.dot(e2) / (e1.norm() * e2.norm()), -1.0, 1.0));
        min_angle = std::min(min_angle, ang);
        min_edge = std::min(min_edge, e2.norm());
    }
    // Inradius from the incenter (triangle) or centroid (general convex),
    // as min distance to an edge.
    Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
    if (m == 3) {
        double a = (v[2] - v[1]).norm(), b = (v[0] - v[2]).norm(), c = (v[1] - v[0]).norm();
        center = (a * v[0] + b * v[1] + c * v[2]) / (a + b + c);
    } else {
        for (const auto& p : v) center += p;
        center /= double(m);
    }
    double inradius = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % m];
        Eigen::VectorXd e = q - p;
        double dist = std::abs(cross2(p, q, center)) / e.norm();
        inradius = std::min(inradius, dist);
    }
    ConeConstants cc;
    // The vertex wedge is fully inside only out to the adjacent edge length.
    cc.epsilon_k = std::min({inradius, min_edge, 1.0});
    cc.eta_k = min_angle / (2.0 * std::numbers::pi);
    return cc;
}

}  // namespace

ConeConstants cone_constants(const DomainSpec& d) {
    switch (d.kind()) {
        case DomainKind::Ball:
            return {std::min(d.ball_radius(), 1.0), ball_corner_fraction(d.n_vars())};
        case DomainKind::Box:
            // Constants for the copy scaled by 1/sqrt(n) into the unit ball.
            return {1.0 / std::sqrt(double(d.n_vars())), std::pow(0.5, d.n_vars())};
        case DomainKind::Simplex:
            if (d.n_vars() == 1) {
                double len = std::abs(d.vertices()[1][0] - d.vertices()[0][0]);
                return {std::min(len / 2.0, 1.0), 0.5};
            }
            if (d.n_vars() == 2) return polygon_cone_constants(d.vertices());
            throw std::invalid_argument("cone_constants: simplex supported for n <= 2");
        case DomainKind::Polygon:
            return polygon_cone_constants(d.vertices());
    }
    throw std::logic_error("cone_constants: unreachable");
}

DomainSpec affine_map(const DomainSpec& d, const Eigen::MatrixXd& U, const Eigen::VectorXd& c) {
    const int n = d.n_vars();
    if (U.rows() != n || U.cols() != n || c.size() != n)
        throw std::invalid_argument("affine_map: shape mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(U);
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= 1e-12)
        throw std::invalid_argument("affine_map: singular map");

    auto map_vertices = [&](const std::vector<Eigen::VectorXd>& vs) {
        std::vector<Eigen::VectorXd> out;
        out.reserve(vs.size());
        for (const auto& v : vs) out.push_back(U * v + c);
        return out;
    };

    switch (d.kind()) {
        case DomainKind::Simplex:
            return DomainSpec::simplex(map_vertices(d.vertices()));
        case DomainKind::Polygon: {
            auto verts = map_vertices(d.vertices());
            if (U.determinant() < 0.0) std::reverse(verts.begin(), verts.end());
            return DomainSpec::polygon(std::move(verts));
        }
        case DomainKind::Box: {
            if (n == 1) {
                std::vector<Eigen::VectorXd> ends{U * Eigen::VectorXd::Constant(1, -1.0) + c,
                                                  U * Eigen::VectorXd::Constant(1, 1.0) + c};
                if (ends[0][0] > ends[1][0]) std::swap(ends[0], ends[1]);
                return DomainSpec::simplex(std::move(ends));
            }
            if (n == 2) {
                std::vector<Eigen::VectorXd> corners;
                for (auto [x, y] : {std::pair{-1.0, -1.0}, {1.0, -1.0}, {1.0, 1.0}, {-1.0, 1.0}})
                    corners.push_back(U * Eigen::Vector2d(x, y) + c);
                if (U.determinant() < 0.0) std::reverse(corners.begin(), corners.end());
                return DomainSpec::polygon(std::move(corners));
            }
            if (U.isIdentity(0.0) && c.isZero(0.0)) return d;
            throw std::invalid_argument("affine_map: unsupported image kind (box, n >= 3)");
        }
        case DomainKind::Ball: {
            Eigen::MatrixXd G = U.transpose() * U;
            double s2 = G.trace() / n;
            if (!(G - s2 * Eigen::MatrixXd::Identity(n, n)).isZero(1e-10 * std::max(1.0, s2)))
                throw std::invalid_argument("affine_map: unsupported image kind (ball under non-conformal map)");
            double s = std::sqrt(s2);
            return DomainSpec::ball(U * d.ball_center() + c, s * d.ball_radius());
        }
    }
    throw std::logic_error("affine_map: unreachable");
}

std::vector<DomainSpec> triangulate(const DomainSpec& d) {
    if (d.kind() != DomainKind::Polygon)
        throw std::invalid_argument("triangulate: polygon input required");
    const auto& v = d.vertices();
    std::vector<DomainSpec> tris;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
        double area2 = cross2(v[0], v[i], v[i + 1]);
        if (area2 <= 1e-14)
            throw std::invalid_argument("triangulate: degenerate (collinear) triangle");
        tris.push_back(DomainSpec::simplex({v[0], v[i], v[i + 1]}));
    }
    return tris;
}

}  // namespace sosbound
