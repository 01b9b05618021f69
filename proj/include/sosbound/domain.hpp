#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sosbound {

enum class DomainKind { Box, Ball, Simplex, Polygon };

// Compact-set descriptor. Box is the cube [-1,1]^n. Ball defaults to the
// unit ball; a center/radius is carried so that affine images under
// scaled-orthogonal maps (as produced by recentring) remain representable.
// Simplex holds n+1 affinely independent vertices; Polygon is a 2-D convex
// polygon with vertices in counterclockwise order.
class DomainSpec {
public:
    static DomainSpec box(int n);
    static DomainSpec ball(int n);
    static DomainSpec ball(const Eigen::VectorXd& center, double radius);
    static DomainSpec simplex(std::vector<Eigen::VectorXd> vertices);
    static DomainSpec polygon(std::vector<Eigen::VectorXd> vertices);

    DomainKind kind() const { return kind_; }
    int n_vars() const { return n_; }
    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    const Eigen::VectorXd& ball_center() const { return ball_center_; }
    double ball_radius() const { return ball_radius_; }
    bool is_unit_ball() const;

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
    double volume() const;
    std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box() const;
    // Max distance from `a` to any point of the set.
    double farthest_distance(const Eigen::VectorXd& a) const;

    std::string describe() const;

    nlohmann::json to_json() const;
    static DomainSpec from_json(const nlohmann::json& j);

private:
    DomainSpec() = default;

    DomainKind kind_ = DomainKind::Box;
    int n_ = 1;
    std::vector<Eigen::VectorXd> vertices_;  // simplex / polygon
    Eigen::VectorXd ball_center_;
    double ball_radius_ = 1.0;
};

enum class MeasureKind { Lebesgue, BoxJacobi, BallJacobi };

struct MeasureSpec {
    MeasureKind kind = MeasureKind::Lebesgue;
    double lambda = 0.0;  // weight exponent, > -1

    static MeasureSpec lebesgue() { return {MeasureKind::Lebesgue, 0.0}; }
    static MeasureSpec box_jacobi(double lambda);
    static MeasureSpec ball_jacobi(double lambda);
    static MeasureSpec chebyshev() { return box_jacobi(-0.5); }

    std::string describe() const;
};

bool measure_compatible(const DomainSpec& d, const MeasureSpec& m);

// Interior-cone constants (epsilon_K, eta_K):
//   vol(B_delta(x) ∩ K) >= eta_K * delta^n * vol(B^n)  for all x in K,
//   0 < delta <= epsilon_K.
struct ConeConstants {
    double epsilon_k = 1.0;
    double eta_k = 0.5;
};

// Valid cone constants for the set pre-scaled into the unit ball. Boxes are
// treated as their 1/sqrt(n)-scaled copies. Supports Ball (n <= 3), Box,
// and 1-D/2-D Simplex/Polygon.
ConeConstants cone_constants(const DomainSpec& d);

// Image set {Ux + c : x in K}. Simplex/Polygon map by vertices; a 2-D box
// maps to a polygon and a 1-D box to a segment; balls require a
// scaled-orthogonal U. Other images raise "unsupported image kind".
DomainSpec affine_map(const DomainSpec& d, const Eigen::MatrixXd& U, const Eigen::VectorXd& c);

// Fan triangulation of a convex polygon from vertex 0. Triangle areas are
// positive and sum to the polygon area.
std::vector<DomainSpec> triangulate(const DomainSpec& d);

}  // namespace sosbound
