#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sosbound/domain.hpp"
#include "sosbound/polynomial.hpp"

namespace sosbound {

struct RegistryEntry {
    std::string name;
    Polynomial f;
    double f_min;
    std::vector<Eigen::VectorXd> minimizers;
};

// The benchmark functions on [-1,1]^2 (linear, quadratic, booth, matyas,
// camel, motzkin) plus 1-D companions (linear1, quartic1) and constant5.
const std::vector<RegistryEntry>& function_registry();
const RegistryEntry& function_by_name(const std::string& name);
bool function_exists(const std::string& name);

// box1, box2, ball2, simplex2 (standard 2-simplex), octagon (regular, inscribed
// in the unit circle), interval01.
DomainSpec domain_by_name(const std::string& name);
bool domain_exists(const std::string& name);
std::vector<std::string> domain_names();

// The regular octagon conv{(+-1,0),(0,+-1),(+-s,+-s)}, s = sqrt(2)/2, CCW.
std::vector<Eigen::VectorXd> octagon_vertices();

}  // namespace sosbound
