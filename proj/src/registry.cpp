#include "sosbound/registry.hpp"

#include <cmath>
#include <stdexcept>

namespace sosbound {

namespace {

Eigen::VectorXd pt(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

Eigen::VectorXd pt(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

Polynomial poly2(std::initializer_list<std::tuple<int, int, double>> terms) {
    Polynomial p(2);
    for (const auto& [e1, e2, c] : terms) p.add_term({e1, e2}, c);
    return p;
}

std::vector<RegistryEntry> build_functions() {
    std::vector<RegistryEntry> reg;

    reg.push_back({"linear", poly2({{1, 0, 1.0}}), -1.0, {pt(-1.0, 0.0)}});

    reg.push_back({"quadratic", poly2({{1, 0, 1.0}, {0, 2, 1.0}}), -1.0, {pt(-1.0, 0.0)}});

    // (10x1 + 20x2 - 7)^2 + (20x1 + 10x2 - 5)^2
    Polynomial booth = (poly2({{1, 0, 10.0}, {0, 1, 20.0}, {0, 0, -7.0}})).pow(2) +
                       (poly2({{1, 0, 20.0}, {0, 1, 10.0}, {0, 0, -5.0}})).pow(2);
    reg.push_back({"booth", booth, 0.0, {pt(0.1, 0.3)}});

    reg.push_back({"matyas", poly2({{2, 0, 26.0}, {0, 2, 26.0}, {1, 1, -48.0}}), 0.0,
                   {pt(0.0, 0.0)}});

    reg.push_back({"camel",
                   poly2({{2, 0, 50.0},
                          {4, 0, -2625.0 / 4.0},
                          {6, 0, 15625.0 / 6.0},
                          {1, 1, 25.0},
                          {0, 2, 25.0}}),
                   0.0,
                   {pt(0.0, 0.0)}});

    reg.push_back({"motzkin",
                   poly2({{4, 2, 64.0}, {2, 4, 64.0}, {2, 2, -48.0}, {0, 0, 1.0}}), 0.0,
                   {pt(0.5, 0.5), pt(0.5, -0.5), pt(-0.5, 0.5), pt(-0.5, -0.5)}});

    reg.push_back({"constant5", Polynomial::constant(2, 5.0), 5.0, {pt(0.0, 0.0)}});

    Polynomial linear1 = Polynomial::variable(1, 0);
    reg.push_back({"linear1", linear1, -1.0, {pt(-1.0)}});

    Polynomial quartic1 = Polynomial::monomial(1, {4}, 1.0);
    reg.push_back({"quartic1", quartic1, 0.0, {pt(0.0)}});

    return reg;
}

}  // namespace

const std::vector<RegistryEntry>& function_registry() {
    static const std::vector<RegistryEntry> reg = build_functions();
    return reg;
}

const RegistryEntry& function_by_name(const std::string& name) {
    for (const auto& e : function_registry())
        if (e.name == name) return e;
    throw std::invalid_argument("unknown function '" + name + "'");
}

bool function_exists(const std::string& name) {
    for (const auto& e : function_registry())
        if (e.name == name) return true;
    return false;
}

std::vector<Eigen::VectorXd> octagon_vertices() {
    const double s = std::sqrt(2.0) / 2.0;
    return {pt(1, 0), pt(s, s), pt(0, 1), pt(-s, s), pt(-1, 0), pt(-s, -s), pt(0, -1), pt(s, -s)};
}

DomainSpec domain_by_name(const std::string& name) {
    if (name == "box1") return DomainSpec::box(1);
    if (name == "box2") return DomainSpec::box(2);
    if (name == "ball2") return DomainSpec::ball(2);
    if (name == "simplex2") return DomainSpec::simplex({pt(0, 0), pt(1, 0), pt(0, 1)});
    if (name == "octagon") return DomainSpec::polygon(octagon_vertices());
    if (name == "interval01") return DomainSpec::simplex({pt(0.0), pt(1.0)});
    throw std::invalid_argument("unknown domain '" + name + "'");
}

bool domain_exists(const std::string& name) {
    try {
        domain_by_name(name);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

std::vector<std::string> domain_names() {
    return {"box1", "box2", "ball2", "simplex2", "octagon", "interval01"};
}

}  // namespace sosbound
