#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "dfh/mesh.hpp"

namespace dfh {

/// Quadrature on the reference triangle {x, y >= 0, x + y <= 1}.
/// Points are barycentric coordinates; weights sum to 1/2.
struct TriangleRule {
    int degree{0};
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

/// Quadrature on [0, 1]; weights sum to 1.
struct EdgeRule {
    int degree{0};
    std::vector<double> points;
    std::vector<double> weights;
};

inline constexpr int kMaxQuadratureDegree = 20;
inline constexpr int kDefaultQuadratureDegree = 19;

/// Rule exact for polynomials of total degree <= `degree` (1..20).
/// Built as a collapsed product of Gauss-Jacobi and Gauss-Legendre rules,
/// so all weights are positive and all points interior.
const TriangleRule& triangle_rule(int degree);

/// Gauss-Legendre rule on [0,1] exact to `degree` (1..20).
const EdgeRule& edge_rule(int degree);

/// n-point Gauss rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1].
/// Nodes ascending.
void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights);

/// Integral of f over physical triangle k with the given rule.
template <class F>
double integrate(const Mesh& mesh, Index k, const TriangleRule& rule, F&& f) {
    const auto& t = mesh.triangle(k);
    const Point a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
    const double jac = 2.0 * mesh.area(k);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& l = rule.points[q];
        const Point x{l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y};
        s += rule.weights[q] * f(x, l);
    }
    return jac * s;
}

/// Exact value of the integral over [0,1] of |a + (b - a) t|^p, p >= 0.
double integrate_abs_linear_power(double a, double b, double p);

}  // namespace dfh
