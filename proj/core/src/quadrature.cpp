#include "dfh/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace dfh {

void gauss_jacobi(int n, double alpha, double beta, std::vector<double>& nodes,
                  std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be positive");
    // Golub-Welsch on the monic three-term recurrence.
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max(n - 1, 1));
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag[k] = (k == 0) ? (beta - alpha) / (ab + 2.0)
                           : (beta * beta - alpha * alpha) / (s * (s + 2.0));
        if (k >= 1) {
            const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
            const double den = s * s * (s + 1.0) * (s - 1.0);
            sub[k - 1] = std::sqrt(num / den);
        }
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 1) {
        nodes[0] = diag[0];
        weights[0] = mu0;
        return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    for (int i = 0; i < n; ++i) {
        nodes[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
    }
}

namespace {

void check_degree(int degree, const char* what) {
    if (degree < 1 || degree > kMaxQuadratureDegree)
        throw std::invalid_argument(std::string(what) + ": unsupported degree " +
                                    std::to_string(degree));
}

TriangleRule make_triangle_rule(int degree) {
    const int n = (degree + 2) / 2;  // 2n - 1 >= degree
    std::vector<double> xu, wu, xv, wv;
    // u carries the collapse Jacobian (1 - u).
    gauss_jacobi(n, 1.0, 0.0, xu, wu);
    gauss_jacobi(n, 0.0, 0.0, xv, wv);

    TriangleRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < xu.size(); ++i) {
        const double u = 0.5 * (1.0 + xu[i]);
        for (std::size_t j = 0; j < xv.size(); ++j) {
            const double v = 0.5 * (1.0 + xv[j]);
            const double x = u;
            const double y = v * (1.0 - u);
            r.points.push_back({1.0 - x - y, x, y});
            r.weights.push_back(0.25 * wu[i] * 0.5 * wv[j]);
        }
    }
    return r;
}

EdgeRule make_edge_rule(int degree) {
    const int n = (degree + 2) / 2;
    std::vector<double> x, w;
    gauss_jacobi(n, 0.0, 0.0, x, w);
    EdgeRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.points.push_back(0.5 * (1.0 + x[i]));
        r.weights.push_back(0.5 * w[i]);
    }
    return r;
}

template <class Rule, class Make>
const std::vector<Rule>& rule_table(Make make) {
    static const std::vector<Rule> table = [&] {
        std::vector<Rule> t;
        for (int d = 1; d <= kMaxQuadratureDegree; ++d) t.push_back(make(d));
        return t;
    }();
    return table;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
    check_degree(degree, "triangle_rule");
    return rule_table<TriangleRule>(make_triangle_rule)[static_cast<std::size_t>(degree - 1)];
}

const EdgeRule& edge_rule(int degree) {
    check_degree(degree, "edge_rule");
    return rule_table<EdgeRule>(make_edge_rule)[static_cast<std::size_t>(degree - 1)];
}

double integrate_abs_linear_power(double a, double b, double p) {
    const double abs_a = std::abs(a), abs_b = std::abs(b);
    if ((a < 0.0) != (b < 0.0) && abs_a > 0.0 && abs_b > 0.0) {
        // sign change inside the interval
        return (std::pow(abs_a, p + 1.0) + std::pow(abs_b, p + 1.0)) /
               ((p + 1.0) * (abs_a + abs_b));
    }
    const double hi = std::max(abs_a, abs_b);
    if (hi == 0.0) return 0.0;
    const double delta = (hi - std::min(abs_a, abs_b)) / hi;
    if (delta == 0.0) return std::pow(hi, p);
    if (delta == 1.0) return std::pow(hi, p) / (p + 1.0);
    // (hi^{p+1} - lo^{p+1}) / ((p+1)(hi - lo)), written to avoid cancellation
    return std::pow(hi, p) * -std::expm1((p + 1.0) * std::log1p(-delta)) / ((p + 1.0) * delta);
}

}  // namespace dfh
