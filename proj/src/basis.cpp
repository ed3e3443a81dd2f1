#include "gpcrec/basis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gpcrec/errors.hpp"

namespace gpcrec {

PolynomialFamily PolynomialFamily::jacobi(double a, double b) {
    if (!(a > -1.0) || !(b > -1.0))
        throw DomainError("Jacobi parameters must satisfy a > -1 and b > -1");
    return {FamilyKind::Jacobi, a, b};
}

namespace {

// Monic Jacobi recurrence coefficients for the weight (1-y)^a (1+y)^b,
// normalized to a probability measure (beta_0 = 1).
double jacobi_alpha(double a, double b, int k) {
    if (k == 0) return (b - a) / (a + b + 2.0);
    const double t = 2.0 * k + a + b;
    return (b * b - a * a) / (t * (t + 2.0));
}

double jacobi_beta(double a, double b, int k) {
    if (k == 0) return 1.0;
    if (k == 1) {
        const double t = a + b + 2.0;
        return 4.0 * (a + 1.0) * (b + 1.0) / (t * t * (a + b + 3.0));
    }
    const double t = 2.0 * k + a + b;
    return 4.0 * k * (k + a) * (k + b) * (k + a + b) /
           (t * t * (t + 1.0) * (t - 1.0));
}

} // namespace

Recurrence recurrence_coefficients(const PolynomialFamily& family, int k) {
    if (family.kind == FamilyKind::Hermite)
        return {0.0, std::sqrt(static_cast<double>(k + 1))};
    return {jacobi_alpha(family.jacobi_a, family.jacobi_b, k),
            std::sqrt(jacobi_beta(family.jacobi_a, family.jacobi_b, k + 1))};
}

void eval_univariate_all(const PolynomialFamily& family, int max_deg, double y,
                         double* out) {
    out[0] = 1.0;
    if (max_deg == 0) return;
    double pm1 = 0.0, p = 1.0;
    double sqrt_beta_k = 0.0; // sqrt(beta_0) unused at k = 0
    for (int k = 0; k < max_deg; ++k) {
        const Recurrence rec = recurrence_coefficients(family, k);
        const double pnext = ((y - rec.alpha) * p - sqrt_beta_k * pm1) / rec.sqrt_beta_next;
        pm1 = p;
        p = pnext;
        sqrt_beta_k = rec.sqrt_beta_next;
        out[k + 1] = p;
    }
}

double eval_univariate(const PolynomialFamily& family, int degree, double y,
                       int max_degree) {
    if (degree < 0) throw DomainError("eval_univariate: negative degree");
    if (degree > max_degree)
        throw DegreeTooLarge("eval_univariate: degree " + std::to_string(degree) +
                             " exceeds maximum " + std::to_string(max_degree));
    if (family.kind == FamilyKind::Jacobi && std::abs(y) > 1.0)
        throw DomainError("eval_univariate: Jacobi argument outside [-1, 1]");

    double pm1 = 0.0, p = 1.0;
    double sqrt_beta_k = 0.0;
    for (int k = 0; k < degree; ++k) {
        const Recurrence rec = recurrence_coefficients(family, k);
        const double pnext = ((y - rec.alpha) * p - sqrt_beta_k * pm1) / rec.sqrt_beta_next;
        pm1 = p;
        p = pnext;
        sqrt_beta_k = rec.sqrt_beta_next;
    }
    return p;
}

double eval_tensor(const PolynomialFamily& family, const MultiIndex& s,
                   std::span<const double> y, int max_degree) {
    if (s.max_dim() > static_cast<int>(y.size()))
        throw DimensionMismatch("eval_tensor: point has fewer dimensions than supp(s)");
    double prod = 1.0;
    for (const auto& [dim, deg] : s.entries())
        prod *= eval_univariate(family, deg, y[static_cast<std::size_t>(dim) - 1], max_degree);
    return prod;
}

double density(const PolynomialFamily& family, double y) {
    if (family.kind == FamilyKind::Hermite)
        return std::exp(-0.5 * y * y) / std::sqrt(2.0 * M_PI);
    const double a = family.jacobi_a, b = family.jacobi_b;
    if (std::abs(y) > 1.0) throw DomainError("density: Jacobi argument outside [-1, 1]");
    if ((y == 1.0 && a < 0.0) || (y == -1.0 && b < 0.0))
        throw DomainError("density: Jacobi density unbounded at this endpoint");
    // log of c_{a,b} = Gamma(a+b+2) / (2^{a+b+1} Gamma(a+1) Gamma(b+1))
    const double log_c = std::lgamma(a + b + 2.0) - (a + b + 1.0) * std::log(2.0) -
                         std::lgamma(a + 1.0) - std::lgamma(b + 1.0);
    return std::exp(log_c) * std::pow(1.0 - y, a) * std::pow(1.0 + y, b);
}

QuadratureRule quadrature(const PolynomialFamily& family, int order, int max_order) {
    if (order < 1) throw DomainError("quadrature: order must be positive");
    if (order > max_order)
        throw OrderTooLarge("quadrature: order " + std::to_string(order) +
                            " exceeds maximum " + std::to_string(max_order));

    // Golub-Welsch: eigen-decompose the symmetric tridiagonal Jacobi matrix.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 0; k < order; ++k) {
        const Recurrence rec = recurrence_coefficients(family, k);
        J(k, k) = rec.alpha;
        if (k + 1 < order) {
            J(k, k + 1) = rec.sqrt_beta_next;
            J(k + 1, k) = rec.sqrt_beta_next;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J, Eigen::EigenvaluesOnly);
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    std::vector<double> vals(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        rule.nodes[i] = eig.eigenvalues()(i);
        // Christoffel identity w_i = 1 / sum_{k<n} p_k(x_i)^2 keeps the tiny
        // outer weights accurate in a relative sense, which the squared
        // eigenvector components do not.
        eval_univariate_all(family, order - 1, rule.nodes[i], vals.data());
        double k_sum = 0.0;
        for (double v : vals) k_sum += v * v;
        rule.weights[i] = 1.0 / k_sum;
    }
    return rule;
}

} // namespace gpcrec
