#ifndef GPCREC_BASIS_HPP
#define GPCREC_BASIS_HPP

#include <span>
#include <vector>

#include "gpcrec/multi_index.hpp"

namespace gpcrec {

enum class FamilyKind { Hermite, Jacobi };

/// Univariate orthonormal polynomial family together with its probability
/// measure: probabilists' Hermite w.r.t. the standard Gaussian, or Jacobi
/// w.r.t. the normalized weight c_{a,b} (1-y)^a (1+y)^b on [-1, 1].
struct PolynomialFamily {
    FamilyKind kind = FamilyKind::Hermite;
    double jacobi_a = 0.0;
    double jacobi_b = 0.0;

    static PolynomialFamily hermite() { return {FamilyKind::Hermite, 0.0, 0.0}; }
    static PolynomialFamily jacobi(double a, double b);

    bool operator==(const PolynomialFamily&) const = default;
};

inline constexpr int kDefaultMaxEvalDegree = 200;
inline constexpr int kDefaultMaxQuadOrder = 500;

/// Recurrence coefficients of the orthonormal three-term relation
///   sqrt(beta_{k+1}) p_{k+1}(y) = (y - alpha_k) p_k(y) - sqrt(beta_k) p_{k-1}(y)
/// for the family's probability measure (beta_0 = 1).
struct Recurrence {
    double alpha;
    double sqrt_beta_next; // sqrt(beta_{k+1})
};
Recurrence recurrence_coefficients(const PolynomialFamily& family, int k);

/// Value of the orthonormal polynomial of the given degree, evaluated by the
/// forward orthonormal recurrence.
double eval_univariate(const PolynomialFamily& family, int degree, double y,
                       int max_degree = kDefaultMaxEvalDegree);

/// All orthonormal polynomial values of degree 0..max_deg at y, in one
/// recurrence sweep. out must have size max_deg + 1.
void eval_univariate_all(const PolynomialFamily& family, int max_deg, double y,
                         double* out);

/// Tensor-product value prod_j phi_{s_j}(y_j); dimensions outside supp(s)
/// contribute the constant factor 1.
double eval_tensor(const PolynomialFamily& family, const MultiIndex& s,
                   std::span<const double> y, int max_degree = kDefaultMaxEvalDegree);

/// Univariate probability density of the family's measure.
double density(const PolynomialFamily& family, double y);

/// Gauss rule for the family's probability measure; weights sum to 1.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
QuadratureRule quadrature(const PolynomialFamily& family, int order,
                          int max_order = kDefaultMaxQuadOrder);

} // namespace gpcrec

#endif
