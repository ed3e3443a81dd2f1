#ifndef GPCREC_LEAST_SQUARES_HPP
#define GPCREC_LEAST_SQUARES_HPP

#include <Eigen/Core>
#include <complex>

#include "gpcrec/basis.hpp"
#include "gpcrec/index_set.hpp"
#include "gpcrec/sampling.hpp"

namespace gpcrec {

/// Weighted design: rows are sample points, columns basis functions.
struct DesignMatrix {
    Eigen::MatrixXd L;       // N x m, entry phi_s(y_i)
    Eigen::VectorXd weights; // omega_i
    IndexSet basis;
    SampleScheme scheme = SampleScheme::IidSchemeI;
    double alpha = 1.0; // weight scale of the plan (see SamplePlan)

    Eigen::Index rows() const { return L.rows(); }
    Eigen::Index cols() const { return L.cols(); }
};

DesignMatrix assemble_design(const PolynomialFamily& family, const IndexSet& basis,
                             const SamplePlan& plan,
                             int max_degree = kDefaultMaxEvalDegree);

inline constexpr double kDefaultCondTol = 1e-12;

/// Weighted least squares over the design's basis via an orthogonal
/// factorization of W^{1/2} L (truncated pseudo-inverse fallback when column
/// pivoting reports rank deficiency).
Approximant solve_scalar(const DesignMatrix& design, const Eigen::VectorXd& samples,
                         double cond_tol = kDefaultCondTol);

/// Coordinatewise extension: identical solution operator applied to each of
/// the d sample columns.
Approximant solve_bochner(const DesignMatrix& design, const Eigen::MatrixXd& samples,
                          double cond_tol = kDefaultCondTol);

/// sum_s coeff[s] phi_s(y), one value per X-coordinate.
Eigen::VectorXd evaluate(const Approximant& approx, const PolynomialFamily& family,
                         std::span<const double> y,
                         int max_degree = kDefaultMaxEvalDegree);

struct GramDiagnostics {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
};

/// Extreme eigenvalues of the normalized Gram (1/(N alpha)) L^T W L, whose
/// expectation is the identity under exact nu-sampling.
GramDiagnostics gram_diagnostics(const DesignMatrix& design);

/// Finite-section check of the Bochner lift: operator norm of B = A / sigma
/// (columns scaled) versus the brute-force norm of B (x) I_d.  The two agree
/// for every matrix; the pair is exposed so tests can assert it.
struct TensorNormCheck {
    double scalar_norm = 0.0;
    double lifted_norm = 0.0;
};
TensorNormCheck operator_norm_tensor_check(const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& sigmas, int d);
TensorNormCheck operator_norm_tensor_check(const Eigen::MatrixXcd& A,
                                           const Eigen::VectorXd& sigmas, int d);

} // namespace gpcrec

#endif
