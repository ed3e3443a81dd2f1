#include "gpcrec/least_squares.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gpcrec/design.hpp"
#include "gpcrec/errors.hpp"

namespace gpcrec {

DesignMatrix assemble_design(const PolynomialFamily& family, const IndexSet& basis,
                             const SamplePlan& plan, int max_degree) {
    DesignMatrix design;
    design.L = tensor_design(family, basis, plan.points, max_degree);
    design.weights = plan.weights;
    design.basis = basis;
    design.scheme = plan.scheme;
    design.alpha = plan.alpha;
    return design;
}

namespace {

// one factorization, applied column by column so that multi-column solves
// are bitwise identical to stacked scalar solves
struct WeightedSolver {
    Eigen::MatrixXd Lw; // W^{1/2} L
    Eigen::VectorXd sqrt_w;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    Eigen::BDCSVD<Eigen::MatrixXd> svd;
    bool use_svd = false;

    WeightedSolver(const DesignMatrix& design, double cond_tol) {
        if (design.rows() < design.cols())
            throw ShapeMismatch("solve: fewer sample rows than basis columns");
        sqrt_w = design.weights.cwiseSqrt();
        Lw = sqrt_w.asDiagonal() * design.L;
        qr.compute(Lw);
        if (qr.rank() < design.cols()) {
            // pivoting reports deficiency: fall back to a truncated
            // spectral pseudo-inverse, rejecting genuinely singular systems
            svd.compute(Lw, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const double smax = svd.singularValues()(0);
            const double smin = svd.singularValues()(svd.singularValues().size() - 1);
            if (!(smin * smin >= cond_tol * smax * smax))
                throw RankDeficient("solve: normal-equation lambda_min/lambda_max = " +
                                    std::to_string((smin * smin) / (smax * smax)) +
                                    " below cond_tol");
            use_svd = true;
        }
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& samples) const {
        const Eigen::VectorXd rhs = sqrt_w.cwiseProduct(samples);
        if (use_svd) return svd.solve(rhs);
        return qr.solve(rhs);
    }
};

} // namespace

Approximant solve_scalar(const DesignMatrix& design, const Eigen::VectorXd& samples,
                         double cond_tol) {
    if (samples.size() != design.rows())
        throw ShapeMismatch("solve_scalar: sample count does not match design rows");
    const WeightedSolver solver(design, cond_tol);
    Approximant approx;
    approx.basis = design.basis;
    approx.x_dim = 1;
    approx.coefficients = solver.solve(samples);
    return approx;
}

Approximant solve_bochner(const DesignMatrix& design, const Eigen::MatrixXd& samples,
                          double cond_tol) {
    if (samples.rows() != design.rows())
        throw ShapeMismatch("solve_bochner: sample rows do not match design rows");
    if (samples.cols() < 1) throw ShapeMismatch("solve_bochner: no sample columns");
    const WeightedSolver solver(design, cond_tol);
    Approximant approx;
    approx.basis = design.basis;
    approx.x_dim = static_cast<int>(samples.cols());
    approx.coefficients.resize(design.cols(), samples.cols());
    for (Eigen::Index c = 0; c < samples.cols(); ++c)
        approx.coefficients.col(c) = solver.solve(samples.col(c));
    return approx;
}

Eigen::VectorXd evaluate(const Approximant& approx, const PolynomialFamily& family,
                         std::span<const double> y, int max_degree) {
    if (approx.basis.max_dim() > static_cast<int>(y.size()))
        throw DimensionMismatch("evaluate: point has fewer dimensions than the basis");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(approx.x_dim);
    for (std::size_t i = 0; i < approx.basis.size(); ++i) {
        const double phi = eval_tensor(family, approx.basis.indices[i], y, max_degree);
        out += phi * approx.coefficients.row(static_cast<Eigen::Index>(i)).transpose();
    }
    return out;
}

GramDiagnostics gram_diagnostics(const DesignMatrix& design) {
    const double n_eff = static_cast<double>(design.rows()) * design.alpha;
    Eigen::MatrixXd scaled = design.L;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i)
        scaled.row(i) *= std::sqrt(design.weights(i) / n_eff);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(design.cols(), design.cols());
    G.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    GramDiagnostics diag;
    diag.lambda_min = eig.eigenvalues().minCoeff();
    diag.lambda_max = eig.eigenvalues().maxCoeff();
    diag.rows = design.rows();
    diag.cols = design.cols();
    return diag;
}

namespace {

template <typename Scalar>
TensorNormCheck tensor_norm_check_impl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::VectorXd& sigmas, int d) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (sigmas.size() != A.cols())
        throw ShapeMismatch("operator_norm_tensor_check: sigma count != columns");
    if (d < 1) throw ShapeMismatch("operator_norm_tensor_check: d must be positive");
    for (Eigen::Index s = 0; s < sigmas.size(); ++s)
        if (!(sigmas(s) > 0.0))
            throw DomainError("operator_norm_tensor_check: sigmas must be positive");

    Mat B = A;
    for (Eigen::Index s = 0; s < B.cols(); ++s) B.col(s) /= sigmas(s);

    TensorNormCheck out;
    {
        Eigen::JacobiSVD<Mat> svd(B);
        out.scalar_norm = svd.singularValues()(0);
    }
    // brute-force Kronecker lift B (x) I_d
    Mat lifted = Mat::Zero(B.rows() * d, B.cols() * d);
    for (Eigen::Index r = 0; r < B.rows(); ++r)
        for (Eigen::Index c = 0; c < B.cols(); ++c)
            for (int k = 0; k < d; ++k) lifted(r * d + k, c * d + k) = B(r, c);
    {
        Eigen::JacobiSVD<Mat> svd(lifted);
        out.lifted_norm = svd.singularValues()(0);
    }
    return out;
}

} // namespace

TensorNormCheck operator_norm_tensor_check(const Eigen::MatrixXd& A,
                                           const Eigen::VectorXd& sigmas, int d) {
    return tensor_norm_check_impl<double>(A, sigmas, d);
}

TensorNormCheck operator_norm_tensor_check(const Eigen::MatrixXcd& A,
                                           const Eigen::VectorXd& sigmas, int d) {
    return tensor_norm_check_impl<std::complex<double>>(A, sigmas, d);
}

} // namespace gpcrec
