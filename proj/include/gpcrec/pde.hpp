#ifndef GPCREC_PDE_HPP
#define GPCREC_PDE_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gpcrec/basis.hpp"
#include "gpcrec/index_set.hpp"

namespace gpcrec {

/// One component function psi_j on D = (0, 1).
struct PsiSpec {
    enum class Kind { Sine, Hat, Tabulated };
    Kind kind = Kind::Sine;
    double amplitude = 1.0;
    int mode = 1;                 // Sine: amplitude * sin(mode pi x)
    double support_lo = 0.0;      // Hat: peak amplitude at the support center
    double support_hi = 1.0;
    std::vector<double> values;   // Tabulated: nodal values on a uniform grid over [0,1]

    double operator()(double x) const;
    double sup_norm() const;

    static PsiSpec sine(double amplitude, int mode);
    static PsiSpec hat(double amplitude, double lo, double hi);
    static PsiSpec tabulated(std::vector<double> values);
};

/// Families used by the experiments: kappa * j^{-theta} decay.
std::vector<PsiSpec> sine_psi_family(double kappa, double theta, int J);
std::vector<PsiSpec> hat_psi_family(double kappa, double theta, int J);

/// Parametric diffusion coefficient a(y)(x): exp(sum y_j psi_j) or
/// abar + sum y_j psi_j.
struct CoefficientField {
    enum class Kind { Lognormal, Affine };
    Kind kind = Kind::Lognormal;
    std::vector<PsiSpec> psi;
    std::function<double(double)> abar; // affine only

    static CoefficientField lognormal(std::vector<PsiSpec> psi);
    /// Validates uniform ellipticity of the truncated family:
    /// inf abar - sum ||psi_j||_inf > 0.
    static CoefficientField affine(std::function<double(double)> abar,
                                   std::vector<PsiSpec> psi);

    int parameter_count() const { return static_cast<int>(psi.size()); }
};

double eval_coefficient(const CoefficientField& field, std::span<const double> y, double x);

struct FemMesh {
    int nh = 2; // element count; interior dofs = nh - 1
    double h() const { return 1.0 / nh; }
};

struct FemSolution {
    FemMesh mesh;
    Eigen::VectorXd values; // interior nodal values, zero on the boundary
};

using RhsFn = std::function<double(double)>;

/// P1 Galerkin solve of -(a u')' = f on (0,1), u(0) = u(1) = 0, with the
/// coefficient sampled at element midpoints and a direct tridiagonal solve.
FemSolution solve_fem(const CoefficientField& field, std::span<const double> y,
                      const RhsFn& f_rhs, const FemMesh& mesh);
FemSolution solve_fem(const CoefficientField& field, std::span<const double> y,
                      double f_const, const FemMesh& mesh);

/// Energy seminorm ||u'||_{L2}, exact for piecewise-linear u.
double v_norm(const FemSolution& sol);
double v_norm(const Eigen::VectorXd& interior_values, const FemMesh& mesh);

struct McError {
    double rmse = 0.0;
    double stderr_ = 0.0;
};

/// Monte-Carlo Bochner error: i.i.d. test points from the base measure,
/// e_t = || u_h(y_t) - approx(y_t) ||_V, rmse = sqrt(mean e^2).
McError bochner_error_mc(const Approximant& approx, const PolynomialFamily& family,
                         const CoefficientField& field, const RhsFn& f_rhs,
                         const FemMesh& mesh, std::size_t test_count,
                         std::uint64_t seed, int J);

} // namespace gpcrec

#endif
