#include "gpcrec/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpcrec/errors.hpp"
#include "gpcrec/least_squares.hpp"
#include "gpcrec/sampling.hpp"

namespace gpcrec {

double PsiSpec::operator()(double x) const {
    switch (kind) {
        case Kind::Sine:
            return amplitude * std::sin(mode * M_PI * x);
        case Kind::Hat: {
            if (x <= support_lo || x >= support_hi) return 0.0;
            const double mid = 0.5 * (support_lo + support_hi);
            const double half = 0.5 * (support_hi - support_lo);
            return amplitude * (1.0 - std::abs(x - mid) / half);
        }
        case Kind::Tabulated: {
            if (values.empty()) return 0.0;
            if (values.size() == 1) return values[0];
            const double t = std::clamp(x, 0.0, 1.0) * (values.size() - 1);
            const std::size_t i = std::min(static_cast<std::size_t>(t), values.size() - 2);
            const double frac = t - static_cast<double>(i);
            return values[i] * (1.0 - frac) + values[i + 1] * frac;
        }
    }
    return 0.0;
}

double PsiSpec::sup_norm() const {
    switch (kind) {
        case Kind::Sine:
        case Kind::Hat:
            return std::abs(amplitude);
        case Kind::Tabulated: {
            double m = 0.0;
            for (double v : values) m = std::max(m, std::abs(v));
            return m;
        }
    }
    return 0.0;
}

PsiSpec PsiSpec::sine(double amplitude, int mode) {
    PsiSpec p;
    p.kind = Kind::Sine;
    p.amplitude = amplitude;
    p.mode = mode;
    return p;
}

PsiSpec PsiSpec::hat(double amplitude, double lo, double hi) {
    if (!(lo < hi)) throw DomainError("PsiSpec::hat: empty support");
    PsiSpec p;
    p.kind = Kind::Hat;
    p.amplitude = amplitude;
    p.support_lo = lo;
    p.support_hi = hi;
    return p;
}

PsiSpec PsiSpec::tabulated(std::vector<double> values) {
    PsiSpec p;
    p.kind = Kind::Tabulated;
    p.values = std::move(values);
    return p;
}

std::vector<PsiSpec> sine_psi_family(double kappa, double theta, int J) {
    std::vector<PsiSpec> psi;
    psi.reserve(static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j)
        psi.push_back(PsiSpec::sine(kappa * std::pow(j, -theta), j));
    return psi;
}

std::vector<PsiSpec> hat_psi_family(double kappa, double theta, int J) {
    // disjoint supports [ (j-1)/J, j/J ]
    std::vector<PsiSpec> psi;
    psi.reserve(static_cast<std::size_t>(J));
    for (int j = 1; j <= J; ++j)
        psi.push_back(PsiSpec::hat(kappa * std::pow(j, -theta),
                                   static_cast<double>(j - 1) / J,
                                   static_cast<double>(j) / J));
    return psi;
}

CoefficientField CoefficientField::lognormal(std::vector<PsiSpec> psi) {
    CoefficientField f;
    f.kind = Kind::Lognormal;
    f.psi = std::move(psi);
    return f;
}

CoefficientField CoefficientField::affine(std::function<double(double)> abar,
                                          std::vector<PsiSpec> psi) {
    CoefficientField f;
    f.kind = Kind::Affine;
    f.abar = std::move(abar);
    f.psi = std::move(psi);
    double abar_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1024; ++i)
        abar_min = std::min(abar_min, f.abar(static_cast<double>(i) / 1024.0));
    double psi_sum = 0.0;
    for (const auto& p : f.psi) psi_sum += p.sup_norm();
    if (!(abar_min - psi_sum > 0.0))
        throw EllipticityViolation("CoefficientField::affine: inf abar - sum ||psi_j|| = " +
                                   std::to_string(abar_min - psi_sum) + " <= 0");
    return f;
}

double eval_coefficient(const CoefficientField& field, std::span<const double> y, double x) {
    if (static_cast<int>(y.size()) < field.parameter_count())
        throw DimensionMismatch("eval_coefficient: parameter vector shorter than psi family");
    double s = 0.0;
    for (std::size_t j = 0; j < field.psi.size(); ++j) s += y[j] * field.psi[j](x);
    if (field.kind == CoefficientField::Kind::Lognormal) return std::exp(s);
    const double a = field.abar(x) + s;
    if (!(a > 0.0))
        throw EllipticityViolation("eval_coefficient: affine coefficient non-positive at x = " +
                                   std::to_string(x));
    return a;
}

FemSolution solve_fem(const CoefficientField& field, std::span<const double> y,
                      const RhsFn& f_rhs, const FemMesh& mesh) {
    if (mesh.nh < 2) throw DomainError("solve_fem: mesh needs at least 2 elements");
    const int n = mesh.nh;
    const double h = mesh.h();

    // element-midpoint coefficient values
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> fmid(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        const double xm = (e + 0.5) * h;
        a[static_cast<std::size_t>(e)] = eval_coefficient(field, y, xm);
        if (!(a[static_cast<std::size_t>(e)] > 0.0))
            throw EllipticityViolation("solve_fem: coefficient non-positive at a quadrature point");
        fmid[static_cast<std::size_t>(e)] = f_rhs(xm);
    }

    // tridiagonal stiffness, interior nodes 1..n-1
    const int dof = n - 1;
    std::vector<double> diag(static_cast<std::size_t>(dof));
    std::vector<double> off(static_cast<std::size_t>(dof > 0 ? dof - 1 : 0));
    Eigen::VectorXd rhs(dof);
    for (int i = 1; i < n; ++i) {
        diag[static_cast<std::size_t>(i - 1)] =
            (a[static_cast<std::size_t>(i - 1)] + a[static_cast<std::size_t>(i)]) / h;
        if (i < n - 1) off[static_cast<std::size_t>(i - 1)] = -a[static_cast<std::size_t>(i)] / h;
        // midpoint rule for the load: phi_i = 1/2 at both adjacent midpoints
        rhs(i - 1) = 0.5 * h * (fmid[static_cast<std::size_t>(i - 1)] +
                                fmid[static_cast<std::size_t>(i)]);
    }

    // Thomas algorithm
    std::vector<double> c_prime(static_cast<std::size_t>(dof), 0.0);
    Eigen::VectorXd d_prime(dof);
    double piv = diag[0];
    if (std::abs(piv) < 1e-300) throw SingularSystem("solve_fem: zero pivot");
    c_prime[0] = dof > 1 ? off[0] / piv : 0.0;
    d_prime(0) = rhs(0) / piv;
    for (int i = 1; i < dof; ++i) {
        piv = diag[static_cast<std::size_t>(i)] -
              off[static_cast<std::size_t>(i - 1)] * c_prime[static_cast<std::size_t>(i - 1)];
        if (std::abs(piv) < 1e-300) throw SingularSystem("solve_fem: zero pivot");
        if (i < dof - 1) c_prime[static_cast<std::size_t>(i)] = off[static_cast<std::size_t>(i)] / piv;
        d_prime(i) = (rhs(i) - off[static_cast<std::size_t>(i - 1)] * d_prime(i - 1)) / piv;
    }
    FemSolution sol;
    sol.mesh = mesh;
    sol.values.resize(dof);
    sol.values(dof - 1) = d_prime(dof - 1);
    for (int i = dof - 2; i >= 0; --i)
        sol.values(i) = d_prime(i) - c_prime[static_cast<std::size_t>(i)] * sol.values(i + 1);
    return sol;
}

FemSolution solve_fem(const CoefficientField& field, std::span<const double> y,
                      double f_const, const FemMesh& mesh) {
    return solve_fem(field, y, [f_const](double) { return f_const; }, mesh);
}

double v_norm(const Eigen::VectorXd& interior_values, const FemMesh& mesh) {
    if (interior_values.size() != mesh.nh - 1)
        throw DimensionMismatch("v_norm: value count does not match the mesh");
    const double h = mesh.h();
    double acc = 0.0;
    double prev = 0.0;
    for (Eigen::Index i = 0; i < interior_values.size(); ++i) {
        const double d = interior_values(i) - prev;
        acc += d * d;
        prev = interior_values(i);
    }
    acc += prev * prev; // last element down to the zero boundary value
    return std::sqrt(acc / h);
}

double v_norm(const FemSolution& sol) { return v_norm(sol.values, sol.mesh); }

McError bochner_error_mc(const Approximant& approx, const PolynomialFamily& family,
                         const CoefficientField& field, const RhsFn& f_rhs,
                         const FemMesh& mesh, std::size_t test_count,
                         std::uint64_t seed, int J) {
    if (approx.x_dim != mesh.nh - 1)
        throw DimensionMismatch("bochner_error_mc: approximant x_dim != interior dof count");
    if (J < std::max(approx.basis.max_dim(), field.parameter_count()))
        throw DimensionMismatch("bochner_error_mc: J too small");
    if (test_count == 0) throw DomainError("bochner_error_mc: test_count must be positive");

    const SamplePlan tests = draw_base_measure(family, test_count, seed, J);
    Eigen::VectorXd sq_errors(static_cast<Eigen::Index>(test_count));

#pragma omp parallel for schedule(static)
    for (long long t = 0; t < static_cast<long long>(test_count); ++t) {
        std::vector<double> y(static_cast<std::size_t>(J));
        for (int j = 0; j < J; ++j) y[static_cast<std::size_t>(j)] = tests.points(t, j);
        const FemSolution truth = solve_fem(field, y, f_rhs, mesh);
        const Eigen::VectorXd approx_vals = evaluate(approx, family, y);
        const double e = v_norm(truth.values - approx_vals, mesh);
        sq_errors(t) = e * e;
    }

    const double mean_sq = sq_errors.mean();
    McError out;
    out.rmse = std::sqrt(std::max(mean_sq, 0.0));
    if (test_count > 1 && out.rmse > 0.0) {
        const double var =
            (sq_errors.array() - mean_sq).square().sum() / (static_cast<double>(test_count) - 1.0);
        const double se_mean_sq = std::sqrt(var / static_cast<double>(test_count));
        out.stderr_ = se_mean_sq / (2.0 * out.rmse); // delta method for sqrt
    }
    return out;
}

} // namespace gpcrec
