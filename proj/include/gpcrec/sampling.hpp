#ifndef GPCREC_SAMPLING_HPP
#define GPCREC_SAMPLING_HPP

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "gpcrec/basis.hpp"
#include "gpcrec/index_set.hpp"
#include "gpcrec/weights.hpp"

namespace gpcrec {

/// Inverse-CDF sampler for the univariate densities |phi_k|^2 dmu1.  Tables
/// are built once per degree and shared read-only afterwards.
class UnivariateSampler {
public:
    explicit UnivariateSampler(PolynomialFamily family, int grid_cells = 4096);

    /// Build (or reuse) the table for degree k and draw one sample from
    /// |phi_k|^2 dmu1 by mapping a uniform u in [0,1) through the tabulated
    /// inverse CDF.  k = 0 reproduces the base measure itself.
    double draw(int k, double u) const;

    /// Pre-build tables for all degrees up to max_k (avoids lazy building,
    /// which keeps multi-threaded drawing lock-free).
    void prepare(int max_k) const;

    const PolynomialFamily& family() const { return family_; }

private:
    struct Table;
    const Table& table(int k) const;

    PolynomialFamily family_;
    int grid_cells_;
    mutable std::vector<std::shared_ptr<const Table>> tables_;
};

/// Mixture sampling measure for a basis of the m smallest-weight indices:
/// half uniform Christoffel mass over the basis, half sigma^{-2}-weighted
/// mass over the retained tail indices.
struct NuSpec {
    PolynomialFamily family;
    WeightSpec spec;
    std::size_t m = 1;
    IndexSet basis;    // exactly m entries
    IndexSet tail_set; // indices m+1 .. m+T of the sigma ordering
    double tail_mass_retained = 0.0; // sum of sigma^{-2} over tail_set
    double z_tail_upper = 0.0;       // certified upper bound on the full tail mass
    double tail_mass_dropped = 0.0;  // z_tail_upper - tail_mass_retained
    std::shared_ptr<const UnivariateSampler> sampler;
};

struct NuOptions {
    double tail_tol = 1e-6;       // relative dropped tail mass
    std::size_t max_tail = 4'000'000;
    std::size_t set_cap = kDefaultSetCap;
};

NuSpec build_nu(const PolynomialFamily& family, const WeightSpec& spec,
                std::size_t m, const NuOptions& opts = {});

/// Density of nu w.r.t. the base product measure, evaluated at y.
double nu_density(const NuSpec& nu, std::span<const double> y);

enum class SampleScheme { IidSchemeI, IidForSubsampling, SubsampledSchemeII, PlainMu };

const char* scheme_name(SampleScheme s);

/// Point set with importance weights.  alpha is the scheme's weight scale:
/// omega_i = alpha / rho(y_i) for nu-based schemes (alpha = 1 for i.i.d.
/// plans, target/N for subsampled ones), and omega_i = 1 for plain-mu plans.
struct SamplePlan {
    Eigen::MatrixXd points;  // N x J
    Eigen::VectorXd weights; // N
    SampleScheme scheme = SampleScheme::IidSchemeI;
    std::uint64_t seed = 0;
    std::size_t m = 0; // basis size of the generating nu (0 for plain mu)
    int J = 0;
    double alpha = 1.0;

    std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
};

/// Draw `count` i.i.d. points from nu.  Sample i depends only on (seed, i),
/// so plans are reproducible independently of threading.
SamplePlan draw_samples(const NuSpec& nu, std::size_t count, std::uint64_t seed, int J,
                        SampleScheme scheme = SampleScheme::IidSchemeI);

/// Draw from the base product measure with unit weights (test points).
SamplePlan draw_base_measure(const PolynomialFamily& family, std::size_t count,
                             std::uint64_t seed, int J);

struct SubsampleOptions {
    double gamma_low = 1.0 / 66.0;
    double gamma_high = 70.0;
    double c2_floor = 1.05;          // minimal target / |basis| ratio
    double gram_min_lambda = 0.5;    // precondition on the full plan
    int lazy_pops = 24;              // exact re-evaluations per step
    int epoch = 0;                   // 0 = auto: barrier/inverse refresh stride
};

/// Deterministic two-barrier greedy subsampling: returns at most `target`
/// points of `plan` with weights rescaled by target/N such that the
/// normalized Gram over `basis` keeps its spectrum inside
/// [gamma_low, gamma_high].
SamplePlan subsample(const SamplePlan& plan, const PolynomialFamily& family,
                     const IndexSet& basis, std::size_t target,
                     const SubsampleOptions& opts = {});

} // namespace gpcrec

#endif
