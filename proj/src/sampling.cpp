#include "gpcrec/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpcrec/errors.hpp"
#include "gpcrec/rng.hpp"

namespace gpcrec {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1]
constexpr double kGL8Nodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGL8Weights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

} // namespace

/// Tabulated CDF of |phi_k|^2 dmu1 on a fixed grid with a monotone cubic
/// interpolant of the inverse.
struct UnivariateSampler::Table {
    std::vector<double> y;     // grid knots (ascending)
    std::vector<double> cdf;   // cdf at knots, cdf.front() = 0, cdf.back() = 1
    std::vector<double> slope; // dy/dF at knots (monotone-limited)
};

UnivariateSampler::UnivariateSampler(PolynomialFamily family, int grid_cells)
    : family_(family), grid_cells_(grid_cells) {}

void UnivariateSampler::prepare(int max_k) const {
    if (static_cast<int>(tables_.size()) <= max_k) tables_.resize(max_k + 1);
    for (int k = 0; k <= max_k; ++k) table(k);
}

const UnivariateSampler::Table& UnivariateSampler::table(int k) const {
    if (k < 0) throw DomainError("UnivariateSampler: negative degree");
    if (static_cast<int>(tables_.size()) <= k) tables_.resize(k + 1);
    if (tables_[k]) return *tables_[k];

    auto tab = std::make_shared<Table>();
    int cells = grid_cells_;
    if (family_.kind == FamilyKind::Hermite) {
        // widen the window with the degree: the oscillatory region of
        // |phi_k|^2 g extends to |y| ~ sqrt(4k+2)
        const double radius = std::max(9.0, std::sqrt(4.0 * k + 2.0) + 6.0);
        cells = grid_cells_ * std::max(1, static_cast<int>(std::ceil(radius / 9.0)));
        tab->y.resize(cells + 1);
        for (int i = 0; i <= cells; ++i)
            tab->y[i] = -radius + 2.0 * radius * i / cells;
    } else {
        // endpoint-clustered grid on [-1, 1]
        tab->y.resize(cells + 1);
        for (int i = 0; i <= cells; ++i)
            tab->y[i] = -std::cos(M_PI * i / cells);
        tab->y.front() = -1.0;
        tab->y.back() = 1.0;
    }

    tab->cdf.assign(cells + 1, 0.0);
    const PolynomialFamily fam = family_;
    for (int i = 0; i < cells; ++i) {
        const double a = tab->y[i], b = tab->y[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double mass = 0.0;
        for (int g = 0; g < 8; ++g) {
            const double yy = mid + half * kGL8Nodes[g];
            const double p = eval_univariate(fam, k, yy, std::max(k, kDefaultMaxEvalDegree));
            mass += kGL8Weights[g] * p * p * density(fam, yy);
        }
        tab->cdf[i + 1] = tab->cdf[i] + mass * half;
    }
    const double total = tab->cdf.back();
    if (!(total > 0.0) || !std::isfinite(total))
        throw TabulationFailure("UnivariateSampler: degenerate CDF for degree " +
                                std::to_string(k));
    for (double& v : tab->cdf) v /= total;
    for (int i = 1; i <= cells; ++i)
        if (tab->cdf[i] < tab->cdf[i - 1])
            throw TabulationFailure("UnivariateSampler: CDF not monotone for degree " +
                                    std::to_string(k));

    // Fritsch-Carlson monotone slopes for the inverse y(F)
    tab->slope.assign(cells + 1, 0.0);
    auto secant = [&](int i) {
        const double dF = tab->cdf[i + 1] - tab->cdf[i];
        if (dF <= 0.0) return 0.0; // empty cell: never selected by draws
        return (tab->y[i + 1] - tab->y[i]) / dF;
    };
    tab->slope[0] = secant(0);
    tab->slope[cells] = secant(cells - 1);
    for (int i = 1; i < cells; ++i) {
        const double s0 = secant(i - 1), s1 = secant(i);
        if (s0 <= 0.0 || s1 <= 0.0) {
            tab->slope[i] = 0.0;
            continue;
        }
        const double h0 = tab->cdf[i] - tab->cdf[i - 1];
        const double h1 = tab->cdf[i + 1] - tab->cdf[i];
        const double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
        tab->slope[i] = (w0 + w1) / (w0 / s0 + w1 / s1);
    }

    tables_[k] = std::move(tab);
    return *tables_[k];
}

double UnivariateSampler::draw(int k, double u) const {
    const Table& tab = table(k);
    u = std::min(std::max(u, 0.0), 1.0 - 0x1.0p-53);
    // cell index: largest i with cdf[i] <= u
    const auto it = std::upper_bound(tab.cdf.begin(), tab.cdf.end(), u);
    std::size_t i = static_cast<std::size_t>(std::distance(tab.cdf.begin(), it));
    i = (i == 0) ? 0 : i - 1;
    if (i >= tab.y.size() - 1) i = tab.y.size() - 2;
    const double f0 = tab.cdf[i], f1 = tab.cdf[i + 1];
    const double h = f1 - f0;
    if (h <= 0.0) return tab.y[i];
    const double t = (u - f0) / h;
    const double y0 = tab.y[i], y1 = tab.y[i + 1];
    const double d0 = tab.slope[i] * h, d1 = tab.slope[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * d1;
}

NuSpec build_nu(const PolynomialFamily& family, const WeightSpec& spec,
                std::size_t m, const NuOptions& opts) {
    if (m == 0) throw DomainError("build_nu: m must be positive");

    NuSpec nu;
    nu.family = family;
    nu.spec = spec;
    nu.m = m;

    // Certified total sum of sigma^{-2}; refine the tolerance until it is
    // small relative to the tail budget.
    CertifiedSum sum2 = inverse_power_sum(spec, 2.0, 1e-6, {opts.set_cap});

    std::size_t tail = std::max<std::size_t>(64, m);
    for (;;) {
        IndexSet all = smallest_m(spec, m + tail, opts.set_cap);
        double head_mass = 0.0;
        for (std::size_t i = 0; i < m; ++i) head_mass += std::pow(all.sigmas[i], -2.0);

        double z_tail_upper = sum2.upper - head_mass;
        double retained = 0.0;
        for (std::size_t i = m; i < all.size(); ++i) retained += std::pow(all.sigmas[i], -2.0);

        // tighten the certificate if its width competes with the tail budget
        if (sum2.half_width() * 2.0 > 0.1 * opts.tail_tol * std::max(retained, 1e-300)) {
            const double want = 0.05 * opts.tail_tol * std::max(retained, 1e-300);
            sum2 = inverse_power_sum(spec, 2.0, want, {opts.set_cap});
            z_tail_upper = sum2.upper - head_mass;
        }

        if (z_tail_upper <= 0.0 || retained >= (1.0 - opts.tail_tol) * z_tail_upper) {
            nu.basis.indices.assign(all.indices.begin(), all.indices.begin() + m);
            nu.basis.sigmas.assign(all.sigmas.begin(), all.sigmas.begin() + m);
            nu.tail_set.indices.assign(all.indices.begin() + m, all.indices.end());
            nu.tail_set.sigmas.assign(all.sigmas.begin() + m, all.sigmas.end());
            nu.tail_mass_retained = retained;
            nu.z_tail_upper = std::max(z_tail_upper, retained);
            nu.tail_mass_dropped = nu.z_tail_upper - retained;
            break;
        }
        if (tail >= opts.max_tail)
            throw SetTooLarge("build_nu: tail did not capture the requested mass");
        tail *= 2;
    }

    nu.sampler = std::make_shared<UnivariateSampler>(family);
    int max_deg = std::max(nu.basis.max_degree(), nu.tail_set.max_degree());
    nu.sampler->prepare(max_deg);
    return nu;
}

namespace {

// per-point univariate value tables over the active dimensions
struct PointTables {
    std::vector<std::vector<double>> vals; // vals[j][k], j 0-based dimension

    PointTables(const PolynomialFamily& family, const NuSpec& nu,
                std::span<const double> y) {
        const int dims = std::max(nu.basis.max_dim(), nu.tail_set.max_dim());
        if (dims > static_cast<int>(y.size()))
            throw DimensionMismatch("nu_density: point has fewer dimensions than the index sets");
        std::vector<int> max_deg(static_cast<std::size_t>(dims), 0);
        auto scan = [&](const IndexSet& set) {
            for (const auto& s : set.indices)
                for (const auto& [dim, deg] : s.entries())
                    max_deg[static_cast<std::size_t>(dim) - 1] =
                        std::max(max_deg[static_cast<std::size_t>(dim) - 1],
                                 static_cast<int>(deg));
        };
        scan(nu.basis);
        scan(nu.tail_set);
        vals.resize(static_cast<std::size_t>(dims));
        for (std::size_t j = 0; j < vals.size(); ++j) {
            vals[j].resize(max_deg[j] + 1);
            eval_univariate_all(family, max_deg[j], y[j], vals[j].data());
        }
    }

    double tensor(const MultiIndex& s) const {
        double prod = 1.0;
        for (const auto& [dim, deg] : s.entries())
            prod *= vals[static_cast<std::size_t>(dim) - 1][static_cast<std::size_t>(deg)];
        return prod;
    }
};

} // namespace

double nu_density(const NuSpec& nu, std::span<const double> y) {
    const PointTables tables(nu.family, nu, y);
    double christoffel = 0.0;
    for (const auto& s : nu.basis.indices) {
        const double v = tables.tensor(s);
        christoffel += v * v;
    }
    christoffel /= static_cast<double>(nu.m);
    if (nu.tail_set.empty() || nu.tail_mass_retained <= 0.0)
        return christoffel; // degenerate: everything lives in the basis

    double tail = 0.0;
    for (std::size_t i = 0; i < nu.tail_set.size(); ++i) {
        const double v = tables.tensor(nu.tail_set.indices[i]);
        tail += std::pow(nu.tail_set.sigmas[i], -2.0) * v * v;
    }
    tail /= nu.tail_mass_retained;
    return 0.5 * (christoffel + tail);
}

const char* scheme_name(SampleScheme s) {
    switch (s) {
        case SampleScheme::IidSchemeI: return "iid_scheme_i";
        case SampleScheme::IidForSubsampling: return "iid_for_subsampling";
        case SampleScheme::SubsampledSchemeII: return "subsampled_scheme_ii";
        case SampleScheme::PlainMu: return "plain_mu";
    }
    return "unknown";
}

SamplePlan draw_samples(const NuSpec& nu, std::size_t count, std::uint64_t seed, int J,
                        SampleScheme scheme) {
    if (scheme != SampleScheme::IidSchemeI && scheme != SampleScheme::IidForSubsampling)
        throw DomainError("draw_samples: draws from nu must be scheme (i) or pre-subsampling");
    const int min_dims = std::max(nu.basis.max_dim(), nu.tail_set.max_dim());
    if (J < min_dims)
        throw DimensionMismatch("draw_samples: J smaller than the active dimensions of nu");

    // tail index cdf, proportional to sigma^{-2}
    std::vector<double> tail_cdf(nu.tail_set.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < nu.tail_set.size(); ++i) {
        acc += std::pow(nu.tail_set.sigmas[i], -2.0);
        tail_cdf[i] = acc;
    }
    for (double& v : tail_cdf) v /= (acc > 0.0 ? acc : 1.0);

    SamplePlan plan;
    plan.points.resize(static_cast<Eigen::Index>(count), J);
    plan.weights.resize(static_cast<Eigen::Index>(count));
    plan.scheme = scheme;
    plan.seed = seed;
    plan.m = nu.m;
    plan.J = J;
    plan.alpha = 1.0;

    const bool has_tail = !nu.tail_set.empty() && nu.tail_mass_retained > 0.0;

#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(count); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        RngStream rs(seed, i);
        const double coin = rs.uniform01();
        const double pick = rs.uniform01();
        const MultiIndex* s;
        if (!has_tail || coin < 0.5) {
            std::size_t idx = static_cast<std::size_t>(pick * static_cast<double>(nu.m));
            idx = std::min(idx, nu.m - 1);
            s = &nu.basis.indices[idx];
        } else {
            const auto it = std::lower_bound(tail_cdf.begin(), tail_cdf.end(), pick);
            std::size_t idx = static_cast<std::size_t>(std::distance(tail_cdf.begin(), it));
            idx = std::min(idx, nu.tail_set.size() - 1);
            s = &nu.tail_set.indices[idx];
        }
        std::vector<double> y(static_cast<std::size_t>(J));
        for (int j = 1; j <= J; ++j)
            y[static_cast<std::size_t>(j) - 1] = nu.sampler->draw(s->degree(j), rs.uniform01());
        for (int j = 0; j < J; ++j) plan.points(ii, j) = y[static_cast<std::size_t>(j)];
        plan.weights(ii) = 1.0 / nu_density(nu, y);
    }
    return plan;
}

SamplePlan draw_base_measure(const PolynomialFamily& family, std::size_t count,
                             std::uint64_t seed, int J) {
    UnivariateSampler sampler(family);
    sampler.prepare(0);
    SamplePlan plan;
    plan.points.resize(static_cast<Eigen::Index>(count), J);
    plan.weights = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(count));
    plan.scheme = SampleScheme::PlainMu;
    plan.seed = seed;
    plan.m = 0;
    plan.J = J;
    plan.alpha = 1.0;

#pragma omp parallel for schedule(static)
    for (long long ii = 0; ii < static_cast<long long>(count); ++ii) {
        RngStream rs(seed, static_cast<std::size_t>(ii));
        rs.uniform01(); // keep the per-point stream layout of draw_samples
        rs.uniform01();
        for (int j = 0; j < J; ++j) plan.points(ii, j) = sampler.draw(0, rs.uniform01());
    }
    return plan;
}

} // namespace gpcrec
