#ifndef GPCREC_TESTS_ORACLES_HPP
#define GPCREC_TESTS_ORACLES_HPP

// Independent reference computations for the test suite.  Everything here is
// deliberately brute force and avoids the library's own code paths.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gpcrec/basis.hpp"
#include "gpcrec/multi_index.hpp"
#include "gpcrec/weights.hpp"

namespace oracles {

/// Moments of the family's probability measure: Hermite m_k = (k-1)!!,
/// Jacobi via the integration-by-parts recurrence
///   (a+b+2+k) I_{k+1} = (b-a) I_k + k I_{k-1}.
inline std::vector<double> monomial_moments(const gpcrec::PolynomialFamily& fam, int max_k) {
    std::vector<double> m(static_cast<std::size_t>(max_k) + 1);
    m[0] = 1.0;
    if (fam.kind == gpcrec::FamilyKind::Hermite) {
        if (max_k >= 1) m[1] = 0.0;
        for (int k = 2; k <= max_k; ++k) m[k] = (k - 1) * m[k - 2];
        return m;
    }
    const double a = fam.jacobi_a, b = fam.jacobi_b;
    if (max_k >= 1) m[1] = (b - a) / (a + b + 2.0);
    for (int k = 1; k < max_k; ++k)
        m[k + 1] = ((b - a) * m[k] + k * m[k - 1]) / (a + b + 2.0 + k);
    return m;
}

/// Forward orthonormal recurrence in extended precision.
inline long double eval_univariate_ld(const gpcrec::PolynomialFamily& fam, int degree,
                                      long double y) {
    long double pm1 = 0.0L, p = 1.0L, sqrt_beta_k = 0.0L;
    for (int k = 0; k < degree; ++k) {
        long double alpha, sqrt_beta_next;
        if (fam.kind == gpcrec::FamilyKind::Hermite) {
            alpha = 0.0L;
            sqrt_beta_next = sqrtl(static_cast<long double>(k + 1));
        } else {
            const long double a = fam.jacobi_a, b = fam.jacobi_b;
            if (k == 0)
                alpha = (b - a) / (a + b + 2.0L);
            else {
                const long double t = 2.0L * k + a + b;
                alpha = (b * b - a * a) / (t * (t + 2.0L));
            }
            const int kk = k + 1;
            long double beta;
            if (kk == 1) {
                const long double t = a + b + 2.0L;
                beta = 4.0L * (a + 1.0L) * (b + 1.0L) / (t * t * (a + b + 3.0L));
            } else {
                const long double t = 2.0L * kk + a + b;
                beta = 4.0L * kk * (kk + a) * (kk + b) * (kk + a + b) /
                       (t * t * (t + 1.0L) * (t - 1.0L));
            }
            sqrt_beta_next = sqrtl(beta);
        }
        const long double pnext = ((y - alpha) * p - sqrt_beta_k * pm1) / sqrt_beta_next;
        pm1 = p;
        p = pnext;
        sqrt_beta_k = sqrt_beta_next;
    }
    return p;
}

/// Brute-force lognormal sigma: enumerate every s' <= s with |s'|_inf <= eta.
inline double sigma_lognormal_brute(const gpcrec::MultiIndex& s, int eta,
                                    const std::vector<double>& rho_by_dim) {
    std::vector<std::pair<int, int>> supp(s.entries().begin(), s.entries().end());
    double total = 0.0;
    std::vector<int> sp(supp.size(), 0);
    for (;;) {
        double term = 1.0;
        for (std::size_t i = 0; i < supp.size(); ++i) {
            const int sj = supp[i].second, spj = sp[i];
            double binom = 1.0;
            for (int t = 0; t < spj; ++t) binom = binom * (sj - t) / (t + 1);
            const double rho = rho_by_dim.at(static_cast<std::size_t>(supp[i].first) - 1);
            term *= binom * std::pow(rho, 2.0 * spj);
        }
        total += term;
        // odometer over 0..min(s_j, eta)
        std::size_t pos = 0;
        while (pos < sp.size()) {
            if (sp[pos] < std::min(supp[pos].second, eta)) {
                ++sp[pos];
                break;
            }
            sp[pos] = 0;
            ++pos;
        }
        if (pos == sp.size()) break;
        if (supp.empty()) break;
    }
    return std::sqrt(total);
}

/// Brute-force threshold enumeration over the box {supp <= J, s_j <= S_j},
/// with per-dimension caps S_j chosen so that the box provably contains the
/// threshold set: for a coordinatewise-monotone spec, sigma(k e_j) > xi^{1/q}
/// bounds the degree in dimension j.
inline std::vector<int> box_caps(const gpcrec::WeightSpec& spec, double xi, int J,
                                 int hard_cap = 100000) {
    std::vector<int> caps;
    const double sigma_max = std::pow(xi, 1.0 / spec.q());
    for (int j = 1; j <= J; ++j) {
        int k = 0;
        while (k < hard_cap) {
            const double sg = spec.sigma(gpcrec::MultiIndex::single(j, k + 1));
            if (!std::isfinite(sg) || sg > sigma_max) break;
            ++k;
        }
        caps.push_back(k);
    }
    return caps;
}

inline void threshold_brute_rec(const gpcrec::WeightSpec& spec, double sigma_max,
                                const std::vector<int>& caps, std::size_t dim,
                                std::vector<int>& degrees,
                                std::vector<gpcrec::MultiIndex>& out) {
    if (dim == caps.size()) {
        const auto s = gpcrec::MultiIndex::from_dense(degrees);
        const double sg = spec.sigma(s);
        if (std::isfinite(sg) && sg <= sigma_max) out.push_back(s);
        return;
    }
    for (int k = 0; k <= caps[dim]; ++k) {
        degrees[dim] = k;
        // monotone: once the partial index exceeds the threshold, higher
        // degrees in this dimension cannot return below it
        if (k > 0 && spec.sigma(gpcrec::MultiIndex::from_dense(degrees)) > sigma_max) {
            degrees[dim] = 0;
            return;
        }
        threshold_brute_rec(spec, sigma_max, caps, dim + 1, degrees, out);
    }
    degrees[dim] = 0;
}

inline std::vector<gpcrec::MultiIndex> threshold_brute(const gpcrec::WeightSpec& spec,
                                                       double xi, int J) {
    std::vector<gpcrec::MultiIndex> out;
    const auto caps = box_caps(spec, xi, J);
    std::vector<int> degrees(static_cast<std::size_t>(J), 0);
    threshold_brute_rec(spec, std::pow(xi, 1.0 / spec.q()), caps, 0, degrees, out);
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return gpcrec::sigma_order_less(spec.sigma(a), a, spec.sigma(b), b);
    });
    return out;
}

/// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

/// Asymptotic 1% KS critical value.
inline double ks_critical_1pct(std::size_t n) {
    return 1.6276 / std::sqrt(static_cast<double>(n));
}

/// Adaptive Simpson integration (independent of the library quadratures).
template <typename F>
double integrate_simpson(F&& f, double a, double b, int depth = 18, double tol = 1e-12) {
    auto simpson = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
    };
    struct Frame {
        double a, b, whole;
        int depth;
    };
    std::vector<Frame> stack{{a, b, simpson(a, b), depth}};
    double total = 0.0;
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (fr.a + fr.b);
        const double left = simpson(fr.a, mid), right = simpson(mid, fr.b);
        if (fr.depth <= 0 || std::abs(left + right - fr.whole) < 15.0 * tol) {
            total += left + right + (left + right - fr.whole) / 15.0;
        } else {
            stack.push_back({fr.a, mid, left, fr.depth - 1});
            stack.push_back({mid, fr.b, right, fr.depth - 1});
        }
    }
    return total;
}

} // namespace oracles

#endif
