#include "gpcrec/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpcrec/errors.hpp"
#include "gpcrec/index_set.hpp"

namespace gpcrec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RhoRule RhoRule::geometric(double base, std::size_t max_dim) {
    if (!(base > 0.0)) throw DomainError("RhoRule::geometric: base must be positive");
    RhoRule r;
    r.kind = Kind::Geometric;
    r.base = base;
    r.max_dim = max_dim;
    return r;
}

RhoRule RhoRule::power(double scale, double exponent, std::size_t max_dim) {
    if (!(scale > 0.0)) throw DomainError("RhoRule::power: scale must be positive");
    RhoRule r;
    r.kind = Kind::Power;
    r.scale = scale;
    r.exponent = exponent;
    r.max_dim = max_dim;
    return r;
}

RhoRule RhoRule::from_values(std::vector<double> values) {
    for (double v : values)
        if (!(v > 0.0)) throw DomainError("RhoRule::from_values: entries must be positive");
    RhoRule r;
    r.kind = Kind::Values;
    r.values = std::move(values);
    r.max_dim = r.values.size();
    return r;
}

double RhoRule::at(std::size_t j) const {
    if (j == 0) throw DomainError("RhoRule::at: dimensions are 1-based");
    if (max_dim != 0 && j > max_dim) return kInf;
    switch (kind) {
        case Kind::Geometric:
            return std::pow(base, static_cast<double>(j));
        case Kind::Power:
            return scale * std::pow(static_cast<double>(j), exponent);
        case Kind::Values:
            return values[j - 1];
    }
    return kInf;
}

std::size_t RhoRule::nondecreasing_from() const {
    switch (kind) {
        case Kind::Geometric:
            return base >= 1.0 ? 1 : (max_dim == 0 ? 0 : max_dim + 1);
        case Kind::Power:
            return exponent >= 0.0 ? 1 : (max_dim == 0 ? 0 : max_dim + 1);
        case Kind::Values: {
            // last position from which the explicit list is non-decreasing
            std::size_t from = 1;
            for (std::size_t j = 1; j < values.size(); ++j)
                if (values[j] < values[j - 1]) from = j + 1;
            return from;
        }
    }
    return 1;
}

double DegreeRule::at(int k) const {
    if (k < 0) throw DomainError("DegreeRule::at: negative degree");
    if (k == 0) return 1.0;
    switch (kind) {
        case Kind::LegendreSup:
            return std::sqrt(2.0 * k + 1.0);
        case Kind::One:
            return 1.0;
    }
    return 1.0;
}

WeightSpec WeightSpec::lognormal(int eta, RhoRule rho, double q) {
    if (eta < 1) throw DomainError("WeightSpec::lognormal: eta must be >= 1");
    if (!(q > 0.0) || !(q < 2.0)) throw DomainError("WeightSpec: q must lie in (0, 2)");
    if (rho.nondecreasing_from() == 0)
        throw DomainError("WeightSpec: rho must be eventually non-decreasing");
    WeightSpec w;
    w.kind_ = Kind::Lognormal;
    w.eta_ = eta;
    w.rho_ = std::move(rho);
    w.q_ = q;
    w.monotone_ = true; // each per-dimension factor increases with the degree
    return w;
}

WeightSpec WeightSpec::affine(RhoRule rho, DegreeRule c, double q) {
    if (!(q > 0.0) || !(q < 2.0)) throw DomainError("WeightSpec: q must lie in (0, 2)");
    if (rho.nondecreasing_from() == 0)
        throw DomainError("WeightSpec: rho must be eventually non-decreasing");
    WeightSpec w;
    w.kind_ = Kind::Affine;
    w.rho_ = std::move(rho);
    w.c_ = c;
    w.q_ = q;
    // c_{k+1} rho^{k+1} >= c_k rho^k for all k needs rho >= max_k c_k/c_{k+1}.
    double rho_min = kInf;
    const std::size_t probe = w.rho_.max_dim != 0 ? w.rho_.max_dim : 64;
    for (std::size_t j = 1; j <= probe; ++j) rho_min = std::min(rho_min, w.rho_.at(j));
    w.monotone_ = rho_min >= c.max_downstep();
    return w;
}

WeightSpec WeightSpec::explicit_table(Table table, double q) {
    if (!(q > 0.0) || !(q < 2.0)) throw DomainError("WeightSpec: q must lie in (0, 2)");
    for (const auto& [s, v] : table)
        if (!(v > 0.0)) throw DomainError("WeightSpec: explicit sigma must be positive");
    WeightSpec w;
    w.kind_ = Kind::Explicit;
    w.table_ = std::move(table);
    w.q_ = q;
    w.monotone_ = false;
    return w;
}

namespace {

// binomial(n, k) in double; exact integer arithmetic for small arguments,
// log-Gamma beyond to avoid overflow.
double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    if (n <= 60) {
        double num = 1.0;
        for (int i = 0; i < k; ++i) num = num * (n - i) / (i + 1);
        return num;
    }
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

} // namespace

double WeightSpec::sigma(const MultiIndex& s) const {
    switch (kind_) {
        case Kind::Lognormal: {
            // sum over s' <= s with entries capped at eta factorizes over the
            // support: prod_j sum_{k <= min(s_j, eta)} binom(s_j, k) rho_j^{2k}
            double log_sq = 0.0;
            for (const auto& [dim, deg] : s.entries()) {
                const double rho = rho_.at(static_cast<std::size_t>(dim));
                if (std::isinf(rho)) return kInf;
                const double rho2 = rho * rho;
                const int cap = std::min(deg, eta_);
                double factor = 0.0, pw = 1.0;
                for (int k = 0; k <= cap; ++k) {
                    factor += binom(deg, k) * pw;
                    pw *= rho2;
                }
                log_sq += std::log(factor);
            }
            return std::exp(0.5 * log_sq);
        }
        case Kind::Affine: {
            double log_sigma = 0.0;
            for (const auto& [dim, deg] : s.entries()) {
                const double rho = rho_.at(static_cast<std::size_t>(dim));
                if (std::isinf(rho)) return kInf;
                log_sigma += std::log(c_.at(deg)) + deg * std::log(rho);
            }
            return std::exp(log_sigma);
        }
        case Kind::Explicit: {
            auto it = table_.find(s);
            if (it == table_.end())
                throw MissingExplicitEntry("WeightSpec: multi-index not in explicit table");
            return it->second;
        }
    }
    return kInf;
}

CertifiedSum inverse_power_sum(const WeightSpec& spec, double p, double tol,
                               const SumOptions& opts) {
    if (!(p > 0.0)) throw DomainError("inverse_power_sum: p must be positive");
    if (!(tol > 0.0)) throw DomainError("inverse_power_sum: tol must be positive");

    if (spec.kind() == WeightSpec::Kind::Explicit) {
        double sum = 0.0;
        for (const auto& [s, v] : spec.table()) sum += std::pow(v, -p);
        return {sum, sum};
    }

    // Exact partial sums over growing threshold sets Lambda(tau^q on sigma
    // scale); the remainder is bounded by geometric extrapolation of the
    // dyadic shell sums, which must decay for the sum to be certifiable.
    const double q = spec.q();
    double tau = 2.0; // sigma threshold
    IndexSet lam = enumerate_threshold(spec, std::pow(tau, q), opts.enumeration_cap);
    double partial = 0.0;
    for (double sg : lam.sigmas) partial += std::pow(sg, -p);
    std::size_t count_prev = lam.size();
    double shell_prev = -1.0;

    for (int k = 0; k < opts.max_doublings; ++k) {
        tau *= 2.0;
        lam = enumerate_threshold(spec, std::pow(tau, q), opts.enumeration_cap);
        double total = 0.0;
        for (double sg : lam.sigmas) total += std::pow(sg, -p);
        const double shell = total - partial;
        partial = total;

        // shell-decay ratio; empty shells keep the previous ratio history
        if (shell > 0.0) {
            if (shell_prev > 0.0) {
                const double ratio = shell / shell_prev;
                if (ratio < opts.ratio_cap) {
                    const double tail_bound = shell * ratio / (1.0 - ratio);
                    if (0.5 * tail_bound <= tol) return {partial, partial + tail_bound};
                }
            }
            shell_prev = shell;
        } else if (count_prev == lam.size() && shell_prev < 0.0) {
            // no new indices at all and none pending: finite weight set
            if (k >= 2) return {partial, partial};
        }
        count_prev = lam.size();
    }
    throw NonConvergent("inverse_power_sum: shell sums are not decaying fast enough");
}

double lq_norm_inverse_sigma(const WeightSpec& spec, double tol, const SumOptions& opts) {
    const double q = spec.q();
    // Drive the sum tolerance until the interval of the norm itself is tight.
    double sum_tol = std::pow(tol, q);
    for (int pass = 0; pass < 40; ++pass) {
        const CertifiedSum sum = inverse_power_sum(spec, q, sum_tol, opts);
        const double lo = std::pow(sum.lower, 1.0 / q);
        const double hi = std::pow(sum.upper, 1.0 / q);
        if (0.5 * (hi - lo) <= tol) return 0.5 * (lo + hi);
        sum_tol *= 0.25;
    }
    throw NonConvergent("lq_norm_inverse_sigma: could not certify the requested tolerance");
}

} // namespace gpcrec
