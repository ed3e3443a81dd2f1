#ifndef GPCREC_WEIGHTS_HPP
#define GPCREC_WEIGHTS_HPP

#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "gpcrec/multi_index.hpp"

namespace gpcrec {

/// Positive sequence rule j -> rho_j (j >= 1).  Dimensions beyond max_dim
/// (or beyond an explicit value list) get rho = +inf, which removes them
/// from every index set.
struct RhoRule {
    enum class Kind { Geometric, Power, Values };

    Kind kind = Kind::Geometric;
    double base = 2.0;     // Geometric: rho_j = base^j
    double scale = 1.0;    // Power: rho_j = scale * j^exponent
    double exponent = 1.0;
    std::vector<double> values; // Values: rho_j = values[j-1]
    std::size_t max_dim = 0;    // 0 = unlimited

    static RhoRule geometric(double base, std::size_t max_dim = 0);
    static RhoRule power(double scale, double exponent, std::size_t max_dim = 0);
    static RhoRule from_values(std::vector<double> values);

    double at(std::size_t j) const;
    /// First dimension from which rho_j is guaranteed non-decreasing in j.
    std::size_t nondecreasing_from() const;
};

/// Degree rule k -> c_k with c_0 = 1 for the affine product weights.
struct DegreeRule {
    enum class Kind { LegendreSup, One };
    Kind kind = Kind::LegendreSup;

    double at(int k) const;
    /// max over k of c_k / c_{k+1}; used for the monotonicity check.
    double max_downstep() const { return 1.0; }
};

/// Weight sequence sigma_s over multi-indices: either the binomial-sum rule
/// with cap eta, the product rule c_{s_j} rho_j^{s_j}, or an explicit finite
/// table.  q in (0, 2) is the summability exponent carried with the weights.
class WeightSpec {
public:
    enum class Kind { Lognormal, Affine, Explicit };
    using Table = std::map<MultiIndex, double, MultiIndexLess>;

    static WeightSpec lognormal(int eta, RhoRule rho, double q);
    static WeightSpec affine(RhoRule rho, DegreeRule c, double q);
    /// Explicit tables are taken verbatim (no sigma_0 = 1 normalization and
    /// no monotonicity assumption); enumeration over them is exhaustive.
    static WeightSpec explicit_table(Table table, double q);

    Kind kind() const { return kind_; }
    double q() const { return q_; }
    int eta() const { return eta_; }
    const RhoRule& rho() const { return rho_; }
    const DegreeRule& c_rule() const { return c_; }
    const Table& table() const { return table_; }

    /// sigma_s; +inf when an infinite rho_j is active. Throws
    /// MissingExplicitEntry for explicit specs without the entry.
    double sigma(const MultiIndex& s) const;

    /// Coordinatewise monotone: s <= s' implies sigma(s) <= sigma(s').
    bool monotone() const { return monotone_; }

private:
    Kind kind_ = Kind::Lognormal;
    double q_ = 1.0;
    int eta_ = 1;
    RhoRule rho_;
    DegreeRule c_;
    Table table_;
    bool monotone_ = true;
};

/// Certified enclosure of sum_s sigma_s^{-p}.
struct CertifiedSum {
    double lower = 0.0;
    double upper = 0.0;
    double midpoint() const { return 0.5 * (lower + upper); }
    double half_width() const { return 0.5 * (upper - lower); }
};

struct SumOptions {
    std::size_t enumeration_cap = 10'000'000;
    int max_doublings = 200;
    double ratio_cap = 0.9; // shell-decay ratio must drop below this
};

/// Certified sum of sigma^{-p}: exact partial sum over a threshold set plus a
/// geometric bound on the remainder obtained from the decay of dyadic
/// sigma-shells.
CertifiedSum inverse_power_sum(const WeightSpec& spec, double p, double tol,
                               const SumOptions& opts = {});

/// || sigma^{-1} ||_{ell_q} with q = spec.q(), reported as a midpoint of a
/// certified interval of half-width <= tol.
double lq_norm_inverse_sigma(const WeightSpec& spec, double tol,
                             const SumOptions& opts = {});

} // namespace gpcrec

#endif
