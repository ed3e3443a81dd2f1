#ifndef GPCREC_INDEX_SET_HPP
#define GPCREC_INDEX_SET_HPP

#include <Eigen/Core>
#include <cstddef>
#include <map>

#include "gpcrec/multi_index.hpp"
#include "gpcrec/weights.hpp"

namespace gpcrec {

/// Ordered list of multi-indices with their weights, sorted ascending by
/// (sigma, |s|_1, revlex).
struct IndexSet {
    std::vector<MultiIndex> indices;
    std::vector<double> sigmas;

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
    /// Largest active dimension over all members.
    int max_dim() const;
    /// Largest single degree over all members.
    int max_degree() const;
    bool contains(const MultiIndex& s) const;
};

inline constexpr std::size_t kDefaultSetCap = 10'000'000;

/// Threshold set { s : sigma_s^q <= xi }, enumerated exactly.  Monotone specs
/// use a pruned depth-first traversal; explicit tables are filtered
/// exhaustively.  xi < 1 yields a possibly empty set.
IndexSet enumerate_threshold(const WeightSpec& spec, double xi,
                             std::size_t cap = kDefaultSetCap);

/// The m multi-indices of smallest weight, via a best-first frontier search.
IndexSet smallest_m(const WeightSpec& spec, std::size_t m,
                    std::size_t cap = kDefaultSetCap);

/// sigma_{(n+1)}^{-1}: the Kolmogorov width of the weighted unit ball
/// realized by an (n+1)-smallest-weight truncation.
double theoretical_width(const WeightSpec& spec, std::size_t n,
                         std::size_t cap = kDefaultSetCap);

/// Coefficient table: one coefficient vector per multi-index.
using CoeffTable = std::map<MultiIndex, Eigen::VectorXd, MultiIndexLess>;

/// Expansion with one coefficient row per basis index; x_dim = 1 is the
/// scalar case.
struct Approximant {
    IndexSet basis;
    Eigen::MatrixXd coefficients; // |basis| x x_dim
    int x_dim = 1;
};

/// Keep exactly the coefficients whose index lies in `set`; indices of `set`
/// absent from the table get zero rows.
Approximant truncate_expansion(const CoeffTable& coeffs, const IndexSet& set);

} // namespace gpcrec

#endif
