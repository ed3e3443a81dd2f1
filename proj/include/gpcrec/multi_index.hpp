#ifndef GPCREC_MULTI_INDEX_HPP
#define GPCREC_MULTI_INDEX_HPP

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

namespace gpcrec {

/// Finitely supported sequence of non-negative integers.  Stored sparsely as
/// (dimension, value) pairs with dimension >= 1 and value >= 1, sorted by
/// dimension; absent dimensions are zero.
class MultiIndex {
public:
    using Entry = std::pair<std::int32_t, std::int32_t>;

    MultiIndex() = default;

    /// Build from dense degrees (d[0] is dimension 1). Zeros are dropped.
    static MultiIndex from_dense(std::initializer_list<int> degrees);
    static MultiIndex from_dense(const std::vector<int>& degrees);
    /// Build from sparse (dim, value) pairs; pairs need not be sorted.
    static MultiIndex from_pairs(std::vector<Entry> entries);
    static MultiIndex single(int dim, int value);

    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Degree in dimension `dim` (1-based); 0 if absent.
    int degree(int dim) const;
    /// Largest active dimension, 0 for the zero index.
    int max_dim() const { return entries_.empty() ? 0 : entries_.back().first; }
    /// |s|_1.
    long total_degree() const;
    /// |s|_inf.
    int max_degree() const;

    /// Copy with degree in `dim` shifted by `delta` (result must stay >= 0).
    MultiIndex bumped(int dim, int delta) const;

    /// Coordinatewise comparison: *this <= other in every dimension.
    bool leq(const MultiIndex& other) const;

    bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }
    bool operator!=(const MultiIndex& other) const { return !(*this == other); }

    /// Reverse-lexicographic comparison: scan from the highest differing
    /// dimension down; the index with the smaller degree there comes first.
    static bool revlex_less(const MultiIndex& a, const MultiIndex& b);

private:
    std::vector<Entry> entries_;
};

/// Structural strict total order: (|s|_1, revlex).  Used for deterministic
/// containers keyed by MultiIndex.
struct MultiIndexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const long ta = a.total_degree(), tb = b.total_degree();
        if (ta != tb) return ta < tb;
        return MultiIndex::revlex_less(a, b);
    }
};

/// Full enumeration order used throughout: by weight first, then the
/// structural order as a deterministic tie-break.
inline bool sigma_order_less(double sa, const MultiIndex& a, double sb, const MultiIndex& b) {
    if (sa != sb) return sa < sb;
    return MultiIndexLess{}(a, b);
}

} // namespace gpcrec

#endif
