#include "gpcrec/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpcrec {

MultiIndex MultiIndex::from_dense(std::initializer_list<int> degrees) {
    return from_dense(std::vector<int>(degrees));
}

MultiIndex MultiIndex::from_dense(const std::vector<int>& degrees) {
    MultiIndex s;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 0) throw std::invalid_argument("MultiIndex: negative degree");
        if (degrees[i] > 0)
            s.entries_.emplace_back(static_cast<std::int32_t>(i + 1), degrees[i]);
    }
    return s;
}

MultiIndex MultiIndex::from_pairs(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    MultiIndex s;
    for (const auto& [dim, val] : entries) {
        if (dim < 1 || val < 0) throw std::invalid_argument("MultiIndex: bad entry");
        if (val == 0) continue;
        if (!s.entries_.empty() && s.entries_.back().first == dim)
            throw std::invalid_argument("MultiIndex: duplicate dimension");
        s.entries_.emplace_back(dim, val);
    }
    return s;
}

MultiIndex MultiIndex::single(int dim, int value) {
    return from_pairs({{static_cast<std::int32_t>(dim), static_cast<std::int32_t>(value)}});
}

int MultiIndex::degree(int dim) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), dim,
                               [](const Entry& e, int d) { return e.first < d; });
    return (it != entries_.end() && it->first == dim) ? it->second : 0;
}

long MultiIndex::total_degree() const {
    long t = 0;
    for (const auto& e : entries_) t += e.second;
    return t;
}

int MultiIndex::max_degree() const {
    int t = 0;
    for (const auto& e : entries_) t = std::max(t, static_cast<int>(e.second));
    return t;
}

MultiIndex MultiIndex::bumped(int dim, int delta) const {
    MultiIndex out(*this);
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), dim,
                               [](const Entry& e, int d) { return e.first < d; });
    if (it != out.entries_.end() && it->first == dim) {
        const int v = it->second + delta;
        if (v < 0) throw std::invalid_argument("MultiIndex::bumped: negative result");
        if (v == 0)
            out.entries_.erase(it);
        else
            it->second = v;
    } else {
        if (delta < 0) throw std::invalid_argument("MultiIndex::bumped: negative result");
        if (delta > 0) out.entries_.insert(it, Entry{dim, delta});
    }
    return out;
}

bool MultiIndex::leq(const MultiIndex& other) const {
    for (const auto& [dim, val] : entries_)
        if (val > other.degree(dim)) return false;
    return true;
}

bool MultiIndex::revlex_less(const MultiIndex& a, const MultiIndex& b) {
    auto ia = a.entries_.rbegin();
    auto ib = b.entries_.rbegin();
    while (ia != a.entries_.rend() || ib != b.entries_.rend()) {
        const int da = (ia != a.entries_.rend()) ? ia->first : 0;
        const int db = (ib != b.entries_.rend()) ? ib->first : 0;
        if (da != db) {
            // One index is active in a higher dimension than the other;
            // there the other has degree zero, which is smaller.
            return da > db ? false : true;
        }
        if (ia->second != ib->second) return ia->second < ib->second;
        ++ia;
        ++ib;
    }
    return false;
}

} // namespace gpcrec
