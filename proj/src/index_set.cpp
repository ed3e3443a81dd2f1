#include "gpcrec/index_set.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "gpcrec/errors.hpp"

namespace gpcrec {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Member {
    MultiIndex s;
    double sigma;
};

void sort_members(std::vector<Member>& members) {
    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
        return sigma_order_less(a.sigma, a.s, b.sigma, b.s);
    });
}

IndexSet to_set(std::vector<Member> members) {
    IndexSet set;
    set.indices.reserve(members.size());
    set.sigmas.reserve(members.size());
    for (auto& m : members) {
        set.indices.push_back(std::move(m.s));
        set.sigmas.push_back(m.sigma);
    }
    return set;
}

} // namespace

int IndexSet::max_dim() const {
    int d = 0;
    for (const auto& s : indices) d = std::max(d, s.max_dim());
    return d;
}

int IndexSet::max_degree() const {
    int d = 0;
    for (const auto& s : indices) d = std::max(d, s.max_degree());
    return d;
}

bool IndexSet::contains(const MultiIndex& s) const {
    for (const auto& t : indices)
        if (t == s) return true;
    return false;
}

IndexSet enumerate_threshold(const WeightSpec& spec, double xi, std::size_t cap) {
    if (spec.kind() == WeightSpec::Kind::Explicit) {
        std::vector<Member> members;
        for (const auto& [s, sg] : spec.table())
            if (std::pow(sg, spec.q()) <= xi) members.push_back({s, sg});
        if (members.size() > cap) throw SetTooLarge("enumerate_threshold: cap exceeded");
        sort_members(members);
        return to_set(std::move(members));
    }
    if (!spec.monotone())
        throw DomainError("enumerate_threshold: spec must be monotone (or explicit)");

    const double q = spec.q();
    std::vector<Member> members;
    if (std::pow(spec.sigma(MultiIndex{}), q) > xi) return {};
    members.push_back({MultiIndex{}, 1.0});

    const std::size_t nd_from = std::max<std::size_t>(1, spec.rho().nondecreasing_from());

    // Depth-first traversal of the canonical tree: children of s extend
    // dimensions >= max_dim(s).  Once j >= nd_from, sigma(s + e_j) is
    // non-decreasing in j, so the first failure ends the scan.
    std::vector<std::size_t> stack; // positions into members
    stack.push_back(0);
    while (!stack.empty()) {
        const MultiIndex s = members[stack.back()].s; // copy: members reallocates
        stack.pop_back();
        const std::size_t j0 = std::max<std::size_t>(1, static_cast<std::size_t>(s.max_dim()));
        for (std::size_t j = j0;; ++j) {
            const MultiIndex child = s.bumped(static_cast<int>(j), 1);
            const double sg = spec.sigma(child);
            if (std::isfinite(sg) && std::pow(sg, q) <= xi) {
                members.push_back({child, sg});
                if (members.size() > cap)
                    throw SetTooLarge("enumerate_threshold: cap exceeded (" +
                                      std::to_string(cap) + ")");
                stack.push_back(members.size() - 1);
            } else if (j >= nd_from) {
                break;
            }
            if (j > cap) throw SetTooLarge("enumerate_threshold: dimension scan exceeded cap");
        }
    }
    sort_members(members);
    return to_set(std::move(members));
}

IndexSet smallest_m(const WeightSpec& spec, std::size_t m, std::size_t cap) {
    if (m > cap) throw SetTooLarge("smallest_m: m exceeds cap");
    if (m == 0) return {};

    if (spec.kind() == WeightSpec::Kind::Explicit) {
        std::vector<Member> members;
        for (const auto& [s, sg] : spec.table()) members.push_back({s, sg});
        if (m > members.size())
            throw SetTooLarge("smallest_m: explicit table smaller than m");
        sort_members(members);
        members.resize(m);
        return to_set(std::move(members));
    }
    if (!spec.monotone())
        throw DomainError("smallest_m: spec must be monotone (or explicit)");

    // Best-first search over the canonical tree.  A heap node materializes
    // the index s.bumped(j); popping it outputs the child and advances the
    // sibling chain (j+1, j+2, ...), which is safe because sigma(s + e_j) is
    // non-decreasing in j from nd_from on; below nd_from every dimension is
    // pushed eagerly.
    struct Node {
        MultiIndex child;
        double sigma;
        MultiIndex base;
        std::size_t ext_dim; // child == base + e_{ext_dim}
    };
    auto cmp = [](const Node& a, const Node& b) {
        // priority queue is max-first; invert
        return sigma_order_less(b.sigma, b.child, a.sigma, a.child);
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
    const std::size_t nd_from = std::max<std::size_t>(1, spec.rho().nondecreasing_from());

    std::vector<Member> out;
    out.push_back({MultiIndex{}, spec.sigma(MultiIndex{})});

    auto push_children = [&](const MultiIndex& s) {
        const std::size_t j0 = std::max<std::size_t>(1, static_cast<std::size_t>(s.max_dim()));
        // eager below nd_from, one chain entry from max(j0, nd_from)
        for (std::size_t j = j0; j < nd_from; ++j) {
            const MultiIndex child = s.bumped(static_cast<int>(j), 1);
            const double sg = spec.sigma(child);
            if (std::isfinite(sg)) heap.push({child, sg, s, j});
        }
        const std::size_t jc = std::max(j0, nd_from);
        const MultiIndex child = s.bumped(static_cast<int>(jc), 1);
        const double sg = spec.sigma(child);
        if (std::isfinite(sg)) heap.push({child, sg, s, jc});
    };
    push_children(MultiIndex{});

    while (out.size() < m) {
        if (heap.empty())
            throw SetTooLarge("smallest_m: fewer than m finite-weight indices exist");
        Node top = heap.top();
        heap.pop();
        out.push_back({top.child, top.sigma});
        push_children(top.child);
        if (top.ext_dim >= nd_from) {
            // advance the sibling chain
            const std::size_t j = top.ext_dim + 1;
            const MultiIndex sib = top.base.bumped(static_cast<int>(j), 1);
            const double sg = spec.sigma(sib);
            if (std::isfinite(sg)) heap.push({sib, sg, top.base, j});
        }
        if (heap.size() > cap) throw SetTooLarge("smallest_m: frontier exceeded cap");
    }
    return to_set(std::move(out));
}

double theoretical_width(const WeightSpec& spec, std::size_t n, std::size_t cap) {
    const IndexSet set = smallest_m(spec, n + 1, cap);
    return 1.0 / set.sigmas.back();
}

Approximant truncate_expansion(const CoeffTable& coeffs, const IndexSet& set) {
    int d = 1;
    if (!coeffs.empty()) d = static_cast<int>(coeffs.begin()->second.size());
    Approximant approx;
    approx.basis = set;
    approx.x_dim = d;
    approx.coefficients = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(set.size()), d);
    for (std::size_t i = 0; i < set.size(); ++i) {
        auto it = coeffs.find(set.indices[i]);
        if (it != coeffs.end()) {
            if (it->second.size() != d)
                throw ShapeMismatch("truncate_expansion: inconsistent coefficient sizes");
            approx.coefficients.row(static_cast<Eigen::Index>(i)) = it->second.transpose();
        }
    }
    return approx;
}

} // namespace gpcrec
