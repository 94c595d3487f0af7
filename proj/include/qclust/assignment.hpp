#ifndef QCLUST_ASSIGNMENT_HPP
#define QCLUST_ASSIGNMENT_HPP

#include <cstddef>
#include <map>
#include <vector>

namespace qclust {

/// Group label per profile. Labels are 0-based in memory and written 1-based
/// in every external format.
struct Assignment {
    std::vector<std::size_t> labels;
    std::size_t n_groups = 0;

    std::size_t size() const noexcept { return labels.size(); }

    std::vector<std::size_t> group_sizes() const {
        std::vector<std::size_t> sizes(n_groups, 0);
        for (auto g : labels) ++sizes[g];
        return sizes;
    }

    std::size_t non_empty_groups() const {
        std::size_t count = 0;
        for (auto s : group_sizes()) count += s > 0;
        return count;
    }
};

/// Relabels groups in order of first appearance, so two assignments describe
/// the same partition iff their canonical forms are equal.
inline std::vector<std::size_t> canonical_labels(const Assignment& a) {
    std::map<std::size_t, std::size_t> rename;
    std::vector<std::size_t> out;
    out.reserve(a.size());
    for (auto g : a.labels) {
        auto [it, inserted] = rename.try_emplace(g, rename.size());
        out.push_back(it->second);
    }
    return out;
}

inline bool same_partition(const Assignment& a, const Assignment& b) {
    return a.size() == b.size() && canonical_labels(a) == canonical_labels(b);
}

}  // namespace qclust

#endif  // QCLUST_ASSIGNMENT_HPP
