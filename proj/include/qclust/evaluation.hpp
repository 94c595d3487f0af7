#ifndef QCLUST_EVALUATION_HPP
#define QCLUST_EVALUATION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "qclust/assignment.hpp"
#include "qclust/profiles.hpp"
#include "qclust/qubo.hpp"

namespace qclust {

struct Decoded {
    Assignment assignment;
    std::size_t violations = 0;
};

/// Reads profile-major one-hot bits. A profile with zero or several set bits
/// counts as a violation and takes its lowest set group, or group 0 if none.
inline Decoded decode_assignment(std::span<const std::uint8_t> bits, std::size_t n_profiles, std::size_t n_groups) {
    if (n_groups == 0 || bits.size() != n_profiles * n_groups) {
        fail(ErrorCode::LengthMismatch, "expected " + std::to_string(n_profiles) + " x " + std::to_string(n_groups) +
                                            " bits, got " + std::to_string(bits.size()));
    }
    Decoded out;
    out.assignment.n_groups = n_groups;
    out.assignment.labels.assign(n_profiles, 0);
    for (std::size_t i = 0; i < n_profiles; ++i) {
        std::size_t set = 0;
        bool first = true;
        for (std::size_t g = 0; g < n_groups; ++g) {
            if (!bits[variable_index(i, g, n_groups)]) continue;
            ++set;
            if (first) out.assignment.labels[i] = g;
            first = false;
        }
        if (set != 1) ++out.violations;
    }
    return out;
}

inline BitVector encode_one_hot(const Assignment& a) {
    BitVector bits(a.size() * a.n_groups, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.labels[i] >= a.n_groups) fail(ErrorCode::BadGroupCount, "label out of range at profile " + std::to_string(i));
        bits[variable_index(i, a.labels[i], a.n_groups)] = 1;
    }
    return bits;
}

namespace detail {

inline void check_dimension(const Assignment& a, const SimilarityMatrix& d) {
    if (d.kind() != MatrixKind::Distance) fail(ErrorCode::KindMismatch, "expected a distance matrix");
    if (a.size() != d.size()) {
        fail(ErrorCode::DimensionMismatch, "assignment has " + std::to_string(a.size()) + " profiles, matrix is " +
                                               std::to_string(d.size()) + " wide");
    }
}

}  // namespace detail

/// Sum of distances over unordered same-group pairs.
inline double intra_group_distance(const Assignment& a, const SimilarityMatrix& d) {
    detail::check_dimension(a, d);
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if (a.labels[i] == a.labels[j]) total += d(i, j);
        }
    }
    return total;
}

/// Mean Rousseeuw silhouette. Members of singleton groups score 0 and only
/// non-empty groups compete for the nearest-other-group term.
inline double silhouette(const Assignment& a, const SimilarityMatrix& d) {
    detail::check_dimension(a, d);
    const auto sizes = a.group_sizes();
    if (a.non_empty_groups() < 2) fail(ErrorCode::SingleCluster, "silhouette needs at least two non-empty groups");

    double total = 0.0;
    std::vector<double> sums(a.n_groups);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t own = a.labels[i];
        if (sizes[own] == 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j != i) sums[a.labels[j]] += d(i, j);
        }
        const double within = sums[own] / static_cast<double>(sizes[own] - 1);
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < a.n_groups; ++g) {
            if (g != own && sizes[g] > 0) nearest = std::min(nearest, sums[g] / static_cast<double>(sizes[g]));
        }
        const double denom = std::max(within, nearest);
        if (denom > 0.0) total += (nearest - within) / denom;
    }
    return total / static_cast<double>(a.size());
}

/// Silhouette with the degenerate single-group case scored as 0.
inline double silhouette_or_zero(const Assignment& a, const SimilarityMatrix& d) {
    return a.non_empty_groups() < 2 ? 0.0 : silhouette(a, d);
}

/// Signed relative gap in percent; undefined for a zero oracle.
inline std::optional<double> optimality_gap(double energy, double oracle) {
    if (oracle == 0.0) return std::nullopt;
    return (energy - oracle) / std::abs(oracle) * 100.0;
}

struct EvalReport {
    double energy = 0.0;
    double silhouette = 0.0;
    bool silhouette_defined = false;  // false when fewer than two groups are used
    double intra_group_distance = 0.0;
    bool feasible = false;
    std::size_t violations = 0;
    std::optional<double> oracle_energy;
    std::optional<double> gap_pct;
    Assignment assignment;
};

/// Decodes `bits`, scores the decoded grouping on the distance matrix and
/// compares the model energy with an optional oracle energy.
inline EvalReport evaluate(std::span<const std::uint8_t> bits, const SimilarityMatrix& distances,
                           const QuboModel& model, std::size_t n_groups,
                           std::optional<double> oracle_energy = std::nullopt) {
    Decoded decoded = decode_assignment(bits, distances.size(), n_groups);
    EvalReport report;
    report.energy = qubo_energy(model, bits);
    report.violations = decoded.violations;
    report.feasible = decoded.violations == 0;
    report.intra_group_distance = intra_group_distance(decoded.assignment, distances);
    report.silhouette_defined = decoded.assignment.non_empty_groups() >= 2;
    report.silhouette = silhouette_or_zero(decoded.assignment, distances);
    report.oracle_energy = oracle_energy;
    if (oracle_energy) report.gap_pct = optimality_gap(report.energy, *oracle_energy);
    report.assignment = std::move(decoded.assignment);
    return report;
}

}  // namespace qclust

#endif  // QCLUST_EVALUATION_HPP
