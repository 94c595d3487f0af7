#ifndef QCLUST_QUBO_HPP
#define QCLUST_QUBO_HPP

// QUBO and Ising model types, the exact conversion between them, and the
// Kronecker-structured clustering models built from a distance or a centered
// kernel-similarity matrix.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qclust/error.hpp"
#include "qclust/profiles.hpp"

namespace qclust {

using BitVector = std::vector<std::uint8_t>;
using SpinVector = std::vector<std::int8_t>;

/// Minimise x^T Q x + offset over x in {0,1}^n. Q is stored upper-triangular;
/// the diagonal holds the linear terms (x_i^2 = x_i).
class QuboModel {
public:
    QuboModel() = default;

    QuboModel(Matrix q, double offset) : q_(std::move(q)), offset_(offset) {
        if (q_.rows() != q_.cols()) fail(ErrorCode::DimensionMismatch, "QUBO matrix must be square");
        for (Eigen::Index i = 0; i < q_.rows(); ++i) {
            for (Eigen::Index j = 0; j < i; ++j) {
                if (q_(i, j) != 0.0) {
                    fail(ErrorCode::DimensionMismatch, "QUBO matrix has a nonzero below the diagonal at (" +
                                                           std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
        }
        if (!q_.allFinite() || !std::isfinite(offset_)) {
            fail(ErrorCode::DimensionMismatch, "QUBO coefficients must be finite");
        }
    }

    /// Folds any lower-triangular mass onto the mirrored upper entry.
    static QuboModel from_square(const Matrix& square, double offset) {
        Matrix upper = square.triangularView<Eigen::Upper>();
        upper += Matrix(square.transpose().triangularView<Eigen::StrictlyUpper>());
        return QuboModel(std::move(upper), offset);
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(q_.rows()); }
    double offset() const noexcept { return offset_; }
    const Matrix& coefficients() const noexcept { return q_; }
    double operator()(std::size_t i, std::size_t j) const {
        return q_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    double max_abs_coefficient() const { return q_.size() ? q_.cwiseAbs().maxCoeff() : 0.0; }

private:
    Matrix q_;
    double offset_ = 0.0;
};

/// Sum_{i<j} J_ij s_i s_j + Sum_i h_i s_i + offset over s in {-1,+1}^n.
class IsingModel {
public:
    IsingModel() = default;

    IsingModel(Matrix couplings, Vector fields, double offset)
        : j_(std::move(couplings)), h_(std::move(fields)), offset_(offset) {
        if (j_.rows() != j_.cols() || j_.rows() != h_.size()) {
            fail(ErrorCode::DimensionMismatch, "Ising couplings and fields disagree on size");
        }
        for (Eigen::Index r = 0; r < j_.rows(); ++r) {
            for (Eigen::Index c = 0; c <= r; ++c) {
                if (j_(r, c) != 0.0) {
                    fail(ErrorCode::DimensionMismatch, "Ising couplings must be strictly upper-triangular");
                }
            }
        }
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(h_.size()); }
    double offset() const noexcept { return offset_; }
    const Matrix& couplings() const noexcept { return j_; }
    const Vector& fields() const noexcept { return h_; }

private:
    Matrix j_;
    Vector h_;
    double offset_ = 0.0;
};

/// Direct summation over the upper triangle restricted to the set bits.
inline double qubo_energy(const QuboModel& model, std::span<const std::uint8_t> x) {
    if (x.size() != model.size()) {
        fail(ErrorCode::LengthMismatch, "bit vector has length " + std::to_string(x.size()) +
                                            ", model has " + std::to_string(model.size()) + " variables");
    }
    std::vector<Eigen::Index> active;
    active.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) active.push_back(static_cast<Eigen::Index>(i));
    }
    const Matrix& q = model.coefficients();
    double energy = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = a; b < active.size(); ++b) energy += q(active[a], active[b]);
    }
    return energy + model.offset();
}

inline double ising_energy(const IsingModel& model, std::span<const std::int8_t> s) {
    if (s.size() != model.size()) {
        fail(ErrorCode::LengthMismatch, "spin vector has length " + std::to_string(s.size()) +
                                            ", model has " + std::to_string(model.size()) + " spins");
    }
    const Matrix& j = model.couplings();
    const Vector& h = model.fields();
    const auto n = static_cast<Eigen::Index>(s.size());
    double energy = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        double row = 0.0;
        for (Eigen::Index b = a + 1; b < n; ++b) row += j(a, b) * s[static_cast<std::size_t>(b)];
        energy += (row + h(a)) * s[static_cast<std::size_t>(a)];
    }
    return energy + model.offset();
}

inline SpinVector spins_from_bits(std::span<const std::uint8_t> x) {
    SpinVector s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
    return s;
}

inline BitVector bits_from_spins(std::span<const std::int8_t> s) {
    BitVector x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i] > 0 ? 1 : 0;
    return x;
}

/// Substitutes x = (s + 1) / 2. Energies agree on every paired assignment.
inline IsingModel ising_from_qubo(const QuboModel& model) {
    const Matrix& q = model.coefficients();
    const auto n = q.rows();
    Matrix j = Matrix::Zero(n, n);
    Vector h = Vector::Zero(n);
    double offset = model.offset();
    for (Eigen::Index a = 0; a < n; ++a) {
        h(a) += q(a, a) / 2.0;
        offset += q(a, a) / 2.0;
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const double v = q(a, b);
            if (v == 0.0) continue;
            j(a, b) = v / 4.0;
            h(a) += v / 4.0;
            h(b) += v / 4.0;
            offset += v / 4.0;
        }
    }
    return IsingModel(std::move(j), std::move(h), offset);
}

/// Substitutes s = 2x - 1. Quadratic terms become 4 J_ij; the linear terms
/// collect a_i = 2 h_i - 2 Sum_{j>i} J_ij and -2 b_i with b_i = Sum_{j<i} J_ji.
/// The constant Sum_{i<j} J_ij - Sum_i h_i is kept so energies match exactly.
inline QuboModel qubo_from_ising(const IsingModel& model) {
    const Matrix& j = model.couplings();
    const Vector& h = model.fields();
    const auto n = j.rows();
    Matrix q = Matrix::Zero(n, n);
    double offset = model.offset();
    for (Eigen::Index a = 0; a < n; ++a) {
        double upper = 0.0;
        double lower = 0.0;
        for (Eigen::Index b = a + 1; b < n; ++b) upper += j(a, b);
        for (Eigen::Index b = 0; b < a; ++b) lower += j(b, a);
        const double linear = -2.0 * upper + 2.0 * h(a);
        q(a, a) = linear - 2.0 * lower;
        for (Eigen::Index b = a + 1; b < n; ++b) q(a, b) = 4.0 * j(a, b);
        offset += upper - h(a);
    }
    return QuboModel(std::move(q), offset);
}

/// Penalty weight lambda_i for each profile's one-hot constraint. A scalar
/// broadcasts to every profile.
class Penalty {
public:
    static Penalty scalar(double value) { return Penalty({value}, true); }
    static Penalty per_profile(std::vector<double> values) { return Penalty(std::move(values), false); }

    bool is_scalar() const noexcept { return scalar_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double at(std::size_t profile) const { return scalar_ ? values_.front() : values_.at(profile); }

    double total(std::size_t n_profiles) const {
        if (scalar_) return values_.front() * static_cast<double>(n_profiles);
        return std::accumulate(values_.begin(), values_.end(), 0.0);
    }

private:
    Penalty(std::vector<double> values, bool scalar) : values_(std::move(values)), scalar_(scalar) {}

    std::vector<double> values_;
    bool scalar_;
};

/// Position of x_i^g in the profile-major variable vector.
constexpr std::size_t variable_index(std::size_t profile, std::size_t group, std::size_t n_groups) noexcept {
    return profile * n_groups + group;
}

/// (N - G) * d_max: the smallest uniform penalty for which the distance model's
/// minimisers are guaranteed to be one-hot feasible.
inline double penalty_lower_bound(const SimilarityMatrix& distances, std::size_t n_profiles, std::size_t n_groups) {
    if (distances.kind() != MatrixKind::Distance) {
        fail(ErrorCode::KindMismatch, "the penalty bound is only defined for distance matrices");
    }
    if (n_groups < 1 || n_profiles <= n_groups) {
        fail(ErrorCode::GroupCountExceedsProfiles, "need n_profiles > n_groups >= 1, got N=" +
                                                       std::to_string(n_profiles) + ", G=" + std::to_string(n_groups));
    }
    if (distances.size() != n_profiles) {
        fail(ErrorCode::DimensionMismatch, "distance matrix size does not match n_profiles");
    }
    return static_cast<double>(n_profiles - n_groups) * distances.max_element();
}

namespace detail {

inline void check_penalty(const Penalty& penalty, std::size_t n_profiles) {
    if (!penalty.is_scalar() && penalty.values().size() != n_profiles) {
        fail(ErrorCode::DimensionMismatch, "per-profile penalty has " + std::to_string(penalty.values().size()) +
                                               " entries for " + std::to_string(n_profiles) + " profiles");
    }
    for (double v : penalty.values()) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(ErrorCode::NonPositiveLambda, "penalty weights must be positive, got " + std::to_string(v));
        }
    }
}

/// (B kron I_G) + (Lambda kron (2 O_G - I_G)) with B upper-triangular N x N.
inline QuboModel assemble_clustering_qubo(const Matrix& block, std::size_t n_groups, const Penalty& penalty) {
    const auto n_profiles = static_cast<std::size_t>(block.rows());
    if (n_groups < 1) fail(ErrorCode::BadGroupCount, "n_groups must be >= 1");
    check_penalty(penalty, n_profiles);
    const auto n = static_cast<Eigen::Index>(n_profiles * n_groups);
    Matrix q = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n_profiles; ++i) {
        for (std::size_t j = i; j < n_profiles; ++j) {
            const double b = block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (b == 0.0) continue;
            for (std::size_t g = 0; g < n_groups; ++g) {
                q(static_cast<Eigen::Index>(variable_index(i, g, n_groups)),
                  static_cast<Eigen::Index>(variable_index(j, g, n_groups))) += b;
            }
        }
        const double lambda = penalty.at(i);
        for (std::size_t g = 0; g < n_groups; ++g) {
            const auto vg = static_cast<Eigen::Index>(variable_index(i, g, n_groups));
            q(vg, vg) -= lambda;
            for (std::size_t h = g + 1; h < n_groups; ++h) {
                q(vg, static_cast<Eigen::Index>(variable_index(i, h, n_groups))) += 2.0 * lambda;
            }
        }
    }
    return QuboModel(std::move(q), penalty.total(n_profiles));
}

}  // namespace detail

/// Distance clustering model. On one-hot x the energy equals the sum of
/// distances over same-group pairs; the penalty constant is kept in offset.
inline QuboModel build_distance_qubo(const SimilarityMatrix& distances, std::size_t n_groups, const Penalty& penalty) {
    if (distances.kind() != MatrixKind::Distance) {
        fail(ErrorCode::KindMismatch, "build_distance_qubo expects a distance matrix");
    }
    Matrix upper = distances.values().triangularView<Eigen::StrictlyUpper>();
    return detail::assemble_clustering_qubo(upper, n_groups, penalty);
}

/// Kernel clustering model. On one-hot x the energy equals minus the summed
/// similarity over all ordered same-group pairs, diagonal included.
inline QuboModel build_kernel_qubo(const SimilarityMatrix& similarity, std::size_t n_groups, const Penalty& penalty) {
    if (similarity.kind() != MatrixKind::CenteredSimilarity) {
        fail(ErrorCode::KindMismatch, "build_kernel_qubo expects a centered similarity matrix");
    }
    const Matrix& g = similarity.values();
    Matrix block = -2.0 * Matrix(g.triangularView<Eigen::StrictlyUpper>());
    block.diagonal() = -g.diagonal();
    return detail::assemble_clustering_qubo(block, n_groups, penalty);
}

// Text format: a header line "n offset", then one "i j value" line per
// nonzero upper-triangular entry (0-based). Values carry 17 significant
// digits so a write/read cycle reproduces every double exactly.

namespace detail {

inline void write_real(std::ostream& out, double v) {
    const auto old = out.precision(17);
    out << v;
    out.precision(old);
}

inline double read_real(std::istream& in, const char* what) {
    std::string token;
    if (!(in >> token)) fail(ErrorCode::ParseError, std::string("missing ") + what);
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(ErrorCode::ParseError, std::string("bad ") + what + " '" + token + "'");
    return value;
}

inline std::size_t read_index(std::istream& in, const char* what) {
    std::string token;
    if (!(in >> token)) fail(ErrorCode::ParseError, std::string("missing ") + what);
    std::size_t value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(ErrorCode::ParseError, std::string("bad ") + what + " '" + token + "'");
    return value;
}

}  // namespace detail

inline void write_qubo(std::ostream& out, const QuboModel& model) {
    out << model.size() << ' ';
    detail::write_real(out, model.offset());
    out << '\n';
    const Matrix& q = model.coefficients();
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
        for (Eigen::Index j = i; j < q.cols(); ++j) {
            if (q(i, j) == 0.0) continue;
            out << i << ' ' << j << ' ';
            detail::write_real(out, q(i, j));
            out << '\n';
        }
    }
}

inline QuboModel read_qubo(std::istream& in) {
    const std::size_t n = detail::read_index(in, "variable count");
    const double offset = detail::read_real(in, "offset");
    Matrix q = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::string token;
    while (in >> std::ws && !in.eof()) {
        const std::size_t i = detail::read_index(in, "row index");
        const std::size_t j = detail::read_index(in, "column index");
        const double v = detail::read_real(in, "coefficient");
        if (i > j || j >= n) {
            fail(ErrorCode::ParseError, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                            ") is not in the upper triangle of a " + std::to_string(n) + "-variable model");
        }
        auto& slot = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (slot != 0.0) fail(ErrorCode::ParseError, "duplicate entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        slot = v;
    }
    return QuboModel(std::move(q), offset);
}

/// Same header as the QUBO format, then a "J" section of "i j value"
/// couplings and an "h" section of "i value" fields.
inline void write_ising(std::ostream& out, const IsingModel& model) {
    out << model.size() << ' ';
    detail::write_real(out, model.offset());
    out << "\nJ\n";
    const Matrix& j = model.couplings();
    for (Eigen::Index a = 0; a < j.rows(); ++a) {
        for (Eigen::Index b = a + 1; b < j.cols(); ++b) {
            if (j(a, b) == 0.0) continue;
            out << a << ' ' << b << ' ';
            detail::write_real(out, j(a, b));
            out << '\n';
        }
    }
    out << "h\n";
    const Vector& h = model.fields();
    for (Eigen::Index a = 0; a < h.size(); ++a) {
        if (h(a) == 0.0) continue;
        out << a << ' ';
        detail::write_real(out, h(a));
        out << '\n';
    }
}

inline IsingModel read_ising(std::istream& in) {
    const std::size_t n = detail::read_index(in, "spin count");
    const double offset = detail::read_real(in, "offset");
    const auto size = static_cast<Eigen::Index>(n);
    Matrix j = Matrix::Zero(size, size);
    Vector h = Vector::Zero(size);
    std::string marker;
    if (!(in >> marker) || marker != "J") fail(ErrorCode::ParseError, "expected 'J' section");
    while (in >> std::ws && !in.eof()) {
        if (in.peek() == 'h') {
            in >> marker;
            break;
        }
        const std::size_t a = detail::read_index(in, "row index");
        const std::size_t b = detail::read_index(in, "column index");
        const double v = detail::read_real(in, "coupling");
        if (a >= b || b >= n) fail(ErrorCode::ParseError, "coupling index out of the strict upper triangle");
        j(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
    }
    if (marker != "h") fail(ErrorCode::ParseError, "expected 'h' section");
    while (in >> std::ws && !in.eof()) {
        const std::size_t a = detail::read_index(in, "field index");
        const double v = detail::read_real(in, "field");
        if (a >= n) fail(ErrorCode::ParseError, "field index out of range");
        h(static_cast<Eigen::Index>(a)) = v;
    }
    return IsingModel(std::move(j), std::move(h), offset);
}

}  // namespace qclust

#endif  // QCLUST_QUBO_HPP
