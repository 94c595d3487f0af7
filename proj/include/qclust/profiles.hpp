#ifndef QCLUST_PROFILES_HPP
#define QCLUST_PROFILES_HPP

// Profile ingestion and the similarity matrices that feed QUBO construction.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qclust/error.hpp"

namespace qclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// N time-series profiles of common length T, stored one profile per row.
class ProfileSet {
public:
    explicit ProfileSet(Matrix values, std::vector<std::string> labels = {})
        : values_(std::move(values)), labels_(std::move(labels)) {
        if (values_.rows() < 2) {
            fail(ErrorCode::TooFewProfiles,
                 "need at least 2 profiles, got " + std::to_string(values_.rows()));
        }
        if (values_.cols() < 1) fail(ErrorCode::RaggedTable, "profiles must have length >= 1");
        if (!values_.allFinite()) fail(ErrorCode::NonNumericCell, "profile values must be finite");
        if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(values_.rows())) {
            fail(ErrorCode::DimensionMismatch, "label count does not match profile count");
        }
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t length() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    const Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// First `count` profiles, in order.
    ProfileSet head(std::size_t count) const {
        count = std::min(count, size());
        std::vector<std::string> labels;
        if (!labels_.empty()) labels.assign(labels_.begin(), labels_.begin() + static_cast<long>(count));
        return ProfileSet(values_.topRows(static_cast<Eigen::Index>(count)), std::move(labels));
    }

private:
    Matrix values_;
    std::vector<std::string> labels_;
};

enum class MatrixKind { Distance, Kernel, CenteredSimilarity };

constexpr std::string_view to_string(MatrixKind kind) noexcept {
    switch (kind) {
        case MatrixKind::Distance: return "distance";
        case MatrixKind::Kernel: return "kernel";
        case MatrixKind::CenteredSimilarity: return "centered";
    }
    return "unknown";
}

/// Symmetric N x N matrix tagged with its role. Symmetry is enforced on
/// construction by mirroring the upper triangle into the lower one.
class SimilarityMatrix {
public:
    SimilarityMatrix(Matrix values, MatrixKind kind, bool normalized = false)
        : values_(std::move(values)), kind_(kind), normalized_(normalized) {
        if (values_.rows() != values_.cols()) {
            fail(ErrorCode::DimensionMismatch, "similarity matrix must be square");
        }
        values_.triangularView<Eigen::StrictlyLower>() = values_.transpose();
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    MatrixKind kind() const noexcept { return kind_; }
    bool normalized() const noexcept { return normalized_; }
    const Matrix& values() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const {
        return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    double max_element() const { return values_.maxCoeff(); }
    double max_abs_element() const { return values_.cwiseAbs().maxCoeff(); }

private:
    Matrix values_;
    MatrixKind kind_;
    bool normalized_;
};

enum class Layout { RowMajor, ColumnMajor };

struct LoadOptions {
    Layout layout = Layout::RowMajor;
    bool has_header = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

inline double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    const auto* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
    if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        fail(ErrorCode::NonNumericCell, "row " + std::to_string(row + 1) + ", column " +
                                            std::to_string(col + 1) + ": '" + std::string(cell) + "'");
    }
    return value;
}

}  // namespace detail

/// Parses a comma-separated numeric table. Blank lines are skipped; missing
/// or non-finite cells are rejected rather than imputed.
inline ProfileSet load_profiles(std::istream& in, const LoadOptions& options = {}) {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> header;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = options.has_header;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = detail::trim(line);
        if (body.empty()) continue;
        const auto cells = detail::split_commas(body);
        if (header_pending) {
            for (auto c : cells) header.emplace_back(c);
            header_pending = false;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row.push_back(detail::parse_cell(cells[c], line_no - 1, c));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(ErrorCode::RaggedTable, "line " + std::to_string(line_no) + " has " +
                                             std::to_string(row.size()) + " cells, expected " +
                                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorCode::TooFewProfiles, "table is empty");

    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = static_cast<Eigen::Index>(rows.front().size());
    Matrix table(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        for (Eigen::Index c = 0; c < n_cols; ++c) table(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    if (options.layout == Layout::ColumnMajor) table.transposeInPlace();

    std::vector<std::string> labels;
    if (options.layout == Layout::ColumnMajor && header.size() == static_cast<std::size_t>(table.rows())) {
        labels = std::move(header);
    }
    return ProfileSet(std::move(table), std::move(labels));
}

inline ProfileSet load_profiles_file(const std::string& path, const LoadOptions& options = {}) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    return load_profiles(in, options);
}

/// Block-averages consecutive samples, e.g. 5-minute data (12 per hour)
/// down to hourly resolution.
inline ProfileSet hourly_average(const ProfileSet& profiles, std::size_t samples_per_hour) {
    if (samples_per_hour == 0 || profiles.length() % samples_per_hour != 0) {
        fail(ErrorCode::IndivisibleLength, "length " + std::to_string(profiles.length()) +
                                               " is not divisible by " + std::to_string(samples_per_hour));
    }
    const auto blocks = static_cast<Eigen::Index>(profiles.length() / samples_per_hour);
    const auto width = static_cast<Eigen::Index>(samples_per_hour);
    const Matrix& in = profiles.values();
    Matrix out(in.rows(), blocks);
    for (Eigen::Index b = 0; b < blocks; ++b) {
        out.col(b) = in.middleCols(b * width, width).rowwise().mean();
    }
    return ProfileSet(std::move(out), profiles.labels());
}

/// Pairwise Euclidean distances between profiles.
inline SimilarityMatrix distance_matrix(const ProfileSet& profiles) {
    const Matrix& p = profiles.values();
    const Eigen::Index n = p.rows();
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = (p.row(i) - p.row(j)).norm();
    }
    return SimilarityMatrix(std::move(d), MatrixKind::Distance);
}

/// `Linear` evaluates exp(-d / (2 sigma^2)); `Squared` is the conventional
/// Gaussian exp(-d^2 / (2 sigma^2)).
enum class KernelExponent { Linear, Squared };

inline SimilarityMatrix kernel_matrix(const SimilarityMatrix& distances, double sigma,
                                      KernelExponent exponent = KernelExponent::Linear) {
    if (distances.kind() != MatrixKind::Distance) {
        fail(ErrorCode::KindMismatch, "kernel_matrix expects a distance matrix");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        fail(ErrorCode::NonPositiveSigma, "sigma must be positive, got " + std::to_string(sigma));
    }
    const double scale = 1.0 / (2.0 * sigma * sigma);
    Matrix k = exponent == KernelExponent::Linear
                   ? Matrix((-scale * distances.values().array()).exp())
                   : Matrix((-scale * distances.values().array().square()).exp());
    return SimilarityMatrix(std::move(k), MatrixKind::Kernel);
}

/// `SubtractGrand` subtracts the row-mean, column-mean and grand-mean corrections;
/// `Standard` adds the grand mean back (double-centering of the Gram matrix).
enum class Centering { SubtractGrand, Standard };

inline SimilarityMatrix centered_similarity(const SimilarityMatrix& kernel,
                                            Centering centering = Centering::SubtractGrand) {
    if (kernel.kind() != MatrixKind::Kernel) {
        fail(ErrorCode::KindMismatch, "centered_similarity expects a kernel matrix");
    }
    const Matrix& k = kernel.values();
    const Vector row_mean = k.rowwise().mean();
    const Eigen::RowVectorXd col_mean = k.colwise().mean();
    const double grand = k.mean();
    const double last = centering == Centering::SubtractGrand ? -grand : grand;
    Matrix g = k;
    g.colwise() -= row_mean;
    g.rowwise() -= col_mean;
    g.array() += last;
    return SimilarityMatrix(std::move(g), MatrixKind::CenteredSimilarity);
}

/// Affine map (x - min) / (max - min) onto [0, 1].
inline SimilarityMatrix normalize_01(const SimilarityMatrix& m) {
    const double lo = m.values().minCoeff();
    const double hi = m.values().maxCoeff();
    if (!(hi > lo)) fail(ErrorCode::DegenerateRange, "all entries are equal");
    Matrix out = (m.values().array() - lo) / (hi - lo);
    return SimilarityMatrix(std::move(out), m.kind(), true);
}

/// Divides by the largest absolute entry, keeping signs. The result lies in
/// [-1, 1] and, unlike normalize_01, leaves the zero level where it was.
inline SimilarityMatrix scale_max_abs(const SimilarityMatrix& m) {
    const double scale = m.max_abs_element();
    if (!(scale > 0.0)) fail(ErrorCode::DegenerateRange, "matrix is identically zero");
    return SimilarityMatrix(m.values() / scale, m.kind(), false);
}

inline void write_matrix_csv(std::ostream& out, const SimilarityMatrix& m) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    const Matrix& v = m.values();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            if (j) out << ',';
            out << v(i, j);
        }
        out << '\n';
    }
    out.precision(old_precision);
}

inline void write_profiles_csv(std::ostream& out, const ProfileSet& profiles) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    const Matrix& v = profiles.values();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
            if (j) out << ',';
            out << v(i, j);
        }
        out << '\n';
    }
    out.precision(old_precision);
}

}  // namespace qclust

#endif  // QCLUST_PROFILES_HPP
