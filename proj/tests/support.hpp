#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "qclust/qclust.hpp"

namespace support {

inline oracle::Grid to_grid(const qclust::Matrix& m) {
    oracle::Grid g(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return g;
}

inline std::vector<int> to_ints(const qclust::BitVector& b) { return {b.begin(), b.end()}; }

inline qclust::BitVector to_bits(const std::vector<int>& x) { return {x.begin(), x.end()}; }

inline qclust::Matrix random_upper(std::mt19937_64& rng, std::size_t n, double lo = -5.0, double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    qclust::Matrix q = qclust::Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < q.rows(); ++i)
        for (Eigen::Index j = i; j < q.cols(); ++j) q(i, j) = u(rng);
    return q;
}

inline qclust::QuboModel random_qubo(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    return qclust::QuboModel(random_upper(rng, n), u(rng));
}

inline qclust::ProfileSet random_profiles(std::mt19937_64& rng, std::size_t n, std::size_t t) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    qclust::Matrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t));
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        for (Eigen::Index j = 0; j < v.cols(); ++j) v(i, j) = u(rng);
    return qclust::ProfileSet(v);
}

/// Brute-force minimum energy via the independent oracle.
inline double oracle_minimum(const qclust::QuboModel& m) {
    return oracle::enumerate_qubo(to_grid(m.coefficients()), m.offset()).energy;
}

/// Code of the qclust::Error thrown by f, or nullopt if f returns.
inline std::optional<qclust::ErrorCode> code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const qclust::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline std::string fixture_path(const char* name) { return std::string(QCLUST_FIXTURE_DIR) + "/" + name; }

}  // namespace support
