#ifndef QCLUST_SOLVERS_COMMON_HPP
#define QCLUST_SOLVERS_COMMON_HPP

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <string>
#include <string_view>
#include <vector>

#include "qclust/error.hpp"
#include "qclust/qubo.hpp"

namespace qclust {

enum class SolverKind { BruteForce, Anneal, SimCim, KMeans, KMedoids };

constexpr std::string_view to_string(SolverKind kind) noexcept {
    switch (kind) {
        case SolverKind::BruteForce: return "brute-force";
        case SolverKind::Anneal: return "anneal";
        case SolverKind::SimCim: return "sim-cim";
        case SolverKind::KMeans: return "kmeans";
        case SolverKind::KMedoids: return "kmedoids";
    }
    return "unknown";
}

inline SolverKind solver_kind_from_string(std::string_view name) {
    for (auto kind : {SolverKind::BruteForce, SolverKind::Anneal, SolverKind::SimCim, SolverKind::KMeans,
                      SolverKind::KMedoids}) {
        if (name == to_string(kind)) return kind;
    }
    fail(ErrorCode::ConfigError, "unknown solver '" + std::string(name) + "'");
}

/// Geometric schedule T_k = t_start * r^k over `sweeps` sweeps. A zero
/// t_start means max |Q_ij|; a zero t_end means end_ratio * t_start.
struct AnnealParams {
    std::size_t sweeps = 1000;
    std::size_t restarts = 10;
    double t_start = 0.0;
    double t_end = 0.0;
    double end_ratio = 1e-3;
};

/// Mean-field amplitude dynamics
///   da_i/dt = (p(t) - 1 - a_i^2) a_i + eps * sum_j Jt_ij a_j
/// with p ramped linearly, eps = c / sqrt(n + 1) and Jt the negated
/// symmetric coupling matrix (auxiliary field spin included) scaled to unit
/// max-abs entry. Restarts sweep c log-uniformly over
/// [coupling_min, coupling_max].
struct CimParams {
    std::size_t steps = 2000;
    std::size_t restarts = 20;
    double dt = 0.01;
    double pump_start = 0.0;
    double pump_end = 2.0;
    double coupling_min = 10.0;
    double coupling_max = 300.0;
    double amplitude_clamp = 1.5;
    double initial_noise = 0.1;
};

struct BaselineParams {
    std::size_t max_iterations = 300;
    std::size_t restarts = 10;
};

struct SolverConfig {
    SolverKind kind = SolverKind::Anneal;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t brute_force_max_vars = 24;
    bool record_trajectory = false;
    AnnealParams anneal;
    CimParams cim;
    BaselineParams baseline;
};

struct SolveMeta {
    std::string solver;
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    std::size_t iterations = 0;
    std::size_t best_restart = 0;
};

struct SolveResult {
    BitVector bits;
    double energy = 0.0;
    double wall_time_s = 0.0;
    std::vector<double> trajectory;
    SolveMeta meta;
};

/// splitmix64 finaliser; used to fan one root seed out to sub-components.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept {
    return mix_seed(mix_seed(root) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index = 0) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : tag) h = (h ^ c) * 0x100000001b3ULL;
    return derive_seed(derive_seed(root, h), index);
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// Symmetric off-diagonal couplings of a QUBO in compressed-row form, plus
/// the diagonal. Flipping x_i changes the energy by
/// (1 - 2 x_i) * (diag_i + sum_j W_ij x_j).
struct SparseSymmetric {
    std::vector<double> diagonal;
    std::vector<std::size_t> row_start;
    std::vector<std::size_t> column;
    std::vector<double> value;

    std::size_t size() const noexcept { return diagonal.size(); }

    static SparseSymmetric from_upper(const Matrix& upper) {
        const auto n = static_cast<std::size_t>(upper.rows());
        SparseSymmetric s;
        s.diagonal.resize(n);
        std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.diagonal[i] = upper(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = upper(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (v == 0.0) continue;
                rows[i].emplace_back(j, v);
                rows[j].emplace_back(i, v);
            }
        }
        s.row_start.assign(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::sort(rows[i].begin(), rows[i].end());
            s.row_start[i + 1] = s.row_start[i] + rows[i].size();
            for (const auto& [j, v] : rows[i]) {
                s.column.push_back(j);
                s.value.push_back(v);
            }
        }
        return s;
    }
};

/// Runs `task(restart)` for every restart, optionally spread over threads,
/// and returns the results in restart order so the merge is thread-count
/// independent.
template <typename Result, typename Task>
std::vector<Result> run_restarts(std::size_t restarts, std::size_t threads, Task task) {
    std::vector<Result> results(restarts);
    if (threads <= 1 || restarts <= 1) {
        for (std::size_t r = 0; r < restarts; ++r) results[r] = task(r);
        return results;
    }
    const std::size_t workers = std::min(threads, restarts);
    std::vector<std::future<void>> pending;
    pending.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pending.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t r = w; r < restarts; r += workers) results[r] = task(r);
        }));
    }
    for (auto& f : pending) f.get();
    return results;
}

}  // namespace qclust

#endif  // QCLUST_SOLVERS_COMMON_HPP
