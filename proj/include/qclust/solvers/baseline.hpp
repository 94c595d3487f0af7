#ifndef QCLUST_SOLVERS_BASELINE_HPP
#define QCLUST_SOLVERS_BASELINE_HPP

// Classical clustering baselines working directly on the profiles: K-means
// (k-means++ seeding, Lloyd iterations) and K-medoids (PAM swap descent on
// the Euclidean distance matrix).

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "qclust/assignment.hpp"
#include "qclust/profiles.hpp"
#include "qclust/solvers/common.hpp"

namespace qclust {

namespace detail {

inline void check_group_count(std::size_t n_groups, std::size_t n_profiles) {
    if (n_groups < 1 || n_groups > n_profiles) {
        fail(ErrorCode::BadGroupCount, "need 1 <= groups <= profiles, got " + std::to_string(n_groups) + " groups for " +
                                           std::to_string(n_profiles) + " profiles");
    }
}

struct Clustering {
    std::vector<std::size_t> labels;
    double cost = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
};

inline Clustering kmeans_once(const Matrix& x, std::size_t k, std::size_t max_iterations, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(x.rows());
    std::mt19937_64 rng(seed);

    // k-means++ seeding
    Matrix centres(static_cast<Eigen::Index>(k), x.cols());
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    for (std::size_t c = 0; c < k; ++c) {
        centres.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = (x.row(static_cast<Eigen::Index>(i)) - centres.row(static_cast<Eigen::Index>(c))).squaredNorm();
            nearest[i] = std::min(nearest[i], d);
            total += nearest[i];
        }
        if (c + 1 == k) break;
        if (total > 0.0) {
            double target = std::uniform_real_distribution<double>(0.0, total)(rng);
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                target -= nearest[i];
                if (target < 0.0 && nearest[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        }
    }

    Clustering result;
    result.labels.assign(n, 0);
    std::vector<std::size_t> previous(n, k);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        result.iterations = it + 1;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d =
                    (x.row(static_cast<Eigen::Index>(i)) - centres.row(static_cast<Eigen::Index>(c))).squaredNorm();
                if (d < best) {
                    best = d;
                    result.labels[i] = c;
                }
            }
        }
        if (result.labels == previous) break;
        previous = result.labels;

        Matrix sums = Matrix::Zero(centres.rows(), centres.cols());
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums.row(static_cast<Eigen::Index>(result.labels[i])) += x.row(static_cast<Eigen::Index>(i));
            ++counts[result.labels[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            // An emptied centre keeps its previous position.
            if (counts[c]) centres.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / counts[c];
        }
    }
    result.cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        result.cost +=
            (x.row(static_cast<Eigen::Index>(i)) - centres.row(static_cast<Eigen::Index>(result.labels[i]))).squaredNorm();
    }
    return result;
}

inline double medoid_cost(const Matrix& d, const std::vector<std::size_t>& medoids) {
    double cost = 0.0;
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (auto m : medoids) best = std::min(best, d(i, static_cast<Eigen::Index>(m)));
        cost += best;
    }
    return cost;
}

/// Greedy BUILD: start from the most central point, then repeatedly add the
/// point that lowers the total cost most.
inline std::vector<std::size_t> pam_build(const Matrix& d, std::size_t k) {
    const auto n = static_cast<std::size_t>(d.rows());
    std::vector<std::size_t> medoids;
    Eigen::Index first = 0;
    d.rowwise().sum().minCoeff(&first);
    medoids.push_back(static_cast<std::size_t>(first));
    while (medoids.size() < k) {
        double best_cost = std::numeric_limits<double>::infinity();
        std::size_t best = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (std::find(medoids.begin(), medoids.end(), c) != medoids.end()) continue;
            medoids.push_back(c);
            const double cost = medoid_cost(d, medoids);
            medoids.pop_back();
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        medoids.push_back(best);
    }
    return medoids;
}

inline Clustering kmedoids_once(const Matrix& d, std::size_t k, std::size_t max_iterations, std::uint64_t seed,
                                bool build) {
    const auto n = static_cast<std::size_t>(d.rows());
    std::vector<std::size_t> medoids;
    if (build) {
        medoids = pam_build(d, k);
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        medoids.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    }

    Clustering result;
    result.cost = medoid_cost(d, medoids);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        result.iterations = it + 1;
        double best_cost = result.cost;
        std::vector<std::size_t> best_medoids;
        for (std::size_t m = 0; m < k; ++m) {
            for (std::size_t c = 0; c < n; ++c) {
                if (std::find(medoids.begin(), medoids.end(), c) != medoids.end()) continue;
                auto trial = medoids;
                trial[m] = c;
                const double cost = medoid_cost(d, trial);
                if (cost < best_cost - 1e-12 * std::max(1.0, best_cost)) {
                    best_cost = cost;
                    best_medoids = std::move(trial);
                }
            }
        }
        if (best_medoids.empty()) break;
        medoids = std::move(best_medoids);
        result.cost = best_cost;
    }

    result.labels.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < k; ++m) {
            const double v = d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(medoids[m]));
            if (v < best) {
                best = v;
                result.labels[i] = m;
            }
        }
    }
    return result;
}

}  // namespace detail

/// Clusters the profiles with K-means or K-medoids. Restarts draw their own
/// seed streams; the lowest-cost restart wins, ties going to the lower index.
/// K-medoids restart 0 uses the deterministic BUILD initialisation.
inline Assignment baseline_cluster(const ProfileSet& profiles, std::size_t n_groups, const SolverConfig& config,
                                   SolveMeta* meta = nullptr) {
    if (config.kind != SolverKind::KMeans && config.kind != SolverKind::KMedoids) {
        fail(ErrorCode::ConfigError, "baseline_cluster needs a KMeans or KMedoids config");
    }
    detail::check_group_count(n_groups, profiles.size());
    const BaselineParams& params = config.baseline;
    if (params.restarts == 0 || params.max_iterations == 0) {
        fail(ErrorCode::ConfigError, "baseline restarts and iterations must be positive");
    }

    const bool medoids = config.kind == SolverKind::KMedoids;
    const Matrix distances = medoids ? distance_matrix(profiles).values() : Matrix();
    const std::string tag(to_string(config.kind));
    auto runs = run_restarts<detail::Clustering>(params.restarts, config.threads, [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(config.seed, tag, r);
        return medoids ? detail::kmedoids_once(distances, n_groups, params.max_iterations, seed, r == 0)
                       : detail::kmeans_once(profiles.values(), n_groups, params.max_iterations, seed);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].cost < runs[best].cost) best = r;
    }
    if (meta) {
        meta->solver = tag;
        meta->seed = config.seed;
        meta->restarts = params.restarts;
        meta->iterations = runs[best].iterations;
        meta->best_restart = best;
    }
    return Assignment{std::move(runs[best].labels), n_groups};
}

}  // namespace qclust

#endif  // QCLUST_SOLVERS_BASELINE_HPP
