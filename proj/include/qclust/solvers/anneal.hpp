#ifndef QCLUST_SOLVERS_ANNEAL_HPP
#define QCLUST_SOLVERS_ANNEAL_HPP

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qclust/solvers/common.hpp"

namespace qclust {

struct AnnealSchedule {
    double t_start = 0.0;
    double t_end = 0.0;
    double ratio = 1.0;  // per-sweep multiplier
};

inline AnnealSchedule resolve_schedule(const QuboModel& model, const AnnealParams& params) {
    if (params.sweeps == 0 || params.restarts == 0) {
        fail(ErrorCode::InvalidSchedule, "sweeps and restarts must be positive");
    }
    AnnealSchedule s;
    s.t_start = params.t_start > 0.0 ? params.t_start : model.max_abs_coefficient();
    if (s.t_start <= 0.0) s.t_start = 1.0;  // flat model: any temperature works
    s.t_end = params.t_end > 0.0 ? params.t_end : params.end_ratio * s.t_start;
    if (!(s.t_end > 0.0) || !(s.t_start >= s.t_end) || !std::isfinite(s.t_start)) {
        fail(ErrorCode::InvalidSchedule, "need t_start >= t_end > 0, got t_start=" + std::to_string(s.t_start) +
                                             ", t_end=" + std::to_string(s.t_end));
    }
    s.ratio = params.sweeps > 1 ? std::pow(s.t_end / s.t_start, 1.0 / static_cast<double>(params.sweeps - 1)) : 1.0;
    return s;
}

namespace detail {

struct AnnealRun {
    BitVector bits;
    double energy = std::numeric_limits<double>::infinity();
    std::vector<double> trajectory;
};

inline AnnealRun anneal_once(const QuboModel& model, const SparseSymmetric& w, const AnnealSchedule& schedule,
                             std::size_t sweeps, std::uint64_t seed, bool record) {
    const std::size_t n = w.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    BitVector x(n);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1U);
    std::vector<double> field(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!x[i]) continue;
        for (std::size_t k = w.row_start[i]; k < w.row_start[i + 1]; ++k) field[w.column[k]] += w.value[k];
    }
    double energy = qubo_energy(model, x);

    AnnealRun run;
    run.bits = x;
    run.energy = energy;
    if (record) run.trajectory.reserve(sweeps);

    double temperature = schedule.t_start;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = (x[i] ? -1.0 : 1.0) * (w.diagonal[i] + field[i]);
            if (delta > 0.0 && uniform(rng) >= std::exp(-delta / temperature)) continue;
            x[i] ^= 1;
            energy += delta;
            const double sign = x[i] ? 1.0 : -1.0;
            for (std::size_t k = w.row_start[i]; k < w.row_start[i + 1]; ++k) field[w.column[k]] += sign * w.value[k];
            if (energy < run.energy) {
                run.energy = energy;
                run.bits = x;
            }
        }
        if (record) run.trajectory.push_back(run.energy);
        temperature *= schedule.ratio;
    }
    run.energy = qubo_energy(model, run.bits);
    return run;
}

}  // namespace detail

/// Single-flip Metropolis annealing with a geometric temperature schedule.
/// Each restart draws its own stream from the root seed; the best restart
/// wins, ties going to the lower restart index.
inline SolveResult anneal_solve(const QuboModel& model, const SolverConfig& config) {
    if (config.kind != SolverKind::Anneal) fail(ErrorCode::ConfigError, "anneal_solve needs an Anneal config");
    const AnnealParams& params = config.anneal;
    const AnnealSchedule schedule = resolve_schedule(model, params);
    const SparseSymmetric w = SparseSymmetric::from_upper(model.coefficients());

    const Stopwatch clock;
    auto runs = run_restarts<detail::AnnealRun>(params.restarts, config.threads, [&](std::size_t r) {
        return detail::anneal_once(model, w, schedule, params.sweeps, derive_seed(config.seed, "anneal", r),
                                   config.record_trajectory);
    });
    const double elapsed = clock.seconds();

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].energy < runs[best].energy) best = r;
    }

    SolveResult result;
    result.wall_time_s = elapsed;
    result.bits = runs[best].bits;
    result.energy = runs[best].energy;
    if (config.record_trajectory) {
        double running = std::numeric_limits<double>::infinity();
        for (const auto& run : runs) {
            for (double e : run.trajectory) {
                running = std::min(running, e);
                result.trajectory.push_back(running);
            }
        }
    }
    result.meta.solver = std::string(to_string(SolverKind::Anneal));
    result.meta.seed = config.seed;
    result.meta.restarts = params.restarts;
    result.meta.iterations = params.sweeps;
    result.meta.best_restart = best;
    return result;
}

}  // namespace qclust

#endif  // QCLUST_SOLVERS_ANNEAL_HPP
