#ifndef QCLUST_SOLVERS_CIM_HPP
#define QCLUST_SOLVERS_CIM_HPP

// Simulated coherent Ising machine: deterministic mean-field amplitude
// dynamics of a network of degenerate parametric oscillators. Spins are read
// out as the signs of the amplitudes at every step and the lowest-energy
// readout is kept.

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qclust/solvers/common.hpp"

namespace qclust {

inline void validate(const CimParams& p) {
    if (p.steps == 0 || p.restarts == 0) fail(ErrorCode::InvalidSchedule, "steps and restarts must be positive");
    if (!(p.dt > 0.0) || !(p.amplitude_clamp > 0.0) || !(p.initial_noise >= 0.0)) {
        fail(ErrorCode::InvalidSchedule, "dt and amplitude clamp must be positive, noise non-negative");
    }
    if (!(p.pump_end >= p.pump_start)) fail(ErrorCode::InvalidSchedule, "pump ramp must be non-decreasing");
    if (!(p.coupling_min > 0.0) || !(p.coupling_max >= p.coupling_min)) {
        fail(ErrorCode::InvalidSchedule, "need coupling_max >= coupling_min > 0");
    }
}

/// Coupling constant used by restart r: log-spaced over [coupling_min,
/// coupling_max] across the restarts.
inline double restart_coupling(const CimParams& p, std::size_t restart) {
    if (p.restarts <= 1 || p.coupling_max == p.coupling_min) return p.coupling_min;
    const double t = static_cast<double>(restart) / static_cast<double>(p.restarts - 1);
    return p.coupling_min * std::pow(p.coupling_max / p.coupling_min, t);
}

namespace detail {

/// Ising model folded onto n + 1 spins: spin n is the auxiliary spin that
/// carries the fields as couplings h_i s_i s_aux.
struct CimNetwork {
    std::size_t spins = 0;               // real spins, excluding the auxiliary one
    SparseSymmetric coupling;            // negated, unit max-abs, size spins + 1
    SparseSymmetric ising;               // J mirrored, zero diagonal, size spins
    std::vector<double> fields;
    double offset = 0.0;
};

inline CimNetwork make_network(const QuboModel& model) {
    const IsingModel ising = ising_from_qubo(model);
    const auto n = static_cast<Eigen::Index>(ising.size());
    Matrix extended = Matrix::Zero(n + 1, n + 1);
    extended.topLeftCorner(n, n) = ising.couplings();
    extended.topRightCorner(n, 1) = ising.fields();
    const double scale = extended.cwiseAbs().maxCoeff();
    CimNetwork net;
    net.spins = static_cast<std::size_t>(n);
    net.coupling = SparseSymmetric::from_upper(scale > 0.0 ? Matrix(-extended / scale) : extended);
    net.ising = SparseSymmetric::from_upper(ising.couplings());
    net.fields.assign(ising.fields().data(), ising.fields().data() + n);
    net.offset = ising.offset();
    return net;
}

inline double network_energy(const CimNetwork& net, const std::vector<std::int8_t>& s) {
    double energy = net.offset;
    for (std::size_t i = 0; i < net.spins; ++i) {
        double local = 0.0;
        for (std::size_t k = net.ising.row_start[i]; k < net.ising.row_start[i + 1]; ++k) {
            if (net.ising.column[k] > i) local += net.ising.value[k] * s[net.ising.column[k]];
        }
        energy += (local + net.fields[i]) * s[i];
    }
    return energy;
}

struct CimRun {
    std::vector<std::int8_t> spins;
    double energy = std::numeric_limits<double>::infinity();
    std::vector<double> trajectory;
};

inline CimRun cim_once(const CimNetwork& net, const CimParams& p, double coupling_constant, std::uint64_t seed,
                       bool record) {
    const std::size_t n = net.spins;
    const std::size_t aux = n;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-p.initial_noise, p.initial_noise);

    std::vector<double> amp(n + 1);
    for (auto& a : amp) a = noise(rng);
    std::vector<double> next(n + 1);
    // The auxiliary spin stays up; its amplitude follows the mean amplitude
    // of the real spins so the fields are weighed on the same scale as the
    // couplings.
    const auto pin_aux = [&](std::vector<double>& a) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += std::abs(a[i]);
        a[aux] = n ? mean / static_cast<double>(n) : 0.0;
    };
    pin_aux(amp);

    const double eps = coupling_constant / std::sqrt(static_cast<double>(n + 1));
    const double ramp = p.steps > 1 ? (p.pump_end - p.pump_start) / static_cast<double>(p.steps - 1) : 0.0;

    CimRun run;
    run.spins.assign(n, 1);
    std::vector<std::int8_t> spins(n, 0);
    if (record) run.trajectory.reserve(p.steps);

    for (std::size_t step = 0; step < p.steps; ++step) {
        const double pump = p.pump_start + ramp * static_cast<double>(step);
        for (std::size_t i = 0; i <= n; ++i) {
            double feedback = 0.0;
            for (std::size_t k = net.coupling.row_start[i]; k < net.coupling.row_start[i + 1]; ++k) {
                feedback += net.coupling.value[k] * amp[net.coupling.column[k]];
            }
            const double a = amp[i];
            const double updated = a + p.dt * ((pump - 1.0 - a * a) * a + eps * feedback);
            if (!std::isfinite(updated)) {
                fail(ErrorCode::DivergedAmplitudes, "amplitude " + std::to_string(i) + " left the finite range at step " +
                                                        std::to_string(step));
            }
            next[i] = std::clamp(updated, -p.amplitude_clamp, p.amplitude_clamp);
        }
        amp.swap(next);
        pin_aux(amp);

        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::int8_t s = amp[i] >= 0.0 ? 1 : -1;
            changed |= s != spins[i];
            spins[i] = s;
        }
        if (changed) {
            const double energy = network_energy(net, spins);
            if (energy < run.energy) {
                run.energy = energy;
                run.spins = spins;
            }
        }
        if (record) run.trajectory.push_back(run.energy);
    }
    return run;
}

}  // namespace detail

/// Converts the QUBO to Ising form, integrates the amplitude equations with
/// explicit Euler steps under a linear pump ramp, and returns the best
/// readout over all steps and restarts mapped back to bits.
inline SolveResult cim_solve(const QuboModel& model, const SolverConfig& config) {
    if (config.kind != SolverKind::SimCim) fail(ErrorCode::ConfigError, "cim_solve needs a SimCim config");
    const CimParams& params = config.cim;
    validate(params);
    const detail::CimNetwork net = detail::make_network(model);

    const Stopwatch clock;
    auto runs = run_restarts<detail::CimRun>(params.restarts, config.threads, [&](std::size_t r) {
        return detail::cim_once(net, params, restart_coupling(params, r), derive_seed(config.seed, "sim-cim", r),
                                config.record_trajectory);
    });
    const double elapsed = clock.seconds();

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].energy < runs[best].energy) best = r;
    }

    SolveResult result;
    result.wall_time_s = elapsed;
    result.bits = bits_from_spins(runs[best].spins);
    result.energy = qubo_energy(model, result.bits);
    if (config.record_trajectory) {
        double running = std::numeric_limits<double>::infinity();
        for (const auto& run : runs) {
            for (double e : run.trajectory) {
                running = std::min(running, e);
                result.trajectory.push_back(running);
            }
        }
    }
    result.meta.solver = std::string(to_string(SolverKind::SimCim));
    result.meta.seed = config.seed;
    result.meta.restarts = params.restarts;
    result.meta.iterations = params.steps;
    result.meta.best_restart = best;
    return result;
}

}  // namespace qclust

#endif  // QCLUST_SOLVERS_CIM_HPP
